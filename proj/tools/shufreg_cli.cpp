// Command-line front end: solve one dataset, or run an experiment protocol
// and write a CSV/JSON report.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "shufreg/baselines.hpp"
#include "shufreg/gncr.hpp"
#include "shufreg/harness/csv.hpp"
#include "shufreg/harness/experiment.hpp"
#include "shufreg/harness/preprocess.hpp"
#include "shufreg/harness/report.hpp"

namespace {

using namespace shufreg;
using namespace shufreg::harness;

enum Exit { kOk = 0, kUsage = 1, kData = 2, kNonConvergence = 3 };

struct SolverOptions {
  std::optional<double> lambda;
  double gamma = 1.3;
  std::optional<double> mu0;
  int max_outer = 200;
  int max_inner = 300;

  GncrConfig gncr() const {
    GncrConfig c;
    c.lambda = lambda;
    c.gamma = gamma;
    c.mu0 = mu0;
    c.max_outer_iters = max_outer;
    c.max_inner_iters = max_inner;
    return c;
  }
};

void add_solver_options(CLI::App* cmd, SolverOptions& o) {
  cmd->add_option("--lambda", o.lambda, "ridge parameter (default: 1e-6 * ||X||_F^2 / d_x)");
  cmd->add_option("--gamma", o.gamma, "continuation factor, > 1")->capture_default_str();
  cmd->add_option("--mu0", o.mu0, "initial regularization weight (default: mu_max / 1000)");
  cmd->add_option("--max-outer", o.max_outer, "continuation stage cap")->capture_default_str();
  cmd->add_option("--max-inner", o.max_inner, "Frank-Wolfe iterations per stage")
      ->capture_default_str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error("write to '" + path + "' failed");
}

Json matrix_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

struct SolveOptions {
  std::string data;
  std::vector<std::string> labels;
  std::string seeds_file;
  std::string algo = "gncr";
  std::uint64_t rng_seed = 0;
  int restarts = 0;
  std::string out = "-";
  std::string format = "json";
  bool preprocess = false;
  double outlier_z = 4.0;
  SolverOptions solver;
};

int run_solve(const SolveOptions& o, bool strict) {
  Dataset raw = load_csv(o.data, o.labels);
  std::optional<TransformRecord> record;
  Dataset data = raw;
  if (o.preprocess) {
    auto [d, rec] = preprocess(raw, PreprocessPolicy{o.outlier_z, true});
    data = std::move(d);
    record = std::move(rec);
  }
  SeedSet seeds;
  if (!o.seeds_file.empty()) {
    if (o.preprocess && data.rows() != raw.rows()) {
      throw DataError("seed indices refer to raw rows, but preprocessing removed outliers; "
                      "rerun with --outlier-z 0");
    }
    seeds = load_seeds_csv(o.seeds_file);
  }

  SolveResult res;
  const GncrConfig gcfg = o.solver.gncr();
  if (o.algo == "gncr") {
    res = gncr_solve(data, seeds, gcfg);
  } else if (o.algo == "naive") {
    NaiveAoConfig nc;
    nc.lambda = o.solver.lambda.value_or(0.0);
    nc.restarts = o.restarts;
    nc.rng_seed = o.rng_seed;
    res = naive_ao(data, nc);
  } else {
    res.perm = Permutation::identity(data.rows());
    res.beta = ols_unshuffled(data, o.solver.lambda.value_or(0.0));
    res.y_est = data.y();
  }

  if (o.format == "csv") {
    std::string text = "x_row,y_row\n";
    for (Index i = 0; i < res.perm.size(); ++i) {
      text += std::to_string(i) + "," + std::to_string(res.perm[i]) + "\n";
    }
    write_text(o.out, text);
  } else {
    Json trace = Json::array();
    for (const auto& s : res.trace) {
      trace.push_back(Json{{"mu", s.mu},
                           {"iterations", s.iterations},
                           {"objective", s.objective},
                           {"step", s.step},
                           {"converged", s.converged}});
    }
    Json doc{{"algorithm", o.algo},
             {"rows", data.rows()},
             {"perm", res.perm.mapping()},
             {"beta", matrix_json(res.beta)},
             {"train_error", train_error(data, res.perm, res.beta)},
             {"converged", res.converged},
             {"trace", trace},
             {"warnings", res.warnings}};
    if (record) {
      const RawModel raw_model = to_raw_model(res.beta, *record);
      doc["raw_model"] = Json{{"beta", matrix_json(raw_model.beta)},
                              {"intercept", matrix_json(raw_model.intercept)}};
      doc["kept_rows"] = record->kept_rows;
      doc["preprocess_warnings"] = record->warnings;
    }
    write_text(o.out, doc.dump(2) + "\n");
  }
  for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
  if (!res.converged && strict) {
    std::cerr << "error: solver hit an iteration cap\n";
    return kNonConvergence;
  }
  return kOk;
}

struct ExperimentOptions {
  ExperimentConfig cfg;
  std::vector<std::string> algos{"gncr", "naive", "ols"};
  std::string out = "-";
  std::string format = "csv";
  bool no_preprocess = false;
  SolverOptions solver;
};

void add_experiment_options(CLI::App* cmd, ExperimentOptions& o) {
  cmd->add_option("--repeats", o.cfg.repeats, "repetitions per cell")->capture_default_str();
  cmd->add_option("--rng-seed", o.cfg.rng_seed, "master RNG seed")->capture_default_str();
  cmd->add_option("--threads", o.cfg.threads, "worker threads; reports do not depend on it")
      ->capture_default_str();
  cmd->add_option("--algo", o.algos, "algorithms to run: gncr, naive, ols")
      ->check(CLI::IsMember({"gncr", "naive", "ols"}))
      ->capture_default_str();
  cmd->add_option("--naive-restarts", o.cfg.naive_restarts, "extra random restarts for naive AO");
  cmd->add_option("--out", o.out, "report path, '-' for stdout")->capture_default_str();
  cmd->add_option("--format", o.format, "report format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  add_solver_options(cmd, o.solver);
}

void add_synthetic_options(CLI::App* cmd, ExperimentOptions& o) {
  cmd->add_option("--n", o.cfg.ns, "sample sizes")->capture_default_str();
  cmd->add_option("--sigma", o.cfg.sigmas, "noise levels")->capture_default_str();
  cmd->add_option("--dx", o.cfg.d_x, "feature dimension")->capture_default_str();
  cmd->add_option("--dy", o.cfg.d_y, "label dimension")->capture_default_str();
  cmd->add_option("--c1", o.cfg.c1, "recovery threshold constant")->capture_default_str();
}

void add_dataset_options(CLI::App* cmd, ExperimentOptions& o, bool required) {
  auto* data = cmd->add_option("--data", o.cfg.dataset_path, "CSV dataset with a header row");
  auto* labels = cmd->add_option("--labels", o.cfg.label_columns, "label column names")
                     ->delimiter(',');
  if (required) {
    data->required();
    labels->required();
  } else {
    labels->needs(data);
    data->needs(labels);
  }
  cmd->add_option("--split", o.cfg.split_ratio, "training fraction")->capture_default_str();
  cmd->add_option("--outlier-z", o.cfg.policy.outlier_z, "outlier threshold, 0 disables")
      ->capture_default_str();
  cmd->add_flag("--no-preprocess", o.no_preprocess, "use raw columns");
}

int run_experiment_cmd(ExperimentOptions& o, Mode mode, bool strict) {
  o.cfg.mode = mode;
  o.cfg.gncr = o.solver.gncr();
  o.cfg.baseline_lambda = o.solver.lambda.value_or(0.0);
  o.cfg.preprocess = !o.no_preprocess;
  o.cfg.algorithms = {false, false, false};
  for (const auto& a : o.algos) {
    if (a == "gncr") o.cfg.algorithms.gncr = true;
    if (a == "naive") o.cfg.algorithms.naive = true;
    if (a == "ols") o.cfg.algorithms.ols = true;
  }
  const auto records = run_experiment(o.cfg);
  emit_report(records, o.cfg, parse_format(o.format), o.out);

  int failures = 0;
  bool unconverged = false;
  for (const auto& r : records) {
    if (!r.error.empty()) {
      ++failures;
      std::cerr << "trial " << r.index << ": " << r.error << "\n";
    }
    for (const auto& m : r.results) {
      if (!m.error.empty()) {
        ++failures;
        std::cerr << "trial " << r.index << " (" << m.algorithm << "): " << m.error << "\n";
      }
      unconverged = unconverged || !m.converged;
    }
  }
  if (strict && (unconverged || failures > 0)) {
    std::cerr << "error: " << failures << " failed trials"
              << (unconverged ? ", some solves hit an iteration cap" : "") << "\n";
    return kNonConvergence;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shuffled linear regression: solver and experiment runner"};
  app.require_subcommand(1);
  app.fallthrough();
  bool strict = false;
  app.add_flag("--strict", strict, "exit with status 3 if any solve fails to converge");

  SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "estimate the pairing and coefficients of one dataset");
  solve_cmd->add_option("--data", solve.data, "CSV dataset with a header row")->required();
  solve_cmd->add_option("--labels", solve.labels, "label column names")->required()->delimiter(',');
  solve_cmd->add_option("--seeds-file", solve.seeds_file, "CSV of known pairs: x_row,y_row");
  solve_cmd->add_option("--algo", solve.algo, "solver")
      ->check(CLI::IsMember({"gncr", "naive", "ols"}))
      ->capture_default_str();
  solve_cmd->add_option("--rng-seed", solve.rng_seed, "seed for randomized restarts");
  solve_cmd->add_option("--naive-restarts", solve.restarts, "extra random restarts for naive AO");
  solve_cmd->add_option("--out", solve.out, "output path, '-' for stdout")->capture_default_str();
  solve_cmd->add_option("--format", solve.format, "json: full result; csv: pairing only")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  solve_cmd->add_flag("--preprocess", solve.preprocess, "remove outliers and scale columns first");
  solve_cmd->add_option("--outlier-z", solve.outlier_z, "outlier threshold, 0 disables")
      ->capture_default_str();
  add_solver_options(solve_cmd, solve.solver);

  ExperimentOptions grid;
  auto* grid_cmd = app.add_subcommand("synth-grid", "synthetic (n, sigma) grid");
  add_experiment_options(grid_cmd, grid);
  add_synthetic_options(grid_cmd, grid);

  ExperimentOptions sweep;
  sweep.cfg.seed_ratios = {0.0, 0.2, 0.4, 0.6, 0.8};
  sweep.cfg.ns = {100};
  sweep.cfg.sigmas = {0.01};
  sweep.algos = {"gncr"};
  auto* sweep_cmd = app.add_subcommand("seed-sweep", "seed-ratio sweep on a dataset or synthetic data");
  add_experiment_options(sweep_cmd, sweep);
  add_synthetic_options(sweep_cmd, sweep);
  add_dataset_options(sweep_cmd, sweep, false);
  sweep_cmd->add_option("--ratios", sweep.cfg.seed_ratios, "seed ratios in [0, 1]")
      ->capture_default_str();

  ExperimentOptions bench;
  bench.cfg.repeats = 10;
  bench.cfg.record_timing = true;
  auto* bench_cmd = app.add_subcommand("bench", "repeated split/shuffle benchmark on a dataset");
  add_experiment_options(bench_cmd, bench);
  add_dataset_options(bench_cmd, bench, true);
  bool no_timing = false;
  bench_cmd->add_flag("--no-timing", no_timing, "omit wall-clock times for byte-stable reports");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*solve_cmd) return run_solve(solve, strict);
    if (*grid_cmd) return run_experiment_cmd(grid, Mode::synthetic_grid, strict);
    if (*sweep_cmd) return run_experiment_cmd(sweep, Mode::seed_sweep, strict);
    if (*bench_cmd) {
      bench.cfg.record_timing = !no_timing;
      return run_experiment_cmd(bench, Mode::real, strict);
    }
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNonConvergence;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  }
  return kUsage;
}

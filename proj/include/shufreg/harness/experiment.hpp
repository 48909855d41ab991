#pragma once

// Experiment protocols: synthetic (n, sigma) grids, real-data split/shuffle
// benchmarks, and seed-ratio sweeps. Every trial derives its own RNG
// substream from (rng_seed, cell, repeat), so results do not depend on the
// number of worker threads.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "shufreg/baselines.hpp"
#include "shufreg/gncr.hpp"
#include "shufreg/harness/csv.hpp"
#include "shufreg/harness/preprocess.hpp"
#include "shufreg/metrics.hpp"
#include "shufreg/rng.hpp"
#include "shufreg/synth.hpp"

namespace shufreg::harness {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

enum class Mode { synthetic_grid, real, seed_sweep };

inline const char* to_string(Mode m) {
  switch (m) {
    case Mode::synthetic_grid: return "synthetic-grid";
    case Mode::real: return "real";
    case Mode::seed_sweep: return "seed-sweep";
  }
  return "?";
}

inline Mode parse_mode(const std::string& s) {
  if (s == "synthetic-grid") return Mode::synthetic_grid;
  if (s == "real") return Mode::real;
  if (s == "seed-sweep") return Mode::seed_sweep;
  throw DataError("unknown experiment mode '" + s + "'");
}

struct AlgorithmSet {
  bool gncr = true;
  bool naive = true;
  bool ols = true;  // least squares given the true pairing
};

struct ExperimentConfig {
  Mode mode = Mode::synthetic_grid;

  // Synthetic instances; also used by seed sweeps when dataset_path is empty.
  std::vector<Index> ns{20};
  std::vector<double> sigmas{0.0};
  Index d_x = 2;
  Index d_y = 1;

  // Real data.
  std::string dataset_path;
  std::vector<std::string> label_columns;
  bool preprocess = true;
  PreprocessPolicy policy;
  double split_ratio = 0.8;

  std::vector<double> seed_ratios{0.0};
  int repeats = 1;

  GncrConfig gncr;
  double baseline_lambda = 0.0;
  int naive_restarts = 0;
  AlgorithmSet algorithms;

  std::uint64_t rng_seed = 0;
  int threads = 1;
  bool record_timing = false;  // wall-clock seconds make reports machine-dependent
  double c1 = 3.0;

  void validate() const {
    if (repeats < 1) throw DataError("repeats must be >= 1");
    if (!(split_ratio > 0.0 && split_ratio < 1.0)) throw DataError("split ratio must be in (0, 1)");
    if (threads < 1) throw DataError("threads must be >= 1");
    if (!(baseline_lambda >= 0.0)) throw DataError("baseline lambda must be >= 0");
    if (naive_restarts < 0) throw DataError("naive restarts must be >= 0");
    gncr.validate();
    const bool needs_synthetic = mode == Mode::synthetic_grid ||
                                 (mode == Mode::seed_sweep && dataset_path.empty());
    if (needs_synthetic) {
      if (ns.empty() || sigmas.empty()) throw DataError("grid needs at least one n and one sigma");
      for (Index n : ns) {
        if (n < 2) throw DataError("grid sizes must be >= 2");
      }
      for (double s : sigmas) {
        if (!(s >= 0.0) || !std::isfinite(s)) throw DataError("sigma must be finite and >= 0");
      }
      if (d_x < 1 || d_y < 1) throw DataError("d_x and d_y must be >= 1");
    } else if (dataset_path.empty()) {
      throw DataError("real mode needs a dataset path");
    }
    if (mode == Mode::seed_sweep) {
      if (seed_ratios.empty()) throw DataError("seed sweep needs at least one ratio");
      for (double r : seed_ratios) {
        if (!(r >= 0.0 && r <= 1.0)) throw DataError("seed ratio must be in [0, 1]");
      }
    }
  }
};

/// Grid coordinates of a trial; fields that do not apply are NaN.
struct Cell {
  double n = kNaN;
  double sigma = kNaN;
  double seed_ratio = kNaN;
};

struct AlgoMetrics {
  std::string algorithm;
  double overlap = kNaN;
  double beta_corr = kNaN;
  double train_error = kNaN;
  double test_error = kNaN;  // NaN without a held-out split
  double seconds = kNaN;     // NaN unless timing is recorded
  bool converged = true;
  int stages = 0;
  int iterations = 0;
  std::string error;  // non-empty when the solver threw
};

struct TrialRecord {
  std::size_t index = 0;
  Cell cell;
  int repeat = 0;
  std::uint64_t instance_seed = 0;
  std::optional<bool> recovery_feasible;  // synthetic instances only
  std::vector<AlgoMetrics> results;
  std::string error;  // non-empty when instance construction failed
};

namespace detail {

struct Instance {
  Dataset train;
  Permutation truth;
  Coefficients beta_ref;
  std::optional<Dataset> test;
};

/// Runs `fn(i)` for i in [0, count) on `threads` workers.
template <class Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

inline double round_ms(double seconds) { return std::round(seconds * 1000.0) / 1000.0; }

inline double safe_corr(const Coefficients& est, const Coefficients& ref) {
  try {
    return beta_correlation(est, ref);
  } catch (const DataError&) {
    return kNaN;
  }
}

template <class Solve>
AlgoMetrics evaluate(const std::string& name, const Instance& inst, bool timing, Solve&& solve) {
  AlgoMetrics m;
  m.algorithm = name;
  try {
    const auto start = std::chrono::steady_clock::now();
    SolveResult res = solve();
    const auto stop = std::chrono::steady_clock::now();
    if (timing) m.seconds = round_ms(std::chrono::duration<double>(stop - start).count());
    m.overlap = perm_overlap(res.perm, inst.truth);
    m.beta_corr = safe_corr(res.beta, inst.beta_ref);
    m.train_error = train_error(inst.train, res.perm, res.beta);
    if (inst.test) m.test_error = test_error(*inst.test, res.beta);
    m.converged = res.converged;
    m.stages = static_cast<int>(res.trace.size());
    for (const auto& st : res.trace) m.iterations += st.iterations;
  } catch (const std::exception& e) {
    m.error = e.what();
    m.converged = false;
  }
  return m;
}

inline std::vector<AlgoMetrics> run_algorithms(const ExperimentConfig& cfg, const Instance& inst,
                                               const SeedSet& seeds, std::uint64_t trial_seed) {
  std::vector<AlgoMetrics> out;
  if (cfg.algorithms.gncr) {
    out.push_back(evaluate("gncr", inst, cfg.record_timing,
                           [&] { return gncr_solve(inst.train, seeds, cfg.gncr); }));
  }
  if (cfg.algorithms.naive) {
    NaiveAoConfig nc;
    nc.lambda = cfg.baseline_lambda;
    nc.restarts = cfg.naive_restarts;
    nc.rng_seed = derive_seed(trial_seed, "naive");
    nc.use_fast_path = cfg.gncr.use_fast_path;
    out.push_back(evaluate("naive", inst, cfg.record_timing,
                           [&] { return naive_ao(inst.train, nc); }));
  }
  if (cfg.algorithms.ols) {
    out.push_back(evaluate("ols", inst, cfg.record_timing, [&] {
      SolveResult r;
      r.perm = inst.truth;
      r.beta = ridge_solve(inst.train, inst.truth, cfg.baseline_lambda);
      r.y_est = inst.truth.apply(inst.train.y());
      return r;
    }));
  }
  return out;
}

inline Instance synthetic_instance(const ExperimentConfig& cfg, Index n, double sigma,
                                   std::uint64_t seed, TrialRecord& rec) {
  SynthInstance s = generate(n, cfg.d_x, cfg.d_y, sigma, seed);
  rec.recovery_feasible = recovery_feasible(n, snr(s.truth_beta, sigma), cfg.c1);
  return {std::move(s.data), std::move(s.truth_perm), std::move(s.truth_beta), std::nullopt};
}

inline Instance real_instance(const ExperimentConfig& cfg, const Dataset& data,
                              std::uint64_t seed) {
  auto [train, test] = split(data, cfg.split_ratio, seed);
  Coefficients beta_ref = ols_unshuffled(train, cfg.baseline_lambda);
  ShuffledData sh = shuffle_labels(train, seed);
  return {std::move(sh.data), std::move(sh.truth), std::move(beta_ref), std::move(test)};
}

/// The first round(ratio * n) X-rows of a per-instance random order, paired
/// with their true Y-rows. Larger ratios extend smaller ones.
inline SeedSet nested_seeds(const Permutation& truth, double ratio, std::uint64_t seed) {
  const Index n = truth.size();
  const auto k = static_cast<Index>(std::lround(ratio * static_cast<double>(n)));
  const Permutation order = Rng(seed, "seeds").permutation(n);
  std::vector<std::pair<Index, Index>> pairs;
  for (Index t = 0; t < k; ++t) pairs.emplace_back(order[t], truth[order[t]]);
  return SeedSet(pairs);
}

inline std::uint64_t synthetic_seed(std::uint64_t rng_seed, Index n, int repeat) {
  return derive_seed(derive_seed(rng_seed, static_cast<std::uint64_t>(n)),
                     static_cast<std::uint64_t>(repeat));
}

inline Dataset load_dataset(const ExperimentConfig& cfg) {
  Dataset raw = load_csv(cfg.dataset_path, cfg.label_columns);
  if (!cfg.preprocess) return raw;
  return preprocess(raw, cfg.policy).first;
}

}  // namespace detail

/// Each (n, sigma) cell and repeat: generate, solve with every enabled
/// algorithm, record metrics. A repeat shares its instance seed across sigma,
/// so sigma comparisons are paired.
inline std::vector<TrialRecord> run_synthetic_grid(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<TrialRecord> records;
  for (Index n : cfg.ns) {
    for (double sigma : cfg.sigmas) {
      for (int r = 0; r < cfg.repeats; ++r) {
        TrialRecord rec;
        rec.index = records.size();
        rec.cell = {static_cast<double>(n), sigma, kNaN};
        rec.repeat = r;
        rec.instance_seed = detail::synthetic_seed(cfg.rng_seed, n, r);
        records.push_back(std::move(rec));
      }
    }
  }
  detail::parallel_for(records.size(), cfg.threads, [&](std::size_t i) {
    TrialRecord& rec = records[i];
    try {
      const auto inst = detail::synthetic_instance(cfg, static_cast<Index>(rec.cell.n),
                                                   rec.cell.sigma, rec.instance_seed, rec);
      rec.results = detail::run_algorithms(cfg, inst, SeedSet{}, rec.instance_seed);
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
  });
  return records;
}

/// Repeated random train/test splits of one dataset, training labels shuffled
/// uniformly, with beta correlation measured against least squares on the
/// unshuffled training part.
inline std::vector<TrialRecord> run_real(const ExperimentConfig& cfg) {
  cfg.validate();
  const Dataset data = detail::load_dataset(cfg);
  std::vector<TrialRecord> records(static_cast<std::size_t>(cfg.repeats));
  for (int r = 0; r < cfg.repeats; ++r) {
    records[r].index = static_cast<std::size_t>(r);
    records[r].repeat = r;
    records[r].instance_seed = derive_seed(cfg.rng_seed, static_cast<std::uint64_t>(r));
  }
  detail::parallel_for(records.size(), cfg.threads, [&](std::size_t i) {
    TrialRecord& rec = records[i];
    try {
      const auto inst = detail::real_instance(cfg, data, rec.instance_seed);
      rec.cell.n = static_cast<double>(inst.train.rows());
      rec.results = detail::run_algorithms(cfg, inst, SeedSet{}, rec.instance_seed);
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
  });
  return records;
}

/// For every ratio, that fraction of true pairs is given as seeds. Ratios
/// share one instance and one seed order per repeat, so seed sets are nested.
/// Uses the dataset when one is configured, synthetic instances otherwise.
inline std::vector<TrialRecord> run_seed_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const bool synthetic = cfg.dataset_path.empty();
  std::optional<Dataset> data;
  if (!synthetic) data = detail::load_dataset(cfg);

  std::vector<TrialRecord> records;
  const std::vector<Index> ns = synthetic ? cfg.ns : std::vector<Index>{0};
  const std::vector<double> sigmas = synthetic ? cfg.sigmas : std::vector<double>{kNaN};
  for (Index n : ns) {
    for (double sigma : sigmas) {
      for (double ratio : cfg.seed_ratios) {
        for (int r = 0; r < cfg.repeats; ++r) {
          TrialRecord rec;
          rec.index = records.size();
          rec.cell = {synthetic ? static_cast<double>(n) : kNaN, sigma, ratio};
          rec.repeat = r;
          rec.instance_seed = synthetic ? detail::synthetic_seed(cfg.rng_seed, n, r)
                                        : derive_seed(cfg.rng_seed, static_cast<std::uint64_t>(r));
          records.push_back(std::move(rec));
        }
      }
    }
  }
  detail::parallel_for(records.size(), cfg.threads, [&](std::size_t i) {
    TrialRecord& rec = records[i];
    try {
      const auto inst =
          synthetic ? detail::synthetic_instance(cfg, static_cast<Index>(rec.cell.n), rec.cell.sigma,
                                                 rec.instance_seed, rec)
                    : detail::real_instance(cfg, *data, rec.instance_seed);
      if (!synthetic) rec.cell.n = static_cast<double>(inst.train.rows());
      const SeedSet seeds = detail::nested_seeds(inst.truth, rec.cell.seed_ratio, rec.instance_seed);
      rec.results = detail::run_algorithms(cfg, inst, seeds, rec.instance_seed);
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
  });
  return records;
}

inline std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg) {
  switch (cfg.mode) {
    case Mode::synthetic_grid: return run_synthetic_grid(cfg);
    case Mode::real: return run_real(cfg);
    case Mode::seed_sweep: return run_seed_sweep(cfg);
  }
  throw DataError("unknown experiment mode");
}

}  // namespace shufreg::harness

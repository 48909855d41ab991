#pragma once

// Report serialization. CSV is long-format: one row per (trial, algorithm)
// followed by one aggregate row per (cell, algorithm). JSON carries the
// config echo, every trial, and the aggregates. Both are byte-stable for
// identical inputs; the worker count is deliberately left out of the echo.

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "shufreg/harness/experiment.hpp"

namespace shufreg::harness {

using Json = nlohmann::ordered_json;

enum class Format { csv, json };

inline Format parse_format(const std::string& s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw DataError("unknown report format '" + s + "'");
}

/// Column order of the aggregate metrics.
inline constexpr std::array<const char*, 5> kMetricNames{"perm_overlap", "beta_corr", "train_error",
                                                          "test_error", "time_s"};

struct MetricSummary {
  double mean = kNaN;
  double std = kNaN;  // sample standard deviation; 0 for a single value
};

struct Aggregate {
  std::string algorithm;
  Cell cell;
  int count = 0;     // trials that produced metrics
  int failures = 0;  // trials where the solver or instance threw
  std::optional<bool> recovery_feasible;
  std::array<MetricSummary, 5> metrics;
};

namespace detail {

inline bool same_value(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

inline bool same_cell(const Cell& a, const Cell& b) {
  return same_value(a.n, b.n) && same_value(a.sigma, b.sigma) &&
         same_value(a.seed_ratio, b.seed_ratio);
}

inline std::array<double, 5> metric_values(const AlgoMetrics& m) {
  return {m.overlap, m.beta_corr, m.train_error, m.test_error, m.seconds};
}

inline MetricSummary summarize(const std::vector<double>& values) {
  std::vector<double> v;
  for (double x : values) {
    if (!std::isnan(x)) v.push_back(x);
  }
  MetricSummary s;
  if (v.empty()) return s;
  double sum = 0.0;
  for (double x : v) sum += x;
  s.mean = sum / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - s.mean) * (x - s.mean);
  s.std = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  return s;
}

/// Shortest round-trip decimal; empty for NaN.
inline std::string format_number(double x) {
  if (std::isnan(x)) return {};
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline Json number_or_null(double x) { return std::isnan(x) ? Json(nullptr) : Json(x); }

inline double number_from(const Json& j) {
  return j.is_null() ? kNaN : j.get<double>();
}

inline Json cell_json(const Cell& c) {
  return Json{{"n", number_or_null(c.n)},
              {"sigma", number_or_null(c.sigma)},
              {"seed_ratio", number_or_null(c.seed_ratio)}};
}

inline Cell cell_from(const Json& j) {
  return {number_from(j.at("n")), number_from(j.at("sigma")), number_from(j.at("seed_ratio"))};
}

}  // namespace detail

/// Per (cell, algorithm) mean and spread, in first-appearance order. A cell's
/// recovery flag uses the expected signal power d_x * d_y of N(0,1)
/// coefficients.
inline std::vector<Aggregate> aggregate(const std::vector<TrialRecord>& records,
                                        const ExperimentConfig& cfg) {
  struct Group {
    Aggregate agg;
    std::array<std::vector<double>, 5> values;
  };
  std::vector<Group> groups;
  auto find_group = [&](const std::string& algo, const Cell& cell) -> Group& {
    for (auto& g : groups) {
      if (g.agg.algorithm == algo && detail::same_cell(g.agg.cell, cell)) return g;
    }
    Group g;
    g.agg.algorithm = algo;
    g.agg.cell = cell;
    if (!std::isnan(cell.n) && !std::isnan(cell.sigma)) {
      const double power = static_cast<double>(cfg.d_x * cfg.d_y);
      const double s = cell.sigma == 0.0 ? std::numeric_limits<double>::infinity()
                                         : power / (cell.sigma * cell.sigma);
      g.agg.recovery_feasible = recovery_feasible(static_cast<Index>(cell.n), s, cfg.c1);
    }
    groups.push_back(std::move(g));
    return groups.back();
  };
  for (const auto& rec : records) {
    if (!rec.error.empty()) {
      find_group("", rec.cell).agg.failures += 1;
      continue;
    }
    for (const auto& m : rec.results) {
      Group& g = find_group(m.algorithm, rec.cell);
      if (!m.error.empty()) {
        g.agg.failures += 1;
        continue;
      }
      g.agg.count += 1;
      const auto vals = detail::metric_values(m);
      for (std::size_t k = 0; k < vals.size(); ++k) g.values[k].push_back(vals[k]);
    }
  }
  std::vector<Aggregate> out;
  for (auto& g : groups) {
    for (std::size_t k = 0; k < g.values.size(); ++k) g.agg.metrics[k] = detail::summarize(g.values[k]);
    out.push_back(std::move(g.agg));
  }
  return out;
}

inline std::string format_csv(const std::vector<TrialRecord>& records, const ExperimentConfig& cfg) {
  using detail::csv_field;
  using detail::format_number;
  std::string out =
      "kind,algorithm,n,sigma,seed_ratio,repeat,count,failures,perm_overlap,beta_corr,train_error,"
      "test_error,time_s,perm_overlap_std,beta_corr_std,train_error_std,test_error_std,time_s_std,"
      "converged,stages,iterations,recovery_feasible,error\n";
  auto flag = [](const std::optional<bool>& b) -> std::string {
    return b ? (*b ? "1" : "0") : "";
  };
  auto cell_cols = [&](const Cell& c) {
    return format_number(c.n) + "," + format_number(c.sigma) + "," + format_number(c.seed_ratio);
  };
  for (const auto& rec : records) {
    if (!rec.error.empty()) {
      out += "trial,," + cell_cols(rec.cell) + "," + std::to_string(rec.repeat) +
             ",,,,,,,,,,,,,,,," + flag(rec.recovery_feasible) + "," + csv_field(rec.error) + "\n";
      continue;
    }
    for (const auto& m : rec.results) {
      out += "trial," + csv_field(m.algorithm) + "," + cell_cols(rec.cell) + "," +
             std::to_string(rec.repeat) + ",,";
      for (double v : detail::metric_values(m)) out += "," + format_number(v);
      out += ",,,,,";
      out += std::string(",") + (m.converged ? "1" : "0") + "," + std::to_string(m.stages) + "," +
             std::to_string(m.iterations) + "," + flag(rec.recovery_feasible) + "," +
             csv_field(m.error) + "\n";
    }
  }
  for (const auto& a : aggregate(records, cfg)) {
    out += "aggregate," + csv_field(a.algorithm) + "," + cell_cols(a.cell) + ",," +
           std::to_string(a.count) + "," + std::to_string(a.failures);
    for (const auto& s : a.metrics) out += "," + format_number(s.mean);
    for (const auto& s : a.metrics) out += "," + format_number(s.std);
    out += ",,,," + flag(a.recovery_feasible) + ",\n";
  }
  return out;
}

inline Json config_to_json(const ExperimentConfig& cfg) {
  Json algos = Json::array();
  if (cfg.algorithms.gncr) algos.push_back("gncr");
  if (cfg.algorithms.naive) algos.push_back("naive");
  if (cfg.algorithms.ols) algos.push_back("ols");
  const GncrConfig& g = cfg.gncr;
  return Json{
      {"mode", to_string(cfg.mode)},
      {"ns", cfg.ns},
      {"sigmas", cfg.sigmas},
      {"d_x", cfg.d_x},
      {"d_y", cfg.d_y},
      {"dataset_path", cfg.dataset_path},
      {"label_columns", cfg.label_columns},
      {"preprocess", cfg.preprocess},
      {"outlier_z", cfg.policy.outlier_z},
      {"scale_labels", cfg.policy.scale_labels},
      {"split_ratio", cfg.split_ratio},
      {"seed_ratios", cfg.seed_ratios},
      {"repeats", cfg.repeats},
      {"gncr",
       Json{{"lambda", g.lambda ? Json(*g.lambda) : Json(nullptr)},
            {"gamma", g.gamma},
            {"mu0", g.mu0 ? Json(*g.mu0) : Json(nullptr)},
            {"inner_tol", g.inner_tol},
            {"max_inner_iters", g.max_inner_iters},
            {"max_outer_iters", g.max_outer_iters},
            {"use_fast_path", g.use_fast_path}}},
      {"baseline_lambda", cfg.baseline_lambda},
      {"naive_restarts", cfg.naive_restarts},
      {"algorithms", algos},
      {"rng_seed", cfg.rng_seed},
      {"record_timing", cfg.record_timing},
      {"c1", cfg.c1},
  };
}

inline ExperimentConfig config_from_json(const Json& j) {
  ExperimentConfig cfg;
  cfg.mode = parse_mode(j.at("mode").get<std::string>());
  cfg.ns = j.at("ns").get<std::vector<Index>>();
  cfg.sigmas = j.at("sigmas").get<std::vector<double>>();
  cfg.d_x = j.at("d_x").get<Index>();
  cfg.d_y = j.at("d_y").get<Index>();
  cfg.dataset_path = j.at("dataset_path").get<std::string>();
  cfg.label_columns = j.at("label_columns").get<std::vector<std::string>>();
  cfg.preprocess = j.at("preprocess").get<bool>();
  cfg.policy.outlier_z = j.at("outlier_z").get<double>();
  cfg.policy.scale_labels = j.at("scale_labels").get<bool>();
  cfg.split_ratio = j.at("split_ratio").get<double>();
  cfg.seed_ratios = j.at("seed_ratios").get<std::vector<double>>();
  cfg.repeats = j.at("repeats").get<int>();
  const Json& g = j.at("gncr");
  if (!g.at("lambda").is_null()) cfg.gncr.lambda = g.at("lambda").get<double>();
  cfg.gncr.gamma = g.at("gamma").get<double>();
  if (!g.at("mu0").is_null()) cfg.gncr.mu0 = g.at("mu0").get<double>();
  cfg.gncr.inner_tol = g.at("inner_tol").get<double>();
  cfg.gncr.max_inner_iters = g.at("max_inner_iters").get<int>();
  cfg.gncr.max_outer_iters = g.at("max_outer_iters").get<int>();
  cfg.gncr.use_fast_path = g.at("use_fast_path").get<bool>();
  cfg.baseline_lambda = j.at("baseline_lambda").get<double>();
  cfg.naive_restarts = j.at("naive_restarts").get<int>();
  cfg.algorithms = {false, false, false};
  for (const auto& a : j.at("algorithms")) {
    const auto name = a.get<std::string>();
    if (name == "gncr") cfg.algorithms.gncr = true;
    else if (name == "naive") cfg.algorithms.naive = true;
    else if (name == "ols") cfg.algorithms.ols = true;
    else throw DataError("unknown algorithm '" + name + "'");
  }
  cfg.rng_seed = j.at("rng_seed").get<std::uint64_t>();
  cfg.record_timing = j.at("record_timing").get<bool>();
  cfg.c1 = j.at("c1").get<double>();
  return cfg;
}

inline Json trial_to_json(const TrialRecord& rec) {
  using detail::number_or_null;
  Json results = Json::array();
  for (const auto& m : rec.results) {
    results.push_back(Json{{"algorithm", m.algorithm},
                           {"perm_overlap", number_or_null(m.overlap)},
                           {"beta_corr", number_or_null(m.beta_corr)},
                           {"train_error", number_or_null(m.train_error)},
                           {"test_error", number_or_null(m.test_error)},
                           {"time_s", number_or_null(m.seconds)},
                           {"converged", m.converged},
                           {"stages", m.stages},
                           {"iterations", m.iterations},
                           {"error", m.error}});
  }
  return Json{{"index", rec.index},
              {"cell", detail::cell_json(rec.cell)},
              {"repeat", rec.repeat},
              {"instance_seed", rec.instance_seed},
              {"recovery_feasible", rec.recovery_feasible ? Json(*rec.recovery_feasible) : Json(nullptr)},
              {"results", results},
              {"error", rec.error}};
}

inline TrialRecord trial_from_json(const Json& j) {
  using detail::number_from;
  TrialRecord rec;
  rec.index = j.at("index").get<std::size_t>();
  rec.cell = detail::cell_from(j.at("cell"));
  rec.repeat = j.at("repeat").get<int>();
  rec.instance_seed = j.at("instance_seed").get<std::uint64_t>();
  if (!j.at("recovery_feasible").is_null()) rec.recovery_feasible = j.at("recovery_feasible").get<bool>();
  for (const auto& r : j.at("results")) {
    AlgoMetrics m;
    m.algorithm = r.at("algorithm").get<std::string>();
    m.overlap = number_from(r.at("perm_overlap"));
    m.beta_corr = number_from(r.at("beta_corr"));
    m.train_error = number_from(r.at("train_error"));
    m.test_error = number_from(r.at("test_error"));
    m.seconds = number_from(r.at("time_s"));
    m.converged = r.at("converged").get<bool>();
    m.stages = r.at("stages").get<int>();
    m.iterations = r.at("iterations").get<int>();
    m.error = r.at("error").get<std::string>();
    rec.results.push_back(std::move(m));
  }
  rec.error = j.at("error").get<std::string>();
  return rec;
}

inline Json aggregate_to_json(const Aggregate& a) {
  Json metrics = Json::object();
  for (std::size_t k = 0; k < kMetricNames.size(); ++k) {
    metrics[kMetricNames[k]] = Json{{"mean", detail::number_or_null(a.metrics[k].mean)},
                                    {"std", detail::number_or_null(a.metrics[k].std)}};
  }
  return Json{{"algorithm", a.algorithm},
              {"cell", detail::cell_json(a.cell)},
              {"count", a.count},
              {"failures", a.failures},
              {"recovery_feasible",
               a.recovery_feasible ? Json(*a.recovery_feasible) : Json(nullptr)},
              {"metrics", metrics}};
}

inline std::string format_json(const std::vector<TrialRecord>& records, const ExperimentConfig& cfg) {
  Json trials = Json::array();
  for (const auto& r : records) trials.push_back(trial_to_json(r));
  Json aggs = Json::array();
  for (const auto& a : aggregate(records, cfg)) aggs.push_back(aggregate_to_json(a));
  Json doc{{"config", config_to_json(cfg)}, {"trials", trials}, {"aggregates", aggs}};
  return doc.dump(2) + "\n";
}

struct ParsedReport {
  ExperimentConfig config;
  std::vector<TrialRecord> trials;
};

inline ParsedReport parse_json_report(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  }
  ParsedReport out;
  out.config = config_from_json(doc.at("config"));
  for (const auto& t : doc.at("trials")) out.trials.push_back(trial_from_json(t));
  return out;
}

inline std::string format_report(const std::vector<TrialRecord>& records,
                                 const ExperimentConfig& cfg, Format format) {
  if (records.empty()) throw DataError("report needs at least one trial record");
  return format == Format::csv ? format_csv(records, cfg) : format_json(records, cfg);
}

/// Writes the report to `path`; "-" writes to stdout.
inline void emit_report(const std::vector<TrialRecord>& records, const ExperimentConfig& cfg,
                        Format format, const std::string& path) {
  const std::string text = format_report(records, cfg, format);
  if (path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("write to '" + path + "' failed");
}

}  // namespace shufreg::harness

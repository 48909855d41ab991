#pragma once

// Real-data preparation: outlier removal, then per-column scaling. Columns
// with any negative value are z-scored; non-negative columns are min-max
// scaled to [0, 1]. The transform record maps fitted coefficients back to raw
// units.

#include <cmath>
#include <string>
#include <vector>

#include "shufreg/rng.hpp"
#include "shufreg/types.hpp"

namespace shufreg::harness {

struct PreprocessPolicy {
  double outlier_z = 4.0;  // drop rows with any |z| above this; <= 0 disables
  bool scale_labels = true;
};

enum class ColumnScaling { none, zscore, minmax, dropped };

/// scaled = (raw - offset) / scale for kept columns.
struct ColumnTransform {
  ColumnScaling kind = ColumnScaling::zscore;
  double offset = 0.0;
  double scale = 1.0;
};

struct TransformRecord {
  std::vector<ColumnTransform> features;
  std::vector<ColumnTransform> labels;
  std::vector<Index> kept_rows;  // indices into the input rows
  std::vector<std::string> warnings;
};

/// Affine model in raw units: y = x * beta + intercept.
struct RawModel {
  Matrix beta;           // raw d_x (including dropped columns, zero rows) x kept labels
  Eigen::RowVectorXd intercept;
};

namespace detail {

struct ColumnStats {
  double mean = 0.0;
  double stddev = 0.0;  // population
  double min = 0.0;
  double max = 0.0;
};

inline ColumnStats column_stats(const Eigen::Ref<const Vector>& c) {
  ColumnStats s;
  s.mean = c.mean();
  s.stddev = std::sqrt((c.array() - s.mean).square().mean());
  s.min = c.minCoeff();
  s.max = c.maxCoeff();
  return s;
}

inline ColumnTransform fit_column(const Eigen::Ref<const Vector>& c) {
  const ColumnStats s = column_stats(c);
  if (!(s.max > s.min)) return {ColumnScaling::dropped, 0.0, 1.0};
  if (s.min < 0.0) return {ColumnScaling::zscore, s.mean, s.stddev};
  return {ColumnScaling::minmax, s.min, s.max - s.min};
}

inline Matrix apply_columns(const Matrix& m, const std::vector<ColumnTransform>& tf) {
  Index kept = 0;
  for (const auto& t : tf) kept += t.kind != ColumnScaling::dropped;
  Matrix out(m.rows(), kept);
  Index k = 0;
  for (Index c = 0; c < m.cols(); ++c) {
    const auto& t = tf[c];
    if (t.kind == ColumnScaling::dropped) continue;
    out.col(k++) = (m.col(c).array() - t.offset) / t.scale;
  }
  return out;
}

/// Rows whose every column is within `z` standard deviations, iterated until
/// no further row is removed.
inline std::vector<Index> inlier_rows(const Matrix& joint, double z) {
  std::vector<Index> rows(joint.rows());
  for (Index i = 0; i < joint.rows(); ++i) rows[i] = i;
  if (z <= 0.0) return rows;
  while (rows.size() > 2) {
    Matrix sub(static_cast<Index>(rows.size()), joint.cols());
    for (std::size_t r = 0; r < rows.size(); ++r) sub.row(static_cast<Index>(r)) = joint.row(rows[r]);
    std::vector<Index> next;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      bool inlier = true;
      for (Index c = 0; c < sub.cols() && inlier; ++c) {
        const ColumnStats s = column_stats(sub.col(c));
        if (s.stddev > 0.0 && std::abs(sub(static_cast<Index>(r), c) - s.mean) > z * s.stddev) {
          inlier = false;
        }
      }
      if (inlier) next.push_back(rows[r]);
    }
    if (next.size() == rows.size()) break;
    rows = std::move(next);
  }
  return rows;
}

}  // namespace detail

inline std::pair<Dataset, TransformRecord> preprocess(const Dataset& data,
                                                      const PreprocessPolicy& policy = {}) {
  if (data.rows() < 2) throw DataError("preprocess needs at least two rows");
  TransformRecord rec;
  Matrix joint(data.rows(), data.features() + data.labels());
  joint << data.x(), data.y();
  rec.kept_rows = detail::inlier_rows(joint, policy.outlier_z);
  if (rec.kept_rows.size() < 2) throw DataError("outlier removal left fewer than two rows");
  if (rec.kept_rows.size() < static_cast<std::size_t>(data.rows())) {
    rec.warnings.push_back("removed " + std::to_string(data.rows() - rec.kept_rows.size()) +
                           " outlier rows");
  }
  const auto n = static_cast<Index>(rec.kept_rows.size());
  Matrix x(n, data.features()), y(n, data.labels());
  for (Index r = 0; r < n; ++r) {
    x.row(r) = data.x().row(rec.kept_rows[r]);
    y.row(r) = data.y().row(rec.kept_rows[r]);
  }

  for (Index c = 0; c < x.cols(); ++c) {
    rec.features.push_back(detail::fit_column(x.col(c)));
    if (rec.features.back().kind == ColumnScaling::dropped) {
      rec.warnings.push_back("feature column " + std::to_string(c) +
                             " has zero variance; dropped");
    }
  }
  for (Index c = 0; c < y.cols(); ++c) {
    ColumnTransform t = detail::fit_column(y.col(c));
    if (t.kind == ColumnScaling::dropped) {
      rec.warnings.push_back("label column " + std::to_string(c) + " has zero variance; dropped");
    } else if (!policy.scale_labels) {
      t = {ColumnScaling::none, 0.0, 1.0};
    }
    rec.labels.push_back(t);
  }
  Matrix xs = detail::apply_columns(x, rec.features);
  Matrix ys = detail::apply_columns(y, rec.labels);
  if (xs.cols() == 0) throw DataError("every feature column has zero variance");
  if (ys.cols() == 0) throw DataError("every label column has zero variance");
  return {Dataset(std::move(xs), std::move(ys)), std::move(rec)};
}

/// Maps coefficients fitted on preprocessed data back to raw units.
inline RawModel to_raw_model(const Coefficients& beta, const TransformRecord& rec) {
  std::vector<Index> kept_labels;
  for (std::size_t c = 0; c < rec.labels.size(); ++c) {
    if (rec.labels[c].kind != ColumnScaling::dropped) kept_labels.push_back(static_cast<Index>(c));
  }
  RawModel model;
  model.beta = Matrix::Zero(static_cast<Index>(rec.features.size()), beta.cols());
  model.intercept = Eigen::RowVectorXd::Zero(beta.cols());
  for (Index l = 0; l < beta.cols(); ++l) {
    const ColumnTransform& ty = rec.labels[kept_labels[l]];
    double intercept = ty.offset;
    Index k = 0;
    for (std::size_t c = 0; c < rec.features.size(); ++c) {
      const ColumnTransform& tx = rec.features[c];
      if (tx.kind == ColumnScaling::dropped) continue;
      const double b = ty.scale * beta(k++, l) / tx.scale;
      model.beta(static_cast<Index>(c), l) = b;
      intercept -= tx.offset * b;
    }
    model.intercept(l) = intercept;
  }
  return model;
}

inline Matrix predict_raw(const RawModel& model, const Matrix& raw_x) {
  return (raw_x * model.beta).rowwise() + model.intercept;
}

/// Uniform random split into a `fraction` training part and the rest. Rows
/// keep their original relative order within each part.
inline std::pair<Dataset, Dataset> split(const Dataset& data, double fraction,
                                         std::uint64_t rng_seed) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw DataError("split fraction must be in (0, 1)");
  const Index n = data.rows();
  const auto n_train = static_cast<Index>(std::lround(fraction * static_cast<double>(n)));
  if (n_train < 1 || n_train >= n) {
    throw DataError("split of " + std::to_string(n) + " rows at " + std::to_string(fraction) +
                    " leaves an empty part");
  }
  Rng rng(rng_seed, "split");
  const std::vector<Index> train_rows = rng.sample(n, n_train);
  std::vector<char> in_train(n, 0);
  for (Index i : train_rows) in_train[i] = 1;
  Matrix xtr(n_train, data.features()), ytr(n_train, data.labels());
  Matrix xte(n - n_train, data.features()), yte(n - n_train, data.labels());
  Index a = 0, b = 0;
  for (Index i = 0; i < n; ++i) {
    if (in_train[i]) {
      xtr.row(a) = data.x().row(i);
      ytr.row(a++) = data.y().row(i);
    } else {
      xte.row(b) = data.x().row(i);
      yte.row(b++) = data.y().row(i);
    }
  }
  return {Dataset(std::move(xtr), std::move(ytr)), Dataset(std::move(xte), std::move(yte))};
}

struct ShuffledData {
  Dataset data;
  Permutation truth;  // truth.apply(data.y()) restores the original label order
};

/// Shuffles label rows by a uniformly random permutation.
inline ShuffledData shuffle_labels(const Dataset& data, std::uint64_t rng_seed) {
  Rng rng(rng_seed, "shuffle");
  Permutation p = rng.permutation(data.rows());
  Matrix y(data.rows(), data.labels());
  for (Index i = 0; i < data.rows(); ++i) y.row(p[i]) = data.y().row(i);
  return {Dataset(data.x(), std::move(y)), std::move(p)};
}

}  // namespace shufreg::harness

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "shufreg/error.hpp"

namespace shufreg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Regression coefficients, d_x rows by d_y columns.
using Coefficients = Matrix;

namespace detail {

inline void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw DataError(std::string(what) + " contains NaN or Inf entries");
  }
}

}  // namespace detail

/// Paired feature matrix X (n x d_x) and label matrix Y (n x d_y).
class Dataset {
 public:
  Dataset(Matrix x, Matrix y) : x_(std::move(x)), y_(std::move(y)) {
    if (x_.rows() < 1 || x_.cols() < 1 || y_.cols() < 1) {
      throw DimensionError("dataset needs n >= 1, d_x >= 1 and d_y >= 1");
    }
    if (x_.rows() != y_.rows()) {
      throw DimensionError("X has " + std::to_string(x_.rows()) +
                           " rows but Y has " + std::to_string(y_.rows()));
    }
    detail::require_finite(x_, "X");
    detail::require_finite(y_, "Y");
  }

  const Matrix& x() const { return x_; }
  const Matrix& y() const { return y_; }
  Index rows() const { return x_.rows(); }
  Index features() const { return x_.cols(); }
  Index labels() const { return y_.cols(); }

 private:
  Matrix x_;
  Matrix y_;
};

/// A bijection on {0..n-1}. mapping[i] = j means the permutation matrix has
/// a one at (i, j): X-row i is paired with Y-row j, so row i of (Pi Y) is
/// Y-row j.
class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::vector<Index> mapping) : mapping_(std::move(mapping)) {
    std::vector<char> seen(mapping_.size(), 0);
    for (Index j : mapping_) {
      if (j < 0 || static_cast<std::size_t>(j) >= mapping_.size() || seen[j]) {
        throw DataError("mapping is not a bijection on {0..n-1}");
      }
      seen[j] = 1;
    }
  }

  static Permutation identity(Index n) {
    std::vector<Index> m(static_cast<std::size_t>(n));
    std::iota(m.begin(), m.end(), Index{0});
    return Permutation(std::move(m));
  }

  Index size() const { return static_cast<Index>(mapping_.size()); }
  Index operator[](Index i) const { return mapping_[static_cast<std::size_t>(i)]; }
  const std::vector<Index>& mapping() const { return mapping_; }

  Permutation inverse() const {
    std::vector<Index> inv(mapping_.size());
    for (std::size_t i = 0; i < mapping_.size(); ++i) inv[mapping_[i]] = static_cast<Index>(i);
    return Permutation(std::move(inv));
  }

  /// Pi * Y: row i of the result is row mapping[i] of y.
  Matrix apply(const Matrix& y) const {
    if (y.rows() != size()) {
      throw DimensionError("permutation of size " + std::to_string(size()) +
                           " applied to " + std::to_string(y.rows()) + " rows");
    }
    Matrix out(y.rows(), y.cols());
    for (Index i = 0; i < size(); ++i) out.row(i) = y.row((*this)[i]);
    return out;
  }

  Matrix to_matrix() const {
    Matrix p = Matrix::Zero(size(), size());
    for (Index i = 0; i < size(); ++i) p(i, (*this)[i]) = 1.0;
    return p;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<Index> mapping_;
};

/// Known (X-row, Y-row) pairs. x_rows()[k] is paired with y_rows()[k].
class SeedSet {
 public:
  SeedSet() = default;

  explicit SeedSet(const std::vector<std::pair<Index, Index>>& pairs) {
    x_rows_.reserve(pairs.size());
    y_rows_.reserve(pairs.size());
    for (const auto& [i, j] : pairs) {
      x_rows_.push_back(i);
      y_rows_.push_back(j);
    }
    auto no_repeats = [](std::vector<Index> v) {
      std::sort(v.begin(), v.end());
      return std::adjacent_find(v.begin(), v.end()) == v.end();
    };
    if (!no_repeats(x_rows_) || !no_repeats(y_rows_)) {
      throw DataError("seed pairs must not repeat an X-row or a Y-row");
    }
    for (std::size_t k = 0; k < x_rows_.size(); ++k) {
      if (x_rows_[k] < 0 || y_rows_[k] < 0) throw DataError("negative seed index");
    }
  }

  /// Seeds consistent with `truth` on the given X-rows.
  static SeedSet from_truth(const Permutation& truth, const std::vector<Index>& x_rows) {
    std::vector<std::pair<Index, Index>> pairs;
    pairs.reserve(x_rows.size());
    for (Index i : x_rows) pairs.emplace_back(i, truth[i]);
    return SeedSet(pairs);
  }

  std::size_t size() const { return x_rows_.size(); }
  bool empty() const { return x_rows_.empty(); }
  const std::vector<Index>& x_rows() const { return x_rows_; }
  const std::vector<Index>& y_rows() const { return y_rows_; }

  void validate(Index n) const {
    if (static_cast<Index>(size()) > n) throw DataError("more seeds than rows");
    for (std::size_t k = 0; k < size(); ++k) {
      if (x_rows_[k] >= n || y_rows_[k] >= n) {
        throw DataError("seed pair (" + std::to_string(x_rows_[k]) + ", " +
                        std::to_string(y_rows_[k]) + ") out of range for n = " +
                        std::to_string(n));
      }
    }
  }

  /// Whether `perm` agrees with every seed pair.
  bool consistent_with(const Permutation& perm) const {
    for (std::size_t k = 0; k < size(); ++k) {
      if (x_rows_[k] >= perm.size() || perm[x_rows_[k]] != y_rows_[k]) return false;
    }
    return true;
  }

 private:
  std::vector<Index> x_rows_;
  std::vector<Index> y_rows_;
};

}  // namespace shufreg

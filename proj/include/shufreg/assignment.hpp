#pragma once

// Linear assignment: min over permutations p of sum_i cost(i, p(i)).
//
// Both solvers break ties the same way: among optimal assignments the
// lexicographically smallest mapping is returned.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "shufreg/types.hpp"

namespace shufreg {

struct AssignmentResult {
  Permutation perm;
  double cost = 0.0;
};

namespace detail {

/// Among perfect matchings of the bipartite graph `adj` (rows to ascending
/// column lists), find the lexicographically smallest, starting from the
/// perfect matching `row_to_col`.
inline void lexicographic_refine(const std::vector<std::vector<Index>>& adj,
                                 std::vector<Index>& row_to_col) {
  const auto m = static_cast<Index>(row_to_col.size());
  std::vector<Index> col_to_row(m);
  for (Index i = 0; i < m; ++i) col_to_row[row_to_col[i]] = i;
  std::vector<char> fixed_col(m, 0);
  std::vector<Index> parent_col(m);
  std::vector<Index> stamp(m, -1);
  Index epoch = 0;

  for (Index i = 0; i < m; ++i) {
    for (Index j : adj[i]) {
      if (fixed_col[j]) continue;
      if (row_to_col[i] == j) break;
      // Re-route: row r = col_to_row[j] must reach the column row i frees,
      // through an alternating path over unfixed rows other than i.
      const Index target = row_to_col[i];
      const Index start = col_to_row[j];
      ++epoch;
      std::vector<Index> queue{start};
      stamp[j] = epoch;
      Index found_col = -1;
      for (std::size_t head = 0; head < queue.size() && found_col < 0; ++head) {
        const Index r = queue[head];
        for (Index c : adj[r]) {
          if (fixed_col[c] || stamp[c] == epoch) continue;
          stamp[c] = epoch;
          parent_col[c] = r;
          if (c == target) {
            found_col = c;
            break;
          }
          queue.push_back(col_to_row[c]);
        }
      }
      if (found_col < 0) continue;
      // Shift every row on the path to its discovered column.
      Index c = found_col;
      while (true) {
        const Index r = parent_col[c];
        const Index prev = row_to_col[r];
        row_to_col[r] = c;
        col_to_row[c] = r;
        if (r == start) break;
        c = prev;
      }
      row_to_col[i] = j;
      col_to_row[j] = i;
      break;
    }
    fixed_col[row_to_col[i]] = 1;
  }
}

}  // namespace detail

/// Exact O(m^3) Hungarian solver (shortest augmenting paths with potentials).
inline AssignmentResult hungarian(const Matrix& cost) {
  if (cost.rows() != cost.cols()) {
    throw DimensionError("hungarian: cost matrix must be square, got " +
                         std::to_string(cost.rows()) + "x" + std::to_string(cost.cols()));
  }
  if (!cost.allFinite()) throw DataError("hungarian: cost matrix has non-finite entries");
  const Index m = cost.rows();
  if (m == 0) return {Permutation(std::vector<Index>{}), 0.0};

  constexpr double inf = std::numeric_limits<double>::infinity();
  // 1-based potentials; p[j] = row matched to column j, way[] = augmenting tree.
  std::vector<double> u(m + 1, 0.0), v(m + 1, 0.0), minv(m + 1);
  std::vector<Index> p(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1);
  for (Index i = 1; i <= m; ++i) {
    p[0] = i;
    Index j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const Index i0 = p[j0];
      double delta = inf;
      Index j1 = 0;
      for (Index j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (Index j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const Index j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<Index> row_to_col(m);
  for (Index j = 1; j <= m; ++j) row_to_col[p[j] - 1] = j - 1;

  // Edges with (numerically) zero reduced cost carry every optimal matching.
  const double tol = 1e-11 * std::max(cost.cwiseAbs().maxCoeff(), 0.0);
  std::vector<std::vector<Index>> tight(m);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < m; ++j) {
      if (j == row_to_col[i] || cost(i, j) - u[i + 1] - v[j + 1] <= tol) tight[i].push_back(j);
    }
  }
  detail::lexicographic_refine(tight, row_to_col);

  double total = 0.0;
  for (Index i = 0; i < m; ++i) total += cost(i, row_to_col[i]);
  return {Permutation(std::move(row_to_col)), total};
}

/// Order of `b` by descending value, ties by ascending index.
inline std::vector<Index> descending_order(std::span<const double> b) {
  std::vector<Index> order(b.size());
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index l, Index r) { return b[l] > b[r]; });
  return order;
}

/// Rank-one assignment min_p sum_i a[i] * b[p(i)] given b's descending order
/// (see descending_order). Pairs a ascending with b descending.
inline AssignmentResult sort_assignment_presorted(std::span<const double> a,
                                                  std::span<const double> b,
                                                  std::span<const Index> b_desc) {
  const auto m = static_cast<Index>(a.size());
  if (static_cast<Index>(b.size()) != m || static_cast<Index>(b_desc.size()) != m) {
    throw DimensionError("sort_assignment: length mismatch");
  }
  for (Index i = 0; i < m; ++i) {
    if (!std::isfinite(a[i]) || !std::isfinite(b[i])) {
      throw DataError("sort_assignment: non-finite input");
    }
  }
  std::vector<Index> a_asc(m);
  std::iota(a_asc.begin(), a_asc.end(), Index{0});
  std::stable_sort(a_asc.begin(), a_asc.end(), [&](Index l, Index r) { return a[l] < a[r]; });

  // Sorted position k pairs a_asc[k] with b_desc[k]. Runs of equal a-values
  // (a-groups) and equal b-values (b-groups) may be reshuffled freely; pick the
  // lexicographically smallest mapping greedily by X index.
  std::vector<Index> b_group_of_pos(m), a_group_of_row(m);
  std::vector<Index> b_group_first;  // first sorted position of each b-group
  for (Index k = 0; k < m; ++k) {
    if (k == 0 || b[b_desc[k]] != b[b_desc[k - 1]]) b_group_first.push_back(k);
    b_group_of_pos[k] = static_cast<Index>(b_group_first.size()) - 1;
  }
  std::vector<Index> a_lo, a_hi;  // range of b-groups each a-group demands
  std::vector<std::vector<Index>> demand;  // per a-group: count per b-group in range
  for (Index k = 0; k < m; ++k) {
    if (k == 0 || a[a_asc[k]] != a[a_asc[k - 1]]) {
      a_lo.push_back(b_group_of_pos[k]);
      a_hi.push_back(b_group_of_pos[k]);
      demand.emplace_back();
    }
    const auto g = static_cast<Index>(a_lo.size()) - 1;
    a_group_of_row[a_asc[k]] = g;
    a_hi[g] = b_group_of_pos[k];
    const Index slot = b_group_of_pos[k] - a_lo[g];
    if (static_cast<Index>(demand[g].size()) <= slot) demand[g].resize(slot + 1, 0);
    ++demand[g][slot];
  }
  // Unused Y indices of each b-group, ascending.
  const auto n_bgroups = static_cast<Index>(b_group_first.size());
  std::vector<std::vector<Index>> pool(n_bgroups);
  std::vector<std::size_t> pool_head(n_bgroups, 0);
  for (Index k = 0; k < m; ++k) pool[b_group_of_pos[k]].push_back(b_desc[k]);
  for (auto& v : pool) std::sort(v.begin(), v.end());

  std::vector<Index> mapping(m);
  double total = 0.0;
  for (Index i = 0; i < m; ++i) {
    const Index g = a_group_of_row[i];
    Index best_slot = -1;
    Index best_idx = m;
    for (Index s = 0; s <= a_hi[g] - a_lo[g]; ++s) {
      if (demand[g][s] == 0) continue;
      const Index bg = a_lo[g] + s;
      const Index idx = pool[bg][pool_head[bg]];
      if (idx < best_idx) {
        best_idx = idx;
        best_slot = s;
      }
    }
    const Index bg = a_lo[g] + best_slot;
    --demand[g][best_slot];
    ++pool_head[bg];
    mapping[i] = best_idx;
    total += a[i] * b[best_idx];
  }
  return {Permutation(std::move(mapping)), total};
}

/// Rank-one assignment min_p sum_i a[i] * b[p(i)] in O(m log m) for distinct
/// values (rearrangement inequality).
inline AssignmentResult sort_assignment(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("sort_assignment: length mismatch");
  const auto order = descending_order(b);
  return sort_assignment_presorted(a, b, order);
}

inline AssignmentResult sort_assignment(const Vector& a, const Vector& b) {
  return sort_assignment(std::span<const double>(a.data(), a.size()),
                         std::span<const double>(b.data(), b.size()));
}

}  // namespace shufreg

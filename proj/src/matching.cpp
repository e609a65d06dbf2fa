// Copyright 2026 The d2dassign Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "d2d/matching.hpp"

#include <algorithm>
#include <cmath>

#include "d2d/errors.hpp"

namespace d2d {
namespace {

// Lexicographic cost: tier counts forbidden edges and unmatched required
// rows, weight is the negated matching weight. Exact in the tier.
struct Cost {
  long tier = 0;
  double weight = 0.0;

  Cost operator+(const Cost& o) const { return {tier + o.tier, weight + o.weight}; }
  Cost operator-(const Cost& o) const { return {tier - o.tier, weight - o.weight}; }
  Cost& operator+=(const Cost& o) { return *this = *this + o; }
  Cost& operator-=(const Cost& o) { return *this = *this - o; }
  bool operator<(const Cost& o) const { return tier != o.tier ? tier < o.tier : weight < o.weight; }
};

const Cost kHuge{std::numeric_limits<long>::max() / 4, 0.0};

// Minimum-cost perfect assignment on a square matrix (potentials method).
// Returns col_of_row.
std::vector<int> hungarian(const std::vector<std::vector<Cost>>& a) {
  const int n = static_cast<int>(a.size());
  std::vector<Cost> u(n + 1), v(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<Cost> minv(n + 1, kHuge);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      Cost delta = kHuge;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        Cost cur = a[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
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
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> col_of_row(n, -1);
  for (int j = 1; j <= n; ++j) col_of_row[p[j] - 1] = j - 1;
  return col_of_row;
}

constexpr int kUnmatched = -1;

struct Problem {
  const WeightMatrix& w;
  const std::vector<bool>& required;

  Cost edge(int r, int c) const {
    if (c == kUnmatched) return {required[r] ? 1 : 0, 0.0};
    double x = w(r, c);
    return is_forbidden(x) ? Cost{1, 0.0} : Cost{0, -x};
  }

  // Optimal completion given the choices for rows [0, fixed.size()).
  // Returns the cost and the column (or kUnmatched) of every row.
  std::pair<Cost, std::vector<int>> solve(const std::vector<int>& fixed) const {
    const int rows = static_cast<int>(w.rows()), cols = static_cast<int>(w.cols());
    std::vector<char> taken(cols, 0);
    Cost base;
    for (size_t r = 0; r < fixed.size(); ++r) {
      base += edge(static_cast<int>(r), fixed[r]);
      if (fixed[r] != kUnmatched) taken[fixed[r]] = 1;
    }
    std::vector<int> free_rows, free_cols;
    for (int r = static_cast<int>(fixed.size()); r < rows; ++r) free_rows.push_back(r);
    for (int c = 0; c < cols; ++c)
      if (!taken[c]) free_cols.push_back(c);
    const int fr = static_cast<int>(free_rows.size()), fc = static_cast<int>(free_cols.size());
    // Square of size fr + fc: real rows then one dummy row per real column;
    // real columns then one "unmatched" column per real row.
    const int n = fr + fc;
    std::vector<std::vector<Cost>> a(n, std::vector<Cost>(n));
    for (int i = 0; i < fr; ++i) {
      for (int j = 0; j < fc; ++j) a[i][j] = edge(free_rows[i], free_cols[j]);
      for (int j = fc; j < n; ++j) a[i][j] = edge(free_rows[i], kUnmatched);
    }
    std::vector<int> assign(fixed);
    assign.resize(rows, kUnmatched);
    if (n == 0) return {base, assign};
    auto col_of_row = hungarian(a);
    Cost total = base;
    for (int i = 0; i < fr; ++i) {
      int j = col_of_row[i];
      assign[free_rows[i]] = j < fc ? free_cols[j] : kUnmatched;
      total += edge(free_rows[i], assign[free_rows[i]]);
    }
    return {total, assign};
  }
};

}  // namespace

MatchResult max_weight_matching(const WeightMatrix& w, const std::vector<bool>& required_rows) {
  const int rows = static_cast<int>(w.rows()), cols = static_cast<int>(w.cols());
  if (rows < 1) throw ArgumentError("weight matrix needs at least one row");
  if (static_cast<int>(required_rows.size()) != rows) throw ArgumentError("required-row mask has the wrong size");
  int required = 0;
  for (bool b : required_rows) required += b;
  if (required > cols) throw ArgumentError("more required rows than columns");
  double scale = 1.0;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      double x = w(r, c);
      if (std::isnan(x) || x == std::numeric_limits<double>::infinity())
        throw ArgumentError("weights must be finite or kForbidden");
      if (!is_forbidden(x)) scale += std::abs(x);
    }
  }

  Problem prob{w, required_rows};
  auto [best, assign] = prob.solve({});
  // Canonical tie-break: give each row, in order, the lowest column that
  // still admits an optimal completion.
  const double tol = 1e-12 * scale;
  std::vector<int> fixed;
  for (int r = 0; r < rows; ++r) {
    std::vector<int> options;
    for (int c = 0; c < cols; ++c) options.push_back(c);
    options.push_back(kUnmatched);
    for (int c : options) {
      if (c != kUnmatched && std::find(fixed.begin(), fixed.end(), c) != fixed.end()) continue;
      if (c != kUnmatched && is_forbidden(w(r, c)) && c != assign[r]) continue;
      fixed.push_back(c);
      auto [cost, completion] = prob.solve(fixed);
      if (cost.tier == best.tier && cost.weight <= best.weight + tol) {
        assign = completion;
        break;
      }
      fixed.pop_back();
    }
    if (static_cast<int>(fixed.size()) == r) fixed.push_back(assign[r]);
  }

  MatchResult out;
  for (int r = 0; r < rows; ++r) {
    int c = assign[r];
    if (c == kUnmatched || is_forbidden(w(r, c))) {
      if (required_rows[r]) out.complete = false;
      continue;
    }
    out.pairs.push_back({r, c});
    out.total_weight += w(r, c);
  }
  return out;
}

MatchResult max_weight_matching(const WeightMatrix& w, bool require_all_rows) {
  return max_weight_matching(w, std::vector<bool>(static_cast<size_t>(w.rows()), require_all_rows));
}

}  // namespace d2d

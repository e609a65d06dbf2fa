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

#pragma once

#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace d2d {

// Maximum-weight bipartite matching (Kuhn-Munkres) with forbidden edges.

/// Marks an edge that may not be used. Compared exactly, never by magnitude.
inline constexpr double kForbidden = -std::numeric_limits<double>::infinity();

using WeightMatrix = Eigen::MatrixXd;

inline bool is_forbidden(double w) { return w == kForbidden; }

struct MatchResult {
  std::vector<std::pair<int, int>> pairs;  // (row, col), ascending rows
  double total_weight = 0.0;
  bool complete = true;  // every required row matched
};

/// Maximizes the total weight over matchings that use no forbidden edge.
/// Required rows must be matched; optional rows are matched only when that
/// helps. When the required rows cannot all be matched, complete is false and
/// the pairs hold the best matching of the rows that can be. Among optimal
/// matchings the one giving row 0 the lowest column is chosen, then row 1,
/// and so on (leaving a row unmatched ranks after every column).
MatchResult max_weight_matching(const WeightMatrix& w, const std::vector<bool>& required_rows);

/// Throws ArgumentError when require_all_rows and rows > cols.
MatchResult max_weight_matching(const WeightMatrix& w, bool require_all_rows);

}  // namespace d2d

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

#include <string>
#include <vector>

#include "d2d/model.hpp"
#include "d2d/utility.hpp"

namespace d2d {

inline constexpr int kInactive = -1;

/// Channel of every link (kInactive for an idle D2D link) and the total
/// utility it achieves.
struct Assignment {
  std::vector<int> channel_of;
  double value = 0.0;
};

/// Links on each channel, ascending.
std::vector<std::vector<int>> members_by_channel(const Scenario& scenario, const Assignment& a);

double assignment_value(const Scenario& scenario, CsiScenario csi, UtilityKind kind, const Assignment& a,
                        const SeriesControl& ctrl = {});

/// Human-readable list of violated constraints; empty when the assignment
/// is valid and its stored value matches a recomputation to value_tol
/// (relative, with an absolute floor of value_tol).
std::vector<std::string> assignment_violations(const Scenario& scenario, CsiScenario csi, UtilityKind kind,
                                               const Assignment& a, double value_tol = 1e-9,
                                               const SeriesControl& ctrl = {});

int count_active_d2d(const Scenario& scenario, const Assignment& a, Band band);

}  // namespace d2d

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

#include <cstdint>
#include <vector>

#include "d2d/assignment.hpp"
#include "d2d/model.hpp"
#include "d2d/utility.hpp"

namespace d2d {

// Optimal channel assignment by dynamic programming over link subsets, and
// an exhaustive-search oracle for tiny instances.
//
// Stage k (1..M) decides which links share channel k - 1 (channels in index
// order, uplink band first); a state is the set of links still to be served
// by channels 0..k-1. Link sets are bitmasks, bit j = link j.

using LinkMask = std::uint64_t;

struct SolverOptions {
  int dp_max_links = 20;
  double exhaustive_max_candidates = 1e7;
  SeriesControl series;
};

/// Every L within `state` that may occupy the stage's channel: QoS-feasible
/// together, at most one cellular link, none of the wrong band, and leaving a
/// state the earlier channels can still serve. Lexicographic order of the
/// sorted member lists, starting with the empty set. Empty when the state
/// itself cannot be served by channels 0..stage-1.
std::vector<LinkMask> feasible_link_sets(const Scenario& scenario, CsiScenario csi, int stage, LinkMask state,
                                         UtilityKind kind, const SolverOptions& opts = {});

/// Throws InfeasibleError when no assignment serves every cellular link,
/// CapacityError when the scenario has more than opts.dp_max_links links.
Assignment solve_dp(const Scenario& scenario, CsiScenario csi, UtilityKind kind, const SolverOptions& opts = {});

/// Enumerates every assignment. Throws CapacityError beyond
/// opts.exhaustive_max_candidates candidates, InfeasibleError as solve_dp.
Assignment solve_exhaustive(const Scenario& scenario, CsiScenario csi, UtilityKind kind,
                            const SolverOptions& opts = {});

}  // namespace d2d

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

#include <span>
#include <vector>

#include "d2d/assignment.hpp"
#include "d2d/dp_solver.hpp"
#include "d2d/model.hpp"
#include "d2d/utility.hpp"

namespace d2d {

// Two-step heuristic: greedy clustering of links (cluster g provisionally on
// channel g), then a cluster-to-channel matching. Also the semi-orthogonal
// baseline with at most one D2D link per channel.

struct Clustering {
  std::vector<std::vector<int>> clusters;  // ascending link ids
  std::vector<std::vector<int>> queues;    // insertion order, cellular first
};

/// Places each cellular link in a distinct band-matching cluster by a
/// maximum-weight matching on solo rates. Throws InfeasibleError when some
/// cellular link cannot be placed with its QoS floor met.
Clustering cluster_cellular(const Scenario& scenario, CsiScenario csi, UtilityKind kind,
                            const SolverOptions& opts = {});

/// Priority of adding D2D link j to cluster g for the sum-rate objectives:
/// the utility gain when the enlarged cluster meets QoS, also the gain when no
/// remaining link fits any cluster, -inf otherwise.
double priority_wsr(const Scenario& scenario, CsiScenario csi, UtilityKind kind, int g, int j,
                    const Clustering& clustering, std::span<const int> remaining, const SeriesControl& ctrl = {});

/// Priority of adding D2D link j to cluster g for the access rate (full CSI):
/// the smallest log(1 + SINR) / log(1 + sinr_min) over the enlarged cluster,
/// discounted by 2^-f with f the number of clusters that could take j (M when
/// none can).
double priority_access(const Scenario& scenario, int g, int j, const Clustering& clustering,
                       const SeriesControl& ctrl = {});

/// Cellular placement followed by greedy insertion of every D2D link. Only
/// the chosen cluster's priorities are refreshed after an insertion; ties go
/// to the lowest link id, then the lowest cluster.
Clustering greedy_cluster(const Scenario& scenario, CsiScenario csi, UtilityKind kind,
                          const SolverOptions& opts = {});

struct ClusterChannelWeight {
  double weight = 0.0;        // -inf when the cluster cannot use the channel
  std::vector<int> selected;  // links that would share the channel
};

/// Seeds with the cluster's cellular link, admits D2D links in queue order
/// while QoS holds, and keeps the best prefix (smallest on ties).
ClusterChannelWeight cluster_channel_weight(const Scenario& scenario, CsiScenario csi, int channel,
                                            const Clustering& clustering, int g, UtilityKind kind,
                                            const SeriesControl& ctrl = {});

Assignment solve_cluster(const Scenario& scenario, CsiScenario csi, UtilityKind kind, const SolverOptions& opts = {});

Assignment solve_semi_orthogonal(const Scenario& scenario, CsiScenario csi, UtilityKind kind,
                                 const SolverOptions& opts = {});

}  // namespace d2d

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
#include <string>
#include <vector>

#include "d2d/model.hpp"
#include "d2d/stats.hpp"

namespace d2d {

enum class UtilityKind { ExpectedWeightedSumRate, WeightedSumRateFullCsi, AccessRate };

std::string to_string(UtilityKind kind);
UtilityKind parse_utility(const std::string& text);

/// AccessRate and the weighted sum-rate simplification are defined for full
/// CSI only.
bool supports(UtilityKind kind, CsiScenario csi);

struct LinkEvaluation {
  int link = 0;
  double success_prob = 0.0;
  double expected_rate = 0.0;
};

struct ChannelEvaluation {
  double utility = 0.0;
  std::vector<LinkEvaluation> per_link;
  bool feasible = true;
};

/// SINR view of `link` on `channel` when the links in `members` share it:
/// known interference goes into nu, hidden interference into the list.
InterferenceContext link_context(const Scenario& scenario, CsiScenario csi, int channel, int link,
                                 std::span<const int> members);

/// Throws ArgumentError when a cellular member is on the wrong band or two
/// cellular links share the channel.
void check_members(const Scenario& scenario, int channel, std::span<const int> members);

ChannelEvaluation evaluate_channel(const Scenario& scenario, CsiScenario csi, int channel,
                                   std::span<const int> members, UtilityKind kind,
                                   const SeriesControl& ctrl = {});

bool qos_feasible(const Scenario& scenario, CsiScenario csi, int channel, std::span<const int> members,
                  const SeriesControl& ctrl = {});

}  // namespace d2d

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

#include "d2d/assignment.hpp"

#include <cmath>

namespace d2d {

std::vector<std::vector<int>> members_by_channel(const Scenario& scenario, const Assignment& a) {
  std::vector<std::vector<int>> out(scenario.n_channels());
  for (int j = 0; j < static_cast<int>(a.channel_of.size()); ++j)
    if (a.channel_of[j] >= 0 && a.channel_of[j] < scenario.n_channels()) out[a.channel_of[j]].push_back(j);
  return out;
}

double assignment_value(const Scenario& scenario, CsiScenario csi, UtilityKind kind, const Assignment& a,
                        const SeriesControl& ctrl) {
  double total = 0.0;
  auto groups = members_by_channel(scenario, a);
  for (int i = 0; i < scenario.n_channels(); ++i)
    if (!groups[i].empty()) total += evaluate_channel(scenario, csi, i, groups[i], kind, ctrl).utility;
  return total;
}

std::vector<std::string> assignment_violations(const Scenario& scenario, CsiScenario csi, UtilityKind kind,
                                               const Assignment& a, double value_tol, const SeriesControl& ctrl) {
  std::vector<std::string> bad;
  if (static_cast<int>(a.channel_of.size()) != scenario.n_links()) {
    bad.push_back("assignment covers " + std::to_string(a.channel_of.size()) + " links, scenario has " +
                  std::to_string(scenario.n_links()));
    return bad;
  }
  for (int j = 0; j < scenario.n_links(); ++j) {
    const int ch = a.channel_of[j];
    const std::string who = "link " + std::to_string(j);
    if (ch == kInactive) {
      if (scenario.cellular(j)) bad.push_back(who + ": cellular link without a channel");
      continue;
    }
    if (ch < 0 || ch >= scenario.n_channels()) {
      bad.push_back(who + ": channel " + std::to_string(ch) + " out of range");
      continue;
    }
    if (!Scenario::band_allows(scenario.links[j].kind, scenario.channels[ch].band))
      bad.push_back(who + ": cellular link on the wrong band");
  }
  if (!bad.empty()) return bad;

  auto groups = members_by_channel(scenario, a);
  double total = 0.0;
  for (int i = 0; i < scenario.n_channels(); ++i) {
    int cellular = 0;
    for (int j : groups[i]) cellular += scenario.cellular(j);
    if (cellular > 1) {
      bad.push_back("channel " + std::to_string(i) + ": two cellular links");
      continue;
    }
    if (groups[i].empty()) continue;
    ChannelEvaluation ev = evaluate_channel(scenario, csi, i, groups[i], kind, ctrl);
    for (const auto& le : ev.per_link)
      if (le.success_prob < scenario.links[le.link].succ_prob_min)
        bad.push_back("link " + std::to_string(le.link) + ": success probability " + std::to_string(le.success_prob) +
                      " below its floor");
    total += ev.utility;
  }
  if (bad.empty() && std::abs(total - a.value) > value_tol * std::max(1.0, std::abs(total)))
    bad.push_back("stored value " + std::to_string(a.value) + " differs from recomputed " + std::to_string(total));
  return bad;
}

int count_active_d2d(const Scenario& scenario, const Assignment& a, Band band) {
  int n = 0;
  for (int j = 0; j < scenario.n_links(); ++j)
    if (!scenario.cellular(j) && a.channel_of[j] >= 0 && scenario.channels[a.channel_of[j]].band == band) ++n;
  return n;
}

}  // namespace d2d

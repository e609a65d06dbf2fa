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

#include "d2d/utility.hpp"

#include <algorithm>

#include "d2d/errors.hpp"

namespace d2d {

std::string to_string(UtilityKind kind) {
  switch (kind) {
    case UtilityKind::ExpectedWeightedSumRate: return "ewsr";
    case UtilityKind::WeightedSumRateFullCsi: return "wsr";
    case UtilityKind::AccessRate: return "access";
  }
  return "?";
}

UtilityKind parse_utility(const std::string& text) {
  for (UtilityKind k :
       {UtilityKind::ExpectedWeightedSumRate, UtilityKind::WeightedSumRateFullCsi, UtilityKind::AccessRate})
    if (to_string(k) == text) return k;
  throw ConfigError("unknown objective '" + text + "'");
}

bool supports(UtilityKind kind, CsiScenario csi) {
  return kind == UtilityKind::ExpectedWeightedSumRate || csi == CsiScenario::Full;
}

void check_members(const Scenario& scenario, int channel, std::span<const int> members) {
  const Band band = scenario.channels.at(channel).band;
  int cellular = 0;
  for (int j : members) {
    if (j < 0 || j >= scenario.n_links()) throw ArgumentError("link index out of range");
    const LinkKind kind = scenario.links[j].kind;
    if (!Scenario::band_allows(kind, band)) throw ArgumentError("cellular link on the wrong band");
    cellular += is_cellular(kind);
  }
  if (cellular > 1) throw ArgumentError("two cellular links on one channel");
}

InterferenceContext link_context(const Scenario& scenario, CsiScenario csi, int channel, int link,
                                 std::span<const int> members) {
  const auto& beta = scenario.small_scale.at(channel);
  const auto& lam = scenario.large_scale;
  const CsiVisibility vis = expand(csi);
  const LinkKind rx_kind = scenario.links[link].kind;

  InterferenceContext ctx;
  ctx.nu = scenario.noise_power;
  ctx.signal_scale = lam(link, link);
  ctx.signal_fading = scenario.signal_fading[link];
  ctx.sinr_min = scenario.links[link].sinr_min;
  if (signal_known(scenario, csi, link)) ctx.signal_beta = beta(link, link);
  for (int z : members) {
    if (z == link) continue;
    if (is_visible(vis, classify_gain(scenario.links[z].kind, rx_kind, false))) {
      ctx.nu += lam(z, link) * beta(z, link);
    } else {
      ctx.unknown_interferers.push_back({lam(z, link), scenario.nakagami_m(z, link)});
    }
  }
  return ctx;
}

ChannelEvaluation evaluate_channel(const Scenario& scenario, CsiScenario csi, int channel,
                                   std::span<const int> members, UtilityKind kind, const SeriesControl& ctrl) {
  if (!supports(kind, csi)) throw UnsupportedError(to_string(kind) + " needs full CSI");
  check_members(scenario, channel, members);
  ChannelEvaluation out;
  for (int j : members) {
    LinkStats st = link_stats(link_context(scenario, csi, channel, j, members), ctrl);
    out.per_link.push_back({j, st.success_prob, st.expected_rate});
    if (st.success_prob < scenario.links[j].succ_prob_min) out.feasible = false;
    switch (kind) {
      case UtilityKind::ExpectedWeightedSumRate:
      case UtilityKind::WeightedSumRateFullCsi:
        out.utility += scenario.links[j].weight * st.expected_rate;
        break;
      case UtilityKind::AccessRate:
        out.utility += st.success_prob / scenario.n_links();
        break;
    }
  }
  return out;
}

bool qos_feasible(const Scenario& scenario, CsiScenario csi, int channel, std::span<const int> members,
                  const SeriesControl& ctrl) {
  check_members(scenario, channel, members);
  return std::all_of(members.begin(), members.end(), [&](int j) {
    return success_probability(link_context(scenario, csi, channel, j, members), ctrl) >=
           scenario.links[j].succ_prob_min;
  });
}

}  // namespace d2d

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

#include "d2d/dp_solver.hpp"

#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <unordered_map>

#include "d2d/errors.hpp"

namespace d2d {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<int> members_of(LinkMask m) {
  std::vector<int> out;
  for (int j = 0; m; ++j, m >>= 1)
    if (m & 1) out.push_back(j);
  return out;
}

LinkMask bit(int j) { return LinkMask{1} << j; }

struct BandCounts {
  LinkMask uplink_cellular = 0, downlink_cellular = 0, cellular = 0;
  std::vector<int> uplink_channels_upto, downlink_channels_upto;  // among channels 0..k-1
};

BandCounts band_counts(const Scenario& s) {
  BandCounts b;
  for (int j = 0; j < s.n_links(); ++j) {
    if (s.links[j].kind == LinkKind::UplinkCellular) b.uplink_cellular |= bit(j);
    if (s.links[j].kind == LinkKind::DownlinkCellular) b.downlink_cellular |= bit(j);
  }
  b.cellular = b.uplink_cellular | b.downlink_cellular;
  b.uplink_channels_upto.assign(s.n_channels() + 1, 0);
  b.downlink_channels_upto.assign(s.n_channels() + 1, 0);
  for (int k = 1; k <= s.n_channels(); ++k) {
    bool up = s.channels[k - 1].band == Band::Uplink;
    b.uplink_channels_upto[k] = b.uplink_channels_upto[k - 1] + up;
    b.downlink_channels_upto[k] = b.downlink_channels_upto[k - 1] + !up;
  }
  return b;
}

// Channels 0..k-1 have room for the state's cellular links of each band.
bool state_servable(const BandCounts& b, LinkMask state, int k) {
  return std::popcount(state & b.uplink_cellular) <= b.uplink_channels_upto[k] &&
         std::popcount(state & b.downlink_cellular) <= b.downlink_channels_upto[k];
}

// All QoS-feasible sets on one channel with their utilities. Feasibility is
// down-closed (dropping a member never hurts the others), so a depth-first
// extension in index order that stops at infeasible sets finds all of them,
// in lexicographic order.
struct ChannelFamily {
  std::vector<LinkMask> sets;
  std::vector<double> utility;
};

ChannelFamily channel_family(const Scenario& s, CsiScenario csi, int channel, UtilityKind kind,
                             const SeriesControl& ctrl) {
  ChannelFamily fam;
  const Band band = s.channels[channel].band;
  std::function<void(LinkMask, bool, int, double)> extend = [&](LinkMask m, bool has_cellular, int next, double u) {
    fam.sets.push_back(m);
    fam.utility.push_back(u);
    for (int j = next; j < s.n_links(); ++j) {
      if (!Scenario::band_allows(s.links[j].kind, band)) continue;
      if (s.cellular(j) && has_cellular) continue;
      LinkMask cand = m | bit(j);
      auto members = members_of(cand);
      ChannelEvaluation ev = evaluate_channel(s, csi, channel, members, kind, ctrl);
      if (ev.feasible) extend(cand, has_cellular || s.cellular(j), j + 1, ev.utility);
    }
  };
  extend(0, false, 0, 0.0);
  return fam;
}

void check_inputs(const Scenario& s, CsiScenario csi, UtilityKind kind) {
  if (!supports(kind, csi)) throw UnsupportedError(to_string(kind) + " needs full CSI");
  if (s.count(LinkKind::UplinkCellular) > s.count(Band::Uplink) ||
      s.count(LinkKind::DownlinkCellular) > s.count(Band::Downlink))
    throw InfeasibleError("more cellular links than channels of their band");
}

}  // namespace

std::vector<LinkMask> feasible_link_sets(const Scenario& scenario, CsiScenario csi, int stage, LinkMask state,
                                         UtilityKind kind, const SolverOptions& opts) {
  if (stage < 1 || stage > scenario.n_channels()) throw ArgumentError("stage out of range");
  if (scenario.n_links() > 63) throw CapacityError("link sets are limited to 63 links");
  BandCounts b = band_counts(scenario);
  std::vector<LinkMask> out;
  if (!state_servable(b, state, stage)) return out;
  ChannelFamily fam = channel_family(scenario, csi, stage - 1, kind, opts.series);
  for (LinkMask l : fam.sets)
    if ((l & ~state) == 0 && state_servable(b, state & ~l, stage - 1)) out.push_back(l);
  return out;
}

Assignment solve_dp(const Scenario& scenario, CsiScenario csi, UtilityKind kind, const SolverOptions& opts) {
  const int n = scenario.n_links(), m = scenario.n_channels();
  if (n > opts.dp_max_links || n > 30)
    throw CapacityError("dynamic program limited to " + std::to_string(std::min(opts.dp_max_links, 30)) + " links");
  check_inputs(scenario, csi, kind);

  const BandCounts b = band_counts(scenario);
  const LinkMask all = n == 0 ? 0 : (bit(n) - 1);
  const size_t n_states = size_t{1} << n;

  std::vector<ChannelFamily> fams;
  for (int i = 0; i < m; ++i) fams.push_back(channel_family(scenario, csi, i, kind, opts.series));

  // Stage 0: links left over are idle D2D links; cellular leftovers are not allowed.
  std::vector<double> prev(n_states), cur(n_states);
  for (size_t j = 0; j < n_states; ++j) prev[j] = (j & b.cellular) ? kNegInf : 0.0;
  std::vector<std::vector<std::uint32_t>> choice(m + 1);

  for (int k = 1; k <= m; ++k) {
    const auto& fam = fams[k - 1];
    const bool last = k == m;
    choice[k].assign(last ? 1 : n_states, 0);
    std::fill(cur.begin(), cur.end(), kNegInf);
    for (size_t js = last ? all : 0; js < n_states; ++js) {
      const LinkMask state = js;
      if (state_servable(b, state, k)) {
        double best = kNegInf;
        std::uint32_t best_set = 0;
        for (size_t f = 0; f < fam.sets.size(); ++f) {
          const LinkMask l = fam.sets[f];
          if (l & ~state) continue;
          const double rest = prev[state & ~l];
          if (rest == kNegInf) continue;
          const double v = fam.utility[f] + rest;
          if (v > best) {
            best = v;
            best_set = static_cast<std::uint32_t>(l);
          }
        }
        cur[js] = best;
        choice[k][last ? 0 : js] = best_set;
      }
      if (last) break;
    }
    std::swap(prev, cur);
  }

  const double opt = prev[all];
  if (opt == kNegInf) throw InfeasibleError("no channel assignment meets every cellular QoS floor");

  Assignment a;
  a.channel_of.assign(n, kInactive);
  LinkMask state = all;
  for (int k = m; k >= 1; --k) {
    const LinkMask l = choice[k][k == m ? 0 : state];
    for (int j : members_of(l)) a.channel_of[j] = k - 1;
    state &= ~l;
  }
  a.value = opt;
  return a;
}

Assignment solve_exhaustive(const Scenario& scenario, CsiScenario csi, UtilityKind kind, const SolverOptions& opts) {
  check_inputs(scenario, csi, kind);
  const int n = scenario.n_links(), m = scenario.n_channels();
  if (n > 63) throw CapacityError("exhaustive search limited to 63 links");

  // Candidate count: injective cellular placements times (M + 1)^{N_d}.
  double candidates = 1.0;
  int up_used = 0, down_used = 0;
  for (int j = 0; j < n; ++j) {
    switch (scenario.links[j].kind) {
      case LinkKind::UplinkCellular: candidates *= scenario.count(Band::Uplink) - up_used++; break;
      case LinkKind::DownlinkCellular: candidates *= scenario.count(Band::Downlink) - down_used++; break;
      case LinkKind::D2D: candidates *= m + 1; break;
    }
  }
  if (candidates > opts.exhaustive_max_candidates)
    throw CapacityError("exhaustive search would visit " + std::to_string(candidates) + " assignments");

  std::vector<std::unordered_map<LinkMask, double>> memo(m);
  auto channel_value = [&](int i, LinkMask mask) {
    if (mask == 0) return 0.0;
    auto it = memo[i].find(mask);
    if (it != memo[i].end()) return it->second;
    ChannelEvaluation ev = evaluate_channel(scenario, csi, i, members_of(mask), kind, opts.series);
    double v = ev.feasible ? ev.utility : kNegInf;
    memo[i].emplace(mask, v);
    return v;
  };

  std::vector<LinkMask> on(m, 0);
  std::vector<int> current(n, kInactive), best_assign;
  double best = kNegInf;
  std::function<void(int)> place = [&](int j) {
    if (j == n) {
      double total = 0.0;
      for (int i = 0; i < m && total != kNegInf; ++i) total += channel_value(i, on[i]);
      if (total > best) {
        best = total;
        best_assign = current;
      }
      return;
    }
    const LinkKind kind_j = scenario.links[j].kind;
    if (!is_cellular(kind_j)) {
      current[j] = kInactive;
      place(j + 1);
    }
    for (int i = 0; i < m; ++i) {
      if (!Scenario::band_allows(kind_j, scenario.channels[i].band)) continue;
      if (is_cellular(kind_j)) {
        bool taken = false;
        for (int z : members_of(on[i])) taken = taken || scenario.cellular(z);
        if (taken) continue;
      }
      on[i] |= bit(j);
      current[j] = i;
      place(j + 1);
      on[i] &= ~bit(j);
    }
    current[j] = kInactive;
  };
  place(0);

  if (best == kNegInf) throw InfeasibleError("no channel assignment meets every cellular QoS floor");
  return {best_assign, best};
}

}  // namespace d2d

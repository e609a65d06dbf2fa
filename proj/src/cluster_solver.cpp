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

#include "d2d/cluster_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "d2d/errors.hpp"
#include "d2d/matching.hpp"

namespace d2d {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<int> with(std::vector<int> set, int j) {
  set.insert(std::upper_bound(set.begin(), set.end(), j), j);
  return set;
}

void require_supported(UtilityKind kind, CsiScenario csi) {
  if (!supports(kind, csi)) throw UnsupportedError(to_string(kind) + " needs full CSI");
}

double channel_utility(const Scenario& s, CsiScenario csi, int ch, const std::vector<int>& members, UtilityKind kind,
                       const SeriesControl& ctrl) {
  return members.empty() ? 0.0 : evaluate_channel(s, csi, ch, members, kind, ctrl).utility;
}

// Per-link SINR ratios for the access priority; full CSI makes the SINR
// deterministic.
double min_rate_ratio(const Scenario& s, int g, const std::vector<int>& members) {
  double best = std::numeric_limits<double>::infinity();
  for (int z : members) {
    InterferenceContext c = link_context(s, CsiScenario::Full, g, z, members);
    double sinr = c.signal_scale * *c.signal_beta / c.nu;
    best = std::min(best, std::log1p(sinr) / std::log1p(c.sinr_min));
  }
  return best;
}

std::vector<int> remaining_d2d(const Scenario& s, const Clustering& cl) {
  std::vector<char> placed(s.n_links(), 0);
  for (const auto& g : cl.clusters)
    for (int j : g) placed[j] = 1;
  std::vector<int> out;
  for (int j = 0; j < s.n_links(); ++j)
    if (!placed[j] && !s.cellular(j)) out.push_back(j);
  return out;
}

}  // namespace

Clustering cluster_cellular(const Scenario& scenario, CsiScenario csi, UtilityKind kind, const SolverOptions& opts) {
  require_supported(kind, csi);
  const int m = scenario.n_channels();
  Clustering cl;
  cl.clusters.assign(m, {});
  cl.queues.assign(m, {});
  std::vector<int> cellular;
  for (int j = 0; j < scenario.n_links(); ++j)
    if (scenario.cellular(j)) cellular.push_back(j);
  if (cellular.empty()) return cl;
  if (static_cast<int>(cellular.size()) > m) throw InfeasibleError("more cellular links than clusters");

  WeightMatrix w(static_cast<int>(cellular.size()), m);
  for (int r = 0; r < w.rows(); ++r) {
    const int j = cellular[r];
    for (int g = 0; g < m; ++g) {
      w(r, g) = kForbidden;
      if (!Scenario::band_allows(scenario.links[j].kind, scenario.channels[g].band)) continue;
      const std::vector<int> solo = {j};
      ChannelEvaluation ev = evaluate_channel(scenario, csi, g, solo, kind, opts.series);
      if (!ev.feasible) continue;
      const double rate = ev.per_link[0].expected_rate;
      w(r, g) = kind == UtilityKind::AccessRate ? rate : scenario.links[j].weight * rate;
    }
  }
  MatchResult mr = max_weight_matching(w, true);
  if (!mr.complete) throw InfeasibleError("cellular links cannot all meet their QoS floor");
  for (auto [r, g] : mr.pairs) {
    cl.clusters[g].push_back(cellular[r]);
    cl.queues[g].push_back(cellular[r]);
  }
  return cl;
}

double priority_wsr(const Scenario& scenario, CsiScenario csi, UtilityKind kind, int g, int j,
                    const Clustering& clustering, std::span<const int> remaining, const SeriesControl& ctrl) {
  if (kind == UtilityKind::AccessRate) throw ArgumentError("priority_wsr needs a sum-rate objective");
  require_supported(kind, csi);
  auto gain = [&](int gg, int jj) {
    auto grown = with(clustering.clusters[gg], jj);
    ChannelEvaluation ev = evaluate_channel(scenario, csi, gg, grown, kind, ctrl);
    return std::pair{ev.feasible, ev.utility - channel_utility(scenario, csi, gg, clustering.clusters[gg], kind, ctrl)};
  };
  auto [ok, v] = gain(g, j);
  if (ok) return v;
  for (int jj : remaining)
    for (int gg = 0; gg < static_cast<int>(clustering.clusters.size()); ++gg)
      if (qos_feasible(scenario, csi, gg, with(clustering.clusters[gg], jj), ctrl)) return kNegInf;
  return v;
}

double priority_access(const Scenario& scenario, int g, int j, const Clustering& clustering, const SeriesControl& ctrl) {
  const int m = static_cast<int>(clustering.clusters.size());
  int f = 0;
  for (int gg = 0; gg < m; ++gg)
    f += qos_feasible(scenario, CsiScenario::Full, gg, with(clustering.clusters[gg], j), ctrl);
  return min_rate_ratio(scenario, g, with(clustering.clusters.at(g), j)) * std::exp2(-(f > 0 ? f : m));
}

Clustering greedy_cluster(const Scenario& scenario, CsiScenario csi, UtilityKind kind, const SolverOptions& opts) {
  Clustering cl = cluster_cellular(scenario, csi, kind, opts);
  const int m = scenario.n_channels(), n = scenario.n_links();
  const bool access = kind == UtilityKind::AccessRate;
  std::vector<int> pending = remaining_d2d(scenario, cl);
  std::vector<char> open(n, 0);
  for (int j : pending) open[j] = 1;

  // Cached state per (cluster, link): feasibility of the enlarged cluster,
  // its utility gain, and the current priority.
  std::vector<std::vector<char>> feasible(m, std::vector<char>(n, 0));
  std::vector<std::vector<double>> gain(m, std::vector<double>(n, 0.0)), prio(m, std::vector<double>(n, kNegInf));
  bool blocked = false;  // no remaining link fits any cluster: priorities become raw gains

  auto refresh_feasibility = [&](int g) {
    const double base = access ? 0.0 : channel_utility(scenario, csi, g, cl.clusters[g], kind, opts.series);
    for (int j : pending) {
      if (!open[j]) continue;
      auto grown = with(cl.clusters[g], j);
      ChannelEvaluation ev = evaluate_channel(scenario, csi, g, grown, kind, opts.series);
      feasible[g][j] = ev.feasible;
      gain[g][j] = ev.utility - base;
    }
  };
  auto refresh_priority = [&](int g) {
    for (int j : pending) {
      if (!open[j]) continue;
      if (access) {
        int f = 0;
        for (int gg = 0; gg < m; ++gg) f += feasible[gg][j];
        prio[g][j] = min_rate_ratio(scenario, g, with(cl.clusters[g], j)) * std::exp2(-(f > 0 ? f : m));
      } else {
        prio[g][j] = feasible[g][j] || blocked ? gain[g][j] : kNegInf;
      }
    }
  };

  for (int g = 0; g < m; ++g) refresh_feasibility(g);
  for (int g = 0; g < m; ++g) refresh_priority(g);

  for (size_t left = pending.size(); left > 0; --left) {
    int best_g = -1, best_j = -1;
    double best = kNegInf;
    auto scan = [&] {
      for (int j : pending) {
        if (!open[j]) continue;
        for (int g = 0; g < m; ++g) {
          if (best_j < 0 || prio[g][j] > best) {
            best = prio[g][j];
            best_g = g;
            best_j = j;
          }
        }
      }
    };
    scan();
    if (best == kNegInf && !access && !blocked) {
      // Every cached priority is -inf, so no remaining link fits anywhere.
      blocked = true;
      for (int g = 0; g < m; ++g) refresh_priority(g);
      best_j = -1;
      scan();
    }
    open[best_j] = 0;
    cl.clusters[best_g] = with(cl.clusters[best_g], best_j);
    cl.queues[best_g].push_back(best_j);
    refresh_feasibility(best_g);
    refresh_priority(best_g);
  }
  return cl;
}

ClusterChannelWeight cluster_channel_weight(const Scenario& scenario, CsiScenario csi, int channel,
                                            const Clustering& clustering, int g, UtilityKind kind,
                                            const SeriesControl& ctrl) {
  require_supported(kind, csi);
  const Band band = scenario.channels.at(channel).band;
  ClusterChannelWeight out;
  std::vector<int> seed;
  for (int j : clustering.queues.at(g))
    if (scenario.cellular(j)) seed.push_back(j);
  for (int j : seed) {
    if (!Scenario::band_allows(scenario.links[j].kind, band)) {
      out.weight = kNegInf;
      return out;
    }
  }
  if (!seed.empty() && !qos_feasible(scenario, csi, channel, seed, ctrl)) {
    out.weight = kNegInf;
    return out;
  }
  std::vector<int> current = seed;
  std::vector<int> admitted;  // D2D links in admission order
  double best = channel_utility(scenario, csi, channel, current, kind, ctrl);
  size_t best_len = 0;
  for (int j : clustering.queues[g]) {
    if (scenario.cellular(j)) continue;
    auto grown = with(current, j);
    ChannelEvaluation ev = evaluate_channel(scenario, csi, channel, grown, kind, ctrl);
    if (!ev.feasible) continue;
    current = grown;
    admitted.push_back(j);
    if (ev.utility > best) {
      best = ev.utility;
      best_len = admitted.size();
    }
  }
  out.weight = best;
  out.selected = seed;
  for (size_t b = 0; b < best_len; ++b) out.selected = with(out.selected, admitted[b]);
  return out;
}

Assignment solve_cluster(const Scenario& scenario, CsiScenario csi, UtilityKind kind, const SolverOptions& opts) {
  Clustering cl = greedy_cluster(scenario, csi, kind, opts);
  const int m = scenario.n_channels();
  WeightMatrix w(m, m);
  std::vector<std::vector<ClusterChannelWeight>> sel(m);
  std::vector<bool> required(m, false);
  for (int g = 0; g < m; ++g) {
    for (int j : cl.clusters[g]) required[g] = required[g] || scenario.cellular(j);
    for (int i = 0; i < m; ++i) {
      sel[g].push_back(cluster_channel_weight(scenario, csi, i, cl, g, kind, opts.series));
      w(g, i) = sel[g][i].weight == kNegInf ? kForbidden : sel[g][i].weight;
    }
  }
  MatchResult mr = max_weight_matching(w, required);
  if (!mr.complete) throw InfeasibleError("clusters with cellular links cannot all be given a channel");
  Assignment a;
  a.channel_of.assign(scenario.n_links(), kInactive);
  for (auto [g, i] : mr.pairs) {
    for (int j : sel[g][i].selected) a.channel_of[j] = i;
    a.value += sel[g][i].weight;
  }
  return a;
}

Assignment solve_semi_orthogonal(const Scenario& scenario, CsiScenario csi, UtilityKind kind,
                                 const SolverOptions& opts) {
  Clustering cl = cluster_cellular(scenario, csi, kind, opts);
  const int m = scenario.n_channels();
  Assignment a;
  a.channel_of.assign(scenario.n_links(), kInactive);
  std::vector<double> base(m, 0.0);
  for (int i = 0; i < m; ++i) {
    for (int j : cl.clusters[i]) a.channel_of[j] = i;
    base[i] = channel_utility(scenario, csi, i, cl.clusters[i], kind, opts.series);
  }
  std::vector<int> d2d = remaining_d2d(scenario, cl);
  if (!d2d.empty()) {
    WeightMatrix w(static_cast<int>(d2d.size()), m);
    for (int r = 0; r < w.rows(); ++r) {
      for (int i = 0; i < m; ++i) {
        ChannelEvaluation ev = evaluate_channel(scenario, csi, i, with(cl.clusters[i], d2d[r]), kind, opts.series);
        w(r, i) = ev.feasible ? ev.utility - base[i] : kForbidden;
      }
    }
    MatchResult mr = max_weight_matching(w, false);
    for (auto [r, i] : mr.pairs) a.channel_of[d2d[r]] = i;
  }
  a.value = assignment_value(scenario, csi, kind, a, opts.series);
  return a;
}

}  // namespace d2d

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

#include <doctest.h>

#include <cmath>
#include <random>

#include "d2d/errors.hpp"
#include "d2d/utility.hpp"
#include "fixtures.hpp"

using namespace d2d;
using d2d::testing::make_scenario;

namespace {

// One uplink cellular link (0) and two D2D links (1, 2) on one uplink channel.
Scenario three_links(double succ_prob_min = 0.9) {
  Eigen::MatrixXd lam(3, 3);
  lam << 100, 0.5, 0.2,
         0.1, 50, 0.3,
         0.2, 0.4, 80;
  return make_scenario({LinkKind::UplinkCellular, LinkKind::D2D, LinkKind::D2D}, 1, 0, lam, succ_prob_min);
}

}  // namespace

TEST_CASE("objective names round-trip") {
  for (UtilityKind k :
       {UtilityKind::ExpectedWeightedSumRate, UtilityKind::WeightedSumRateFullCsi, UtilityKind::AccessRate})
    CHECK(parse_utility(to_string(k)) == k);
  CHECK_THROWS_AS(parse_utility("sum"), ConfigError);
  CHECK(supports(UtilityKind::ExpectedWeightedSumRate, CsiScenario::S4));
  CHECK_FALSE(supports(UtilityKind::WeightedSumRateFullCsi, CsiScenario::S1));
  CHECK_FALSE(supports(UtilityKind::AccessRate, CsiScenario::S2));
}

TEST_CASE("qos_feasible examples") {
  Scenario s = three_links();
  std::vector<int> none;
  CHECK(qos_feasible(s, CsiScenario::Full, 0, none));
  std::vector<int> cell = {0};
  CHECK(qos_feasible(s, CsiScenario::Full, 0, cell));

  // Single D2D link, signal hidden under S2, Rayleigh with SNR 50/1 against
  // threshold 1: p = exp(-1/50) ~ 0.9802.
  std::vector<int> d = {1};
  const double p = std::exp(-1.0 / 50.0);
  s.links[1].succ_prob_min = p - 1e-6;
  CHECK(qos_feasible(s, CsiScenario::S2, 0, d));
  s.links[1].succ_prob_min = 0.99;
  CHECK_FALSE(qos_feasible(s, CsiScenario::S2, 0, d));
}

TEST_CASE("link_context splits known and hidden interference") {
  Scenario s = three_links();
  std::vector<int> all = {0, 1, 2};
  InterferenceContext full = link_context(s, CsiScenario::Full, 0, 1, all);
  CHECK(full.nu == doctest::Approx(1.0 + 0.5 + 0.4));
  CHECK(full.unknown_interferers.empty());
  CHECK(full.signal_beta.has_value());

  // S1 hides device-to-device interference: the D2D tx 2 and the uplink
  // cellular tx 0 are both devices.
  InterferenceContext s1 = link_context(s, CsiScenario::S1, 0, 1, all);
  CHECK(s1.nu == doctest::Approx(1.0));
  CHECK(s1.unknown_interferers.size() == 2);
  // The base station receiver still sees D2D interference under S1.
  InterferenceContext bs = link_context(s, CsiScenario::S1, 0, 0, all);
  CHECK(bs.nu == doctest::Approx(1.0 + 0.1 + 0.2));
  CHECK(bs.unknown_interferers.empty());
  // S4 hides it as well.
  InterferenceContext bs4 = link_context(s, CsiScenario::S4, 0, 0, all);
  CHECK(bs4.unknown_interferers.size() == 2);
}

TEST_CASE("member checks") {
  Eigen::MatrixXd lam = Eigen::MatrixXd::Constant(3, 3, 0.1);
  lam.diagonal().setConstant(50);
  Scenario s = make_scenario({LinkKind::UplinkCellular, LinkKind::DownlinkCellular, LinkKind::D2D}, 1, 1, lam);
  std::vector<int> wrong = {0};
  CHECK_THROWS_AS(evaluate_channel(s, CsiScenario::Full, 1, wrong, UtilityKind::ExpectedWeightedSumRate),
                  ArgumentError);
  Scenario t = make_scenario({LinkKind::UplinkCellular, LinkKind::UplinkCellular}, 1, 0,
                             Eigen::MatrixXd::Identity(2, 2) * 10 + Eigen::MatrixXd::Constant(2, 2, 0.1));
  std::vector<int> both = {0, 1};
  CHECK_THROWS_AS(qos_feasible(t, CsiScenario::Full, 0, both), ArgumentError);
  std::vector<int> one = {0};
  CHECK_THROWS_AS(evaluate_channel(s, CsiScenario::S1, 0, one, UtilityKind::AccessRate), UnsupportedError);
}

TEST_CASE("full-CSI utilities are deterministic functions of the SINR") {
  Scenario s = three_links();
  std::vector<int> all = {0, 1, 2};
  const double sinr[] = {100 / (1 + 0.1 + 0.2), 50 / (1 + 0.5 + 0.4), 80 / (1 + 0.2 + 0.3)};
  ChannelEvaluation wsr = evaluate_channel(s, CsiScenario::Full, 0, all, UtilityKind::WeightedSumRateFullCsi);
  double expect = 0;
  for (double x : sinr) expect += std::log2(1 + x);
  CHECK(wsr.utility == doctest::Approx(expect).epsilon(1e-12));
  CHECK(wsr.feasible);
  ChannelEvaluation ew = evaluate_channel(s, CsiScenario::Full, 0, all, UtilityKind::ExpectedWeightedSumRate);
  CHECK(ew.utility == doctest::Approx(expect).epsilon(1e-12));

  // Access rate divides by the scenario's link count, not the channel's.
  std::vector<int> one = {1};
  CHECK(evaluate_channel(s, CsiScenario::Full, 0, one, UtilityKind::AccessRate).utility ==
        doctest::Approx(1.0 / 3.0));
}

TEST_CASE("utility invariants on random instances") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    Scenario s = d2d::testing::random_small_scenario(100 + trial);
    if (s.count(LinkKind::D2D) < 2) continue;
    const int ch = 0;
    std::vector<int> members;
    if (s.count(LinkKind::UplinkCellular) > 0) members.push_back(0);
    for (int j = 0; j < s.n_links(); ++j)
      if (!s.cellular(j)) members.push_back(j);
    for (CsiScenario csi : kAllCsi) {
      const auto kind = UtilityKind::ExpectedWeightedSumRate;
      ChannelEvaluation base = evaluate_channel(s, csi, ch, members, kind);

      std::vector<int> rev(members.rbegin(), members.rend());
      CHECK(evaluate_channel(s, csi, ch, rev, kind).utility == doctest::Approx(base.utility).epsilon(1e-9));

      Scenario scaled = s;
      const double c = 0.5 + 2 * u(rng);
      for (auto& l : scaled.links) l.weight *= c;
      ChannelEvaluation sc = evaluate_channel(scaled, csi, ch, members, kind);
      CHECK(sc.utility == doctest::Approx(c * base.utility).epsilon(1e-10));
      CHECK(sc.feasible == base.feasible);

      // Dropping the last D2D member never lowers anyone's success probability.
      std::vector<int> fewer(members.begin(), members.end() - 1);
      ChannelEvaluation less = evaluate_channel(s, csi, ch, fewer, kind);
      for (size_t k = 0; k < fewer.size(); ++k)
        CHECK(less.per_link[k].success_prob >= base.per_link[k].success_prob - 1e-12);
      if (base.feasible) CHECK(less.feasible);
    }
  }
}

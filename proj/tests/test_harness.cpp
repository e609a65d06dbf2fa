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
#include <iterator>
#include <sstream>

#include "d2d/errors.hpp"
#include "d2d/harness.hpp"

using namespace d2d;

namespace {

ExperimentConfig tiny() {
  ExperimentConfig c;
  c.network.n_uplink_channels = c.network.n_uplink_cellular = 1;
  c.network.n_downlink_channels = c.network.n_downlink_cellular = 1;
  c.network.n_d2d = 2;
  c.drops = 1;
  c.algorithms = {Algorithm::Dp};
  return c;
}

std::string csv(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  write_csv(os, rows);
  return os.str();
}

}  // namespace

TEST_CASE("defaults follow the reference setup") {
  ExperimentConfig c;
  CHECK(c.network.cell_radius_m == 500.0);
  CHECK(c.network.group_radius_m == 60.0);
  CHECK(c.network.noise_dbm == -114.0);
  CHECK(c.network.cellular_ue_power_dbm == 24.0);
  CHECK(c.network.d2d_power_dbm == 24.0);
  CHECK(c.network.bs_power_dbm == 46.0);
  CHECK(c.network.sinr_min_db == 0.0);
  CHECK(c.network.succ_prob_min == 0.99);
  CHECK(c.network.shadowing_std_db == 8.0);
  CHECK(c.network.cellular_weight == 1.0);
  CHECK(c.network.d2d_weight == 1.0);
  CHECK_NOTHROW(validate(c));
}

TEST_CASE("config text") {
  std::istringstream in(
      "# comment line\n"
      "network.d2d_links = 5   # trailing comment\n"
      "\n"
      "  experiment.algorithms = dp, cluster\n"
      "experiment.csi=full,s3\n"
      "experiment.seed = 18446744073709551615\n"
      "power.bs_dbm = 30.5\n"
      "fading.d2d = nakagami:2\n"
      "experiment.timing = true\n");
  ExperimentConfig c = parse_config(in);
  CHECK(c.network.n_d2d == 5);
  CHECK(c.algorithms == std::vector<Algorithm>{Algorithm::Dp, Algorithm::Cluster});
  CHECK(c.csi == std::vector<CsiScenario>{CsiScenario::Full, CsiScenario::S3});
  CHECK(c.base_seed == 18446744073709551615ULL);
  CHECK(c.network.bs_power_dbm == 30.5);
  CHECK(c.network.d2d_fading == FadingSpec::nakagami(2));
  CHECK(c.timing);

  std::istringstream back(to_text(c));
  ExperimentConfig d = parse_config(back);
  CHECK(to_text(d) == to_text(c));

  auto fails = [](const std::string& text) {
    std::istringstream s(text);
    CHECK_THROWS_AS(parse_config(s), ConfigError);
  };
  fails("network.d2d_links 5\n");
  fails("network.bogus = 1\n");
  fails("network.d2d_links = five\n");
  fails("network.d2d_links = 5x\n");
  fails("experiment.objective = sum\n");
  fails("experiment.algorithms = dp,greedy\n");
  fails("experiment.timing = maybe\n");
  try {
    std::istringstream s("\n\nqos.succ_prob_min = ?\n");
    parse_config(s);
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(load_config("/nonexistent/cfg.txt"), ConfigError);
}

TEST_CASE("experiment validation") {
  ExperimentConfig c = tiny();
  c.objective = UtilityKind::WeightedSumRateFullCsi;
  c.csi = {CsiScenario::Full, CsiScenario::S2};
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = tiny();
  c.algorithms = {Algorithm::Dp, Algorithm::Dp};
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = tiny();
  c.drops = 0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = tiny();
  c.network.n_uplink_cellular = 2;
  CHECK_THROWS_AS(run_experiment(c), ConfigError);
}

TEST_CASE("a single tiny drop") {
  auto rows = run_experiment(tiny());
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].drop_id == 0);
  CHECK(rows[0].seed == drop_seed(1, 0));
  CHECK(rows[0].feasible);
  CHECK(rows[0].utility > 0);
  CHECK(rows[0].n_active_d2d == rows[0].n_d2d_uplink + rows[0].n_d2d_downlink);
  CHECK(rows[0].runtime_ms == 0.0);
}

TEST_CASE("output is reproducible and order-stable") {
  ExperimentConfig c = tiny();
  c.drops = 6;
  c.algorithms = {Algorithm::SemiOrthogonal, Algorithm::Dp, Algorithm::Cluster};
  c.csi = {CsiScenario::S2, CsiScenario::Full};
  const std::string a = csv(run_experiment(c));
  CHECK(a == csv(run_experiment(c)));
  c.threads = 3;
  CHECK(a == csv(run_experiment(c)));

  // Rows sorted by drop, algorithm, CSI regardless of list order.
  auto rows = run_experiment(c);
  CHECK(rows.size() == 36);
  CHECK(rows[0].algorithm == Algorithm::Dp);
  CHECK(rows[0].csi == CsiScenario::Full);
  CHECK(rows[1].csi == CsiScenario::S2);
  CHECK(rows[2].algorithm == Algorithm::Cluster);
  CHECK(a.substr(0, a.find('\n')) ==
        "drop_id,seed,algorithm,csi_scenario,objective,utility,n_active_d2d,n_d2d_uplink,n_d2d_downlink,"
        "feasible,runtime_ms");
}

TEST_CASE("adding algorithms leaves scenarios and other rows untouched") {
  ExperimentConfig c = tiny();
  c.drops = 4;
  auto dp_only = run_experiment(c);
  c.algorithms = {Algorithm::Dp, Algorithm::Cluster, Algorithm::SemiOrthogonal};
  auto more = run_experiment(c);
  std::vector<ResultRow> dp_rows;
  for (const auto& r : more)
    if (r.algorithm == Algorithm::Dp) dp_rows.push_back(r);
  CHECK(csv(dp_rows) == csv(dp_only));
  for (const auto& r : more) CHECK(r.seed == drop_seed(c.base_seed, r.drop_id));
}

TEST_CASE("drop seeds") {
  // SplitMix64 from state 0: the first outputs are published constants.
  CHECK(drop_seed(0, 0) == 0xE220A8397B1DCDAFULL);
  CHECK(drop_seed(0, 1) == 0x6E789E6AA1B965F4ULL);
  CHECK(drop_seed(7, 3) == drop_seed(7, 3));
  CHECK(drop_seed(7, 3) != drop_seed(8, 3));
}

TEST_CASE("infeasible drops and capacity limits") {
  ExperimentConfig c = tiny();
  c.drops = 3;
  c.network.sinr_min_db = 80.0;
  for (const auto& r : run_experiment(c)) {
    CHECK_FALSE(r.feasible);
    CHECK(r.utility == 0.0);
    CHECK(r.n_active_d2d == 0);
  }
  ExperimentConfig big;
  big.drops = 1;
  big.algorithms = {Algorithm::Exhaustive};
  CHECK_THROWS_AS(run_experiment(big), CapacityError);
}

TEST_CASE("summaries") {
  CHECK_THROWS_AS(summarize({}, {GroupField::Algorithm}), ArgumentError);
  ResultRow r;
  r.utility = 3.5;
  auto one = summarize({r}, {GroupField::Algorithm});
  REQUIRE(one.size() == 1);
  CHECK(one[0].key == std::vector<std::string>{"dp"});
  CHECK(one[0].mean == 3.5);
  CHECK(one[0].std_error == 0.0);
  auto two = summarize({r, r}, {});
  CHECK(two[0].count == 2);
  CHECK(two[0].std_error == 0.0);

  // Values 0..99 split into two algorithms by parity.
  std::vector<ResultRow> rows;
  for (int i = 0; i < 100; ++i) {
    ResultRow x;
    x.algorithm = i % 2 ? Algorithm::Cluster : Algorithm::Dp;
    x.utility = i;
    x.n_d2d_uplink = i % 3;
    rows.push_back(x);
  }
  auto all = summarize(rows, {});
  CHECK(all[0].mean == doctest::Approx(49.5));
  // Sample variance of 0..99 is 100 * 101 / 12.
  CHECK(all[0].std_error == doctest::Approx(std::sqrt(100.0 * 101.0 / 12.0 / 100.0)));
  auto split = summarize(rows, {GroupField::Algorithm, GroupField::Csi});
  REQUIRE(split.size() == 2);
  CHECK(split[0].key == std::vector<std::string>{"dp", "full"});
  CHECK(split[0].mean == doctest::Approx(49.0));
  CHECK(split[1].mean == doctest::Approx(50.0));
  CHECK(summarize(rows, {}, Metric::D2dUplink)[0].mean == doctest::Approx(99.0 / 100.0));
}

TEST_CASE("CSI knowledge orders the optimal expected sum-rate") {
  ExperimentConfig c;
  c.network.n_uplink_channels = c.network.n_uplink_cellular = 3;
  c.network.n_downlink_channels = c.network.n_downlink_cellular = 3;
  c.network.n_d2d = 6;
  c.drops = 200;
  c.algorithms = {Algorithm::Dp};
  c.csi.assign(std::begin(kAllCsi), std::end(kAllCsi));
  auto means = summarize(run_experiment(c), {GroupField::Csi});
  REQUIRE(means.size() == 5);
  const double full = means[0].mean, s1 = means[1].mean, s2 = means[2].mean, s3 = means[3].mean;
  CHECK(full >= s1);
  CHECK(s1 >= s2);
  // Hiding base-station interference on top of S1 costs less than hiding the
  // D2D links' own fading.
  CHECK(std::abs(s1 - s3) < s1 - s2);
}

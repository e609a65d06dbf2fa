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
#include <iosfwd>
#include <string>
#include <vector>

#include "d2d/dp_solver.hpp"
#include "d2d/model.hpp"
#include "d2d/utility.hpp"

namespace d2d {

enum class Algorithm { Dp, Cluster, Exhaustive, SemiOrthogonal };

std::string to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& text);

struct ExperimentConfig {
  NetworkConfig network;
  int drops = 100;
  std::uint64_t base_seed = 1;
  std::vector<Algorithm> algorithms = {Algorithm::Cluster};
  std::vector<CsiScenario> csi = {CsiScenario::Full};
  UtilityKind objective = UtilityKind::ExpectedWeightedSumRate;
  SolverOptions solver;
  int threads = 1;
  bool timing = false;  // runtime_ms is 0 unless set, keeping output reproducible
};

/// Throws ConfigError on inconsistent settings, including a full-CSI-only
/// objective paired with a partial-CSI scenario.
void validate(const ExperimentConfig& config);

/// Sets one dotted key (see README for the list). Throws ConfigError for
/// unknown keys or unparsable values.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

/// Reads `key = value` lines; `#` starts a comment, blank lines are skipped.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

/// Key/value text that parse_config reads back to the same configuration.
std::string to_text(const ExperimentConfig& config);

/// Seed of drop d: output d + 1 of a SplitMix64 generator started at
/// base_seed. Independent of the algorithm and CSI lists.
std::uint64_t drop_seed(std::uint64_t base_seed, int drop_id);

struct ResultRow {
  int drop_id = 0;
  std::uint64_t seed = 0;
  Algorithm algorithm = Algorithm::Dp;
  CsiScenario csi = CsiScenario::Full;
  UtilityKind objective = UtilityKind::ExpectedWeightedSumRate;
  double utility = 0.0;
  int n_active_d2d = 0;
  int n_d2d_uplink = 0;
  int n_d2d_downlink = 0;
  bool feasible = false;
  double runtime_ms = 0.0;
};

/// Runs every (algorithm, CSI) pair on each drop. Infeasible drops yield
/// feasible=false rows with zero utility; capacity errors propagate. Every
/// assignment is re-validated and a violation throws Error. Rows come back
/// sorted by (drop, algorithm, CSI).
std::vector<ResultRow> run_experiment(const ExperimentConfig& config);

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows);

enum class GroupField { Algorithm, Csi, Objective };
enum class Metric { Utility, ActiveD2d, D2dUplink, D2dDownlink };

struct SummaryRow {
  std::vector<std::string> key;  // one entry per group field
  int count = 0;
  double mean = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(count)
};

/// Group-wise mean and standard error, groups in order of first appearance.
/// Throws ArgumentError on empty input.
std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows, const std::vector<GroupField>& group_by,
                                  Metric metric = Metric::Utility);

}  // namespace d2d

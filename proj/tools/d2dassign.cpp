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

// Command-line driver: runs a drop-based experiment and writes CSV.
//
// Exit codes: 0 ok, 1 other failure, 2 configuration error, 3 every run
// infeasible, 4 instance too large for the chosen solver.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "d2d/errors.hpp"
#include "d2d/harness.hpp"

namespace {

void print_summary(std::ostream& os, const std::vector<d2d::ResultRow>& rows) {
  using d2d::Metric;
  const std::vector<d2d::GroupField> by = {d2d::GroupField::Algorithm, d2d::GroupField::Csi};
  auto util = d2d::summarize(rows, by, Metric::Utility);
  auto up = d2d::summarize(rows, by, Metric::D2dUplink);
  auto down = d2d::summarize(rows, by, Metric::D2dDownlink);
  char line[256];
  std::snprintf(line, sizeof line, "%-16s %-5s %6s %12s %10s %8s %8s\n", "algorithm", "csi", "runs", "utility",
                "se", "d2d_ul", "d2d_dl");
  os << line;
  for (size_t g = 0; g < util.size(); ++g) {
    std::snprintf(line, sizeof line, "%-16s %-5s %6d %12.6f %10.6f %8.3f %8.3f\n", util[g].key[0].c_str(),
                  util[g].key[1].c_str(), util[g].count, util[g].mean, util[g].std_error, up[g].mean, down[g].mean);
    os << line;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Channel assignment for D2D links underlaying a cellular network"};
  std::string config_path, out_path;
  std::vector<std::string> sets;
  std::vector<std::pair<std::string, std::string>> overrides;
  auto flag_to_key = [&](const std::string& flag, const std::string& key, const std::string& help) {
    app.add_option_function<std::string>(
        flag, [&overrides, key](const std::string& v) { overrides.emplace_back(key, v); }, help);
  };
  app.add_option("--config", config_path, "Key/value configuration file")->check(CLI::ExistingFile);
  flag_to_key("--drops", "experiment.drops", "Number of random drops");
  flag_to_key("--seed", "experiment.seed", "Base seed (unsigned 64-bit)");
  flag_to_key("--algorithms", "experiment.algorithms", "Comma list of dp,cluster,exhaustive,semi_orthogonal");
  flag_to_key("--csi", "experiment.csi", "Comma list of full,s1,s2,s3,s4");
  flag_to_key("--objective", "experiment.objective", "ewsr, wsr or access");
  flag_to_key("--d2d-links", "network.d2d_links", "Number of D2D links");
  flag_to_key("--bs-power-dbm", "power.bs_dbm", "Base station transmit power");
  flag_to_key("--threads", "experiment.threads", "Worker threads for drops");
  app.add_option("--set", sets, "Any config key as key=value; repeatable");
  app.add_option("--out", out_path, "CSV output path (default: stdout)");
  bool timing = false, summary = false, print_config = false;
  app.add_flag("--timing", timing, "Record solver wall time in runtime_ms");
  app.add_flag("--summary", summary, "Print per-algorithm means to stderr");
  app.add_flag("--print-config", print_config, "Print the effective configuration and exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    d2d::ExperimentConfig config;
    if (!config_path.empty()) config = d2d::load_config(config_path);
    for (const auto& [k, v] : overrides) d2d::apply_setting(config, k, v);
    for (const auto& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw d2d::ConfigError("--set expects key=value, got '" + s + "'");
      d2d::apply_setting(config, s.substr(0, eq), s.substr(eq + 1));
    }
    if (timing) config.timing = true;
    d2d::validate(config);
    if (print_config) {
      std::cout << d2d::to_text(config);
      return 0;
    }

    auto rows = d2d::run_experiment(config);
    if (out_path.empty()) {
      d2d::write_csv(std::cout, rows);
    } else {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) throw d2d::ConfigError("cannot write '" + out_path + "'");
      d2d::write_csv(out, rows);
    }
    if (summary) print_summary(std::cerr, rows);
    bool any = false;
    for (const auto& r : rows) any = any || r.feasible;
    if (!any) {
      std::cerr << "every run was infeasible\n";
      return 3;
    }
  } catch (const d2d::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const d2d::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

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

#include "d2d/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "d2d/assignment.hpp"
#include "d2d/cluster_solver.hpp"
#include "d2d/errors.hpp"

namespace d2d {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!trim(item).empty()) out.push_back(trim(item));
  return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T v{};
  const char* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end) throw ConfigError("bad value '" + text + "' for " + key);
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError("bad value '" + text + "' for " + key);
}

std::string fmt(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

template <class T, class F>
std::string join(const std::vector<T>& items, F name) {
  std::string out;
  for (const T& x : items) out += (out.empty() ? "" : ",") + name(x);
  return out;
}

struct Setting {
  std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

Setting real(double NetworkConfig::*field) {
  return {[field](ExperimentConfig& c, const std::string& k, const std::string& v) {
            c.network.*field = parse_number<double>(k, v);
          },
          [field](const ExperimentConfig& c) { return fmt(c.network.*field, 17); }};
}

Setting count(int NetworkConfig::*field) {
  return {[field](ExperimentConfig& c, const std::string& k, const std::string& v) {
            c.network.*field = parse_number<int>(k, v);
          },
          [field](const ExperimentConfig& c) { return std::to_string(c.network.*field); }};
}

Setting fading(FadingSpec NetworkConfig::*field) {
  return {[field](ExperimentConfig& c, const std::string&, const std::string& v) {
            c.network.*field = parse_fading(v);
          },
          [field](const ExperimentConfig& c) { return to_string(c.network.*field); }};
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;
using Getter = std::function<std::string(const ExperimentConfig&)>;

// Ordered so that to_text output groups related keys.
const std::vector<std::pair<std::string, Setting>>& settings() {
  static const std::vector<std::pair<std::string, Setting>> table = {
      {"network.cell_radius_m", real(&NetworkConfig::cell_radius_m)},
      {"network.group_radius_m", real(&NetworkConfig::group_radius_m)},
      {"network.min_distance_m", real(&NetworkConfig::min_distance_m)},
      {"network.uplink_cellular", count(&NetworkConfig::n_uplink_cellular)},
      {"network.downlink_cellular", count(&NetworkConfig::n_downlink_cellular)},
      {"network.d2d_links", count(&NetworkConfig::n_d2d)},
      {"network.uplink_channels", count(&NetworkConfig::n_uplink_channels)},
      {"network.downlink_channels", count(&NetworkConfig::n_downlink_channels)},
      {"power.cellular_ue_dbm", real(&NetworkConfig::cellular_ue_power_dbm)},
      {"power.d2d_dbm", real(&NetworkConfig::d2d_power_dbm)},
      {"power.bs_dbm", real(&NetworkConfig::bs_power_dbm)},
      {"power.noise_dbm", real(&NetworkConfig::noise_dbm)},
      {"qos.sinr_min_db", real(&NetworkConfig::sinr_min_db)},
      {"qos.succ_prob_min", real(&NetworkConfig::succ_prob_min)},
      {"channel.shadowing_std_db", real(&NetworkConfig::shadowing_std_db)},
      {"fading.cellular", fading(&NetworkConfig::cellular_fading)},
      {"fading.d2d", fading(&NetworkConfig::d2d_fading)},
      {"fading.interference", fading(&NetworkConfig::interference_fading)},
      {"weights.cellular", real(&NetworkConfig::cellular_weight)},
      {"weights.d2d", real(&NetworkConfig::d2d_weight)},
      {"experiment.drops",
       {Setter([](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.drops = parse_number<int>(k, v);
        }),
        Getter([](const ExperimentConfig& c) { return std::to_string(c.drops); })}},
      {"experiment.seed",
       {Setter([](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.base_seed = parse_number<std::uint64_t>(k, v);
        }),
        Getter([](const ExperimentConfig& c) { return std::to_string(c.base_seed); })}},
      {"experiment.algorithms",
       {Setter([](ExperimentConfig& c, const std::string&, const std::string& v) {
          c.algorithms.clear();
          for (const auto& s : split_list(v)) c.algorithms.push_back(parse_algorithm(s));
        }),
        Getter([](const ExperimentConfig& c) {
          return join(c.algorithms, [](Algorithm a) { return to_string(a); });
        })}},
      {"experiment.csi",
       {Setter([](ExperimentConfig& c, const std::string&, const std::string& v) {
          c.csi.clear();
          for (const auto& s : split_list(v)) c.csi.push_back(parse_csi(s));
        }),
        Getter([](const ExperimentConfig& c) { return join(c.csi, [](CsiScenario s) { return to_string(s); }); })}},
      {"experiment.objective",
       {Setter([](ExperimentConfig& c, const std::string&, const std::string& v) { c.objective = parse_utility(v); }),
        Getter([](const ExperimentConfig& c) { return to_string(c.objective); })}},
      {"experiment.threads",
       {Setter([](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.threads = parse_number<int>(k, v);
        }),
        Getter([](const ExperimentConfig& c) { return std::to_string(c.threads); })}},
      {"experiment.timing",
       {Setter([](ExperimentConfig& c, const std::string& k, const std::string& v) { c.timing = parse_bool(k, v); }),
        Getter([](const ExperimentConfig& c) { return std::string(c.timing ? "true" : "false"); })}},
      {"solver.dp_max_links",
       {Setter([](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.solver.dp_max_links = parse_number<int>(k, v);
        }),
        Getter([](const ExperimentConfig& c) { return std::to_string(c.solver.dp_max_links); })}},
      {"solver.exhaustive_max_candidates",
       {Setter([](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.solver.exhaustive_max_candidates = parse_number<double>(k, v);
        }),
        Getter([](const ExperimentConfig& c) { return fmt(c.solver.exhaustive_max_candidates, 17); })}},
      {"solver.series_tolerance",
       {Setter([](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.solver.series.rel_tolerance = parse_number<double>(k, v);
        }),
        Getter([](const ExperimentConfig& c) { return fmt(c.solver.series.rel_tolerance, 17); })}},
      {"solver.series_max_terms",
       {Setter([](ExperimentConfig& c, const std::string& k, const std::string& v) {
          c.solver.series.max_terms = parse_number<int>(k, v);
        }),
        Getter([](const ExperimentConfig& c) { return std::to_string(c.solver.series.max_terms); })}},
  };
  return table;
}

Assignment solve(Algorithm a, const Scenario& s, CsiScenario csi, UtilityKind kind, const SolverOptions& opts) {
  switch (a) {
    case Algorithm::Dp: return solve_dp(s, csi, kind, opts);
    case Algorithm::Cluster: return solve_cluster(s, csi, kind, opts);
    case Algorithm::Exhaustive: return solve_exhaustive(s, csi, kind, opts);
    case Algorithm::SemiOrthogonal: return solve_semi_orthogonal(s, csi, kind, opts);
  }
  throw ArgumentError("unknown algorithm");
}

std::vector<ResultRow> run_drop(const ExperimentConfig& config, int drop) {
  const std::uint64_t seed = drop_seed(config.base_seed, drop);
  const Scenario scenario = generate_scenario(config.network, seed);
  std::vector<ResultRow> rows;
  for (Algorithm alg : config.algorithms) {
    for (CsiScenario csi : config.csi) {
      ResultRow r;
      r.drop_id = drop;
      r.seed = seed;
      r.algorithm = alg;
      r.csi = csi;
      r.objective = config.objective;
      const auto start = std::chrono::steady_clock::now();
      try {
        Assignment a = solve(alg, scenario, csi, config.objective, config.solver);
        const auto elapsed = std::chrono::steady_clock::now() - start;
        auto problems = assignment_violations(scenario, csi, config.objective, a, 1e-9, config.solver.series);
        if (!problems.empty()) {
          std::string msg = "invalid assignment from " + to_string(alg) + " on drop " + std::to_string(drop) +
                            " (" + to_string(csi) + "):";
          for (const auto& p : problems) msg += "\n  " + p;
          throw Error(msg);
        }
        r.feasible = true;
        r.utility = a.value;
        r.n_d2d_uplink = count_active_d2d(scenario, a, Band::Uplink);
        r.n_d2d_downlink = count_active_d2d(scenario, a, Band::Downlink);
        r.n_active_d2d = r.n_d2d_uplink + r.n_d2d_downlink;
        if (config.timing) r.runtime_ms = std::chrono::duration<double, std::milli>(elapsed).count();
      } catch (const InfeasibleError&) {
      } catch (const NumericError&) {
        // A context the statistics could not evaluate to tolerance: treated
        // like an infeasible drop rather than guessing a value.
      }
      rows.push_back(r);
    }
  }
  return rows;
}

}  // namespace

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Dp: return "dp";
    case Algorithm::Cluster: return "cluster";
    case Algorithm::Exhaustive: return "exhaustive";
    case Algorithm::SemiOrthogonal: return "semi_orthogonal";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& text) {
  for (Algorithm a : {Algorithm::Dp, Algorithm::Cluster, Algorithm::Exhaustive, Algorithm::SemiOrthogonal})
    if (to_string(a) == text) return a;
  throw ConfigError("unknown algorithm '" + text + "'");
}

void validate(const ExperimentConfig& c) {
  validate(c.network);
  if (c.drops < 1) throw ConfigError("drops must be >= 1");
  if (c.threads < 1) throw ConfigError("threads must be >= 1");
  if (c.algorithms.empty()) throw ConfigError("no algorithms selected");
  if (c.csi.empty()) throw ConfigError("no CSI scenarios selected");
  auto unique = [](auto v) {
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) == v.end();
  };
  if (!unique(c.algorithms)) throw ConfigError("algorithm listed twice");
  if (!unique(c.csi)) throw ConfigError("CSI scenario listed twice");
  for (CsiScenario csi : c.csi)
    if (!supports(c.objective, csi))
      throw ConfigError("objective " + to_string(c.objective) + " requires full CSI, got " + to_string(csi));
  if (c.solver.dp_max_links < 1 || c.solver.dp_max_links > 30) throw ConfigError("dp_max_links must be in 1..30");
  if (!(c.solver.exhaustive_max_candidates > 0)) throw ConfigError("exhaustive_max_candidates must be positive");
  if (!(c.solver.series.rel_tolerance > 0) || c.solver.series.max_terms < 1)
    throw ConfigError("series tolerance and term limit must be positive");
}

void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value) {
  for (const auto& [name, s] : settings()) {
    if (name == key) {
      s.set(config, key, value);
      return;
    }
  }
  throw ConfigError("unknown key '" + key + "'");
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base) {
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    try {
      apply_setting(base, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return parse_config(in, std::move(base));
}

std::string to_text(const ExperimentConfig& config) {
  std::string out;
  for (const auto& [name, s] : settings()) out += name + " = " + s.get(config) + "\n";
  return out;
}

std::uint64_t drop_seed(std::uint64_t base_seed, int drop_id) {
  std::uint64_t z = base_seed + (static_cast<std::uint64_t>(drop_id) + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config) {
  validate(config);
  std::vector<std::vector<ResultRow>> per_drop(config.drops);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  auto worker = [&] {
    for (int d; (d = next++) < config.drops;) {
      try {
        per_drop[d] = run_drop(config, d);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        next = config.drops;
      }
    }
  };
  const int n_threads = std::min(config.threads, config.drops);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<ResultRow> rows;
  for (auto& d : per_drop) rows.insert(rows.end(), d.begin(), d.end());
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    return std::tie(a.drop_id, a.algorithm, a.csi) < std::tie(b.drop_id, b.algorithm, b.csi);
  });
  return rows;
}

void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << "drop_id,seed,algorithm,csi_scenario,objective,utility,n_active_d2d,n_d2d_uplink,n_d2d_downlink,"
         "feasible,runtime_ms\n";
  for (const ResultRow& r : rows) {
    out << r.drop_id << ',' << r.seed << ',' << to_string(r.algorithm) << ',' << to_string(r.csi) << ','
        << to_string(r.objective) << ',' << fmt(r.utility, 9) << ',' << r.n_active_d2d << ',' << r.n_d2d_uplink
        << ',' << r.n_d2d_downlink << ',' << (r.feasible ? "true" : "false") << ',' << fmt(r.runtime_ms, 9) << '\n';
  }
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow>& rows, const std::vector<GroupField>& group_by,
                                  Metric metric) {
  if (rows.empty()) throw ArgumentError("nothing to summarize");
  auto value = [metric](const ResultRow& r) -> double {
    switch (metric) {
      case Metric::Utility: return r.utility;
      case Metric::ActiveD2d: return r.n_active_d2d;
      case Metric::D2dUplink: return r.n_d2d_uplink;
      case Metric::D2dDownlink: return r.n_d2d_downlink;
    }
    return 0.0;
  };
  std::vector<SummaryRow> out;
  std::vector<std::vector<double>> samples;
  std::map<std::vector<std::string>, size_t> index;
  for (const ResultRow& r : rows) {
    std::vector<std::string> key;
    for (GroupField f : group_by) {
      switch (f) {
        case GroupField::Algorithm: key.push_back(to_string(r.algorithm)); break;
        case GroupField::Csi: key.push_back(to_string(r.csi)); break;
        case GroupField::Objective: key.push_back(to_string(r.objective)); break;
      }
    }
    auto [it, fresh] = index.emplace(key, out.size());
    if (fresh) {
      out.push_back({key, 0, 0.0, 0.0});
      samples.emplace_back();
    }
    samples[it->second].push_back(value(r));
  }
  for (size_t g = 0; g < out.size(); ++g) {
    const auto& x = samples[g];
    const double n = static_cast<double>(x.size());
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    out[g].count = static_cast<int>(x.size());
    out[g].mean = mean;
    out[g].std_error = x.size() > 1 ? std::sqrt(ss / (n - 1) / n) : 0.0;
  }
  return out;
}

}  // namespace d2d

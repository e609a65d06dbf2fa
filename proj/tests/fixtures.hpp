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
#include <vector>

#include "d2d/model.hpp"

namespace d2d::testing {

// Hand-built scenario: unit fading on every channel unless given, Rayleigh
// everywhere, sinr_min 1 (0 dB) and the given QoS floor.
inline Scenario make_scenario(const std::vector<LinkKind>& kinds, int m_u, int m_d, const Eigen::MatrixXd& lam,
                              double succ_prob_min = 0.9, std::vector<Eigen::MatrixXd> beta = {}) {
  Scenario s;
  const int n = static_cast<int>(kinds.size());
  for (int j = 0; j < n; ++j) {
    Link l;
    l.id = j;
    l.kind = kinds[j];
    l.succ_prob_min = succ_prob_min;
    s.links.push_back(l);
  }
  for (int i = 0; i < m_u + m_d; ++i) s.channels.push_back({i, i < m_u ? Band::Uplink : Band::Downlink});
  s.large_scale = lam;
  if (beta.empty()) beta.assign(m_u + m_d, Eigen::MatrixXd::Ones(n, n));
  s.small_scale = beta;
  s.nakagami_m = Eigen::MatrixXd::Ones(n, n);
  s.signal_fading.assign(n, FadingSpec::rayleigh());
  s.noise_power = 1.0;
  return s;
}

// A compact cell where sharing is common but not universal.
inline NetworkConfig small_config(int m_u, int m_d, int n_uc, int n_dc, int n_d) {
  NetworkConfig c;
  c.cell_radius_m = 200.0;
  c.group_radius_m = 30.0;
  c.n_uplink_channels = m_u;
  c.n_downlink_channels = m_d;
  c.n_uplink_cellular = n_uc;
  c.n_downlink_cellular = n_dc;
  c.n_d2d = n_d;
  return c;
}

// Random tiny instance: M_u, M_d in {1,2}, at most 3 cellular, at most 4 D2D;
// odd seeds relax the QoS floor to 0.9.
inline Scenario random_small_scenario(std::uint64_t seed) {
  std::uint64_t x = seed * 0x9E3779B97F4A7C15ULL + 12345;
  auto next = [&](int mod) {
    x ^= x >> 31;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 29;
    return static_cast<int>(x % static_cast<std::uint64_t>(mod));
  };
  const int m_u = 1 + next(2), m_d = 1 + next(2);
  int n_uc = next(m_u + 1), n_dc = next(m_d + 1);
  while (n_uc + n_dc > 3) n_dc > 0 ? --n_dc : --n_uc;
  const int n_d = next(5);
  NetworkConfig c = small_config(m_u, m_d, n_uc, n_dc, n_d);
  if (seed % 2) c.succ_prob_min = 0.9;
  return generate_scenario(c, seed);
}

}  // namespace d2d::testing

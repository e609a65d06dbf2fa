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

#include "d2d/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "d2d/errors.hpp"
#include "d2d/special_fns.hpp"

namespace d2d {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double dbm_to_mw(double dbm) { return db_to_linear(dbm); }

double pathloss_db(const PathlossModel& model, double distance_km) {
  if (!(distance_km > 0.0)) throw DomainError("path loss needs a positive distance");
  return model.constant_db + model.exponent_coeff_db * std::log10(distance_km);
}

// ---------------------------------------------------------------------------
// Fading

void validate(const FadingSpec& spec) {
  if (spec.kind == FadingSpec::Kind::Nakagami && !(spec.param >= 0.5))
    throw ConfigError("Nakagami shape must be >= 0.5");
  if (spec.kind == FadingSpec::Kind::Ricean && !(spec.param >= 0.0))
    throw ConfigError("Ricean K-factor must be >= 0");
}

namespace {

// I0(z) e^{-z}
double bessel_i0_scaled(double z) {
  if (z < 500.0) return std::cyl_bessel_i(0.0, z) * std::exp(-z);
  return (1.0 + 1.0 / (8.0 * z) + 9.0 / (128.0 * z * z)) / std::sqrt(2.0 * std::numbers::pi * z);
}

}  // namespace

double fading_pdf(const FadingSpec& spec, double x) {
  if (x < 0.0) return 0.0;
  if (spec.kind == FadingSpec::Kind::Nakagami) {
    const double m = spec.param;
    if (x == 0.0) return m == 1.0 ? 1.0 : (m < 1.0 ? kInf : 0.0);
    return std::exp(m * std::log(m) + (m - 1.0) * std::log(x) - m * x - std::lgamma(m));
  }
  const double k = spec.param;
  const double z = 2.0 * std::sqrt(k * (k + 1.0) * x);
  return (k + 1.0) * std::exp(-k - (k + 1.0) * x + z) * bessel_i0_scaled(z);
}

double fading_ccdf(const FadingSpec& spec, double x) {
  if (x <= 0.0) return 1.0;
  if (spec.kind == FadingSpec::Kind::Nakagami) return special::gamma_q(spec.param, spec.param * x);
  if (spec.param == 0.0) return std::exp(-x);
  return std::clamp(special::integrate([&](double t) { return fading_pdf(spec, t); }, x, kInf), 0.0, 1.0);
}

double sample_fading(const FadingSpec& spec, std::mt19937_64& rng) {
  if (spec.kind == FadingSpec::Kind::Nakagami) {
    if (spec.param == 1.0) return std::exponential_distribution<double>(1.0)(rng);
    return std::gamma_distribution<double>(spec.param, 1.0 / spec.param)(rng);
  }
  const double k = spec.param;
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5 / (k + 1.0)));
  const double re = std::sqrt(k / (k + 1.0)) + gauss(rng);
  const double im = gauss(rng);
  return re * re + im * im;
}

std::string to_string(const FadingSpec& spec) {
  if (spec.is_rayleigh()) return "rayleigh";
  std::ostringstream os;
  os.precision(17);
  os << (spec.kind == FadingSpec::Kind::Nakagami ? "nakagami:" : "ricean:") << spec.param;
  return os.str();
}

FadingSpec parse_fading(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  FadingSpec spec;
  try {
    if (name == "rayleigh" && arg.empty()) {
      spec = FadingSpec::rayleigh();
    } else if (name == "nakagami" && !arg.empty()) {
      spec = FadingSpec::nakagami(std::stod(arg));
    } else if (name == "ricean" && !arg.empty()) {
      std::size_t used = 0;
      double value = std::stod(arg, &used);
      const std::string unit = arg.substr(used);
      if (unit == "dB" || unit == "db") {
        value = db_to_linear(value);
      } else if (!unit.empty()) {
        throw ConfigError("bad Ricean unit '" + unit + "'");
      }
      spec = FadingSpec::ricean(value);
    } else {
      throw ConfigError("unknown fading spec '" + text + "'");
    }
  } catch (const std::logic_error&) {
    throw ConfigError("unparsable fading spec '" + text + "'");
  }
  validate(spec);
  return spec;
}

// ---------------------------------------------------------------------------
// CSI visibility

CsiVisibility expand(CsiScenario csi) {
  switch (csi) {
    case CsiScenario::Full: return {true, true, true, true, true};
    case CsiScenario::S1: return {true, true, false, true, true};
    case CsiScenario::S2: return {true, false, false, true, true};
    case CsiScenario::S3: return {true, true, false, false, true};
    case CsiScenario::S4: return {true, true, false, false, false};
  }
  throw ArgumentError("unknown CSI scenario");
}

std::string to_string(CsiScenario csi) {
  switch (csi) {
    case CsiScenario::Full: return "full";
    case CsiScenario::S1: return "s1";
    case CsiScenario::S2: return "s2";
    case CsiScenario::S3: return "s3";
    case CsiScenario::S4: return "s4";
  }
  return "?";
}

CsiScenario parse_csi(const std::string& text) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  for (CsiScenario c : kAllCsi)
    if (to_string(c) == t) return c;
  throw ConfigError("unknown CSI scenario '" + text + "'");
}

GainClass classify_gain(LinkKind interferer, LinkKind receiver, bool same_link) {
  if (same_link) return is_cellular(receiver) ? GainClass::CellularSignal : GainClass::D2dSignal;
  if (is_cellular(interferer) && is_cellular(receiver)) return GainClass::CellularToCellular;
  if (receiver == LinkKind::D2D) {
    // Uplink cellular transmitters are user devices.
    return interferer == LinkKind::DownlinkCellular ? GainClass::BsToD2dRx : GainClass::BetweenDevices;
  }
  // interferer is D2D from here on
  return receiver == LinkKind::UplinkCellular ? GainClass::D2dTxToBs : GainClass::BetweenDevices;
}

bool is_visible(const CsiVisibility& vis, GainClass cls) {
  switch (cls) {
    case GainClass::CellularSignal: return vis.knows_cellular_links;
    case GainClass::D2dSignal: return vis.knows_d2d_links;
    case GainClass::BetweenDevices: return vis.knows_device_to_device_interference;
    case GainClass::BsToD2dRx: return vis.knows_bs_to_d2drx_interference;
    case GainClass::D2dTxToBs: return vis.knows_d2dtx_to_bs_interference;
    case GainClass::CellularToCellular: return true;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Scenario

int Scenario::count(LinkKind kind) const {
  return static_cast<int>(std::count_if(links.begin(), links.end(), [kind](const Link& l) { return l.kind == kind; }));
}

int Scenario::count(Band band) const {
  return static_cast<int>(
      std::count_if(channels.begin(), channels.end(), [band](const Channel& c) { return c.band == band; }));
}

bool Scenario::band_allows(LinkKind kind, Band band) {
  switch (kind) {
    case LinkKind::UplinkCellular: return band == Band::Uplink;
    case LinkKind::DownlinkCellular: return band == Band::Downlink;
    case LinkKind::D2D: return true;
  }
  return false;
}

void validate(const NetworkConfig& c) {
  if (c.n_uplink_cellular < 0 || c.n_downlink_cellular < 0 || c.n_d2d < 0 || c.n_uplink_channels < 0 ||
      c.n_downlink_channels < 0)
    throw ConfigError("link and channel counts must be non-negative");
  if (c.n_uplink_channels + c.n_downlink_channels < 1) throw ConfigError("at least one channel is required");
  if (c.n_uplink_cellular > c.n_uplink_channels)
    throw ConfigError("more uplink cellular links than uplink channels");
  if (c.n_downlink_cellular > c.n_downlink_channels)
    throw ConfigError("more downlink cellular links than downlink channels");
  if (!(c.cell_radius_m > 0.0) || !(c.group_radius_m > 0.0)) throw ConfigError("radii must be positive");
  if (!(c.min_distance_m > 0.0)) throw ConfigError("min_distance_m must be positive");
  if (!(c.succ_prob_min > 0.0 && c.succ_prob_min <= 1.0)) throw ConfigError("succ_prob_min must be in (0, 1]");
  if (!(c.shadowing_std_db >= 0.0)) throw ConfigError("shadowing std must be >= 0");
  if (!(c.cellular_weight >= 0.0) || !(c.d2d_weight >= 0.0)) throw ConfigError("weights must be >= 0");
  for (double v : {c.cellular_ue_power_dbm, c.d2d_power_dbm, c.bs_power_dbm, c.noise_dbm, c.sinr_min_db})
    if (!std::isfinite(v)) throw ConfigError("powers and thresholds must be finite");
  validate(c.cellular_fading);
  validate(c.d2d_fading);
  validate(c.interference_fading);
  if (c.interference_fading.kind != FadingSpec::Kind::Nakagami)
    throw ConfigError("interference fading must be Nakagami");
}

namespace {

Point uniform_in_disc(const Point& center, double radius, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = radius * std::sqrt(u(rng));
  const double phi = 2.0 * std::numbers::pi * u(rng);
  return center + r * Point(std::cos(phi), std::sin(phi));
}

}  // namespace

Scenario generate_scenario(const NetworkConfig& config, std::uint64_t seed) {
  validate(config);
  std::mt19937_64 rng(seed);

  Scenario s;
  s.rng_seed = seed;
  s.bs_position = Point::Zero();
  s.noise_power = dbm_to_mw(config.noise_dbm);

  const int m_u = config.n_uplink_channels;
  const int m_d = config.n_downlink_channels;
  for (int i = 0; i < m_u + m_d; ++i) s.channels.push_back({i, i < m_u ? Band::Uplink : Band::Downlink});

  // Equal split of the BS power across downlink channels.
  const double bs_channel_dbm = m_d > 0 ? config.bs_power_dbm - 10.0 * std::log10(m_d) : config.bs_power_dbm;
  const double sinr_min = db_to_linear(config.sinr_min_db);
  const double radius_m = config.cell_radius_m;

  auto add_link = [&](LinkKind kind, Point tx, Point rx, double power_dbm, double weight) {
    Link l;
    l.id = static_cast<int>(s.links.size());
    l.kind = kind;
    l.tx_position = tx;
    l.rx_position = rx;
    l.tx_power_dbm = power_dbm;
    l.weight = weight;
    l.sinr_min = sinr_min;
    l.succ_prob_min = config.succ_prob_min;
    s.links.push_back(l);
  };

  for (int k = 0; k < config.n_uplink_cellular; ++k)
    add_link(LinkKind::UplinkCellular, uniform_in_disc(s.bs_position, radius_m, rng), s.bs_position,
             config.cellular_ue_power_dbm, config.cellular_weight);
  for (int k = 0; k < config.n_downlink_cellular; ++k)
    add_link(LinkKind::DownlinkCellular, s.bs_position, uniform_in_disc(s.bs_position, radius_m, rng),
             bs_channel_dbm, config.cellular_weight);
  for (int k = 0; k < config.n_d2d; ++k) {
    const Point center = uniform_in_disc(s.bs_position, radius_m, rng);
    const Point tx = uniform_in_disc(center, config.group_radius_m, rng);
    const Point rx = uniform_in_disc(center, config.group_radius_m, rng);
    add_link(LinkKind::D2D, tx, rx, config.d2d_power_dbm, config.d2d_weight);
  }

  const int n = s.n_links();

  std::normal_distribution<double> shadow(0.0, config.shadowing_std_db);
  s.large_scale.resize(n, n);
  for (int z = 0; z < n; ++z) {
    for (int j = 0; j < n; ++j) {
      const Point& tx = s.links[z].tx_position;
      const Point& rx = s.links[j].rx_position;
      const bool via_bs =
          s.links[z].kind == LinkKind::DownlinkCellular || s.links[j].kind == LinkKind::UplinkCellular;
      const double d_km = std::max((tx - rx).norm(), config.min_distance_m) / 1000.0;
      const double pl = pathloss_db(via_bs ? PathlossModel::cellular() : PathlossModel::d2d(), d_km);
      const double shadow_db = config.shadowing_std_db > 0.0 ? shadow(rng) : 0.0;
      s.large_scale(z, j) = dbm_to_mw(s.links[z].tx_power_dbm - pl + shadow_db);
    }
  }

  s.nakagami_m = Eigen::MatrixXd::Constant(n, n, config.interference_fading.param);
  s.signal_fading.resize(n);
  for (int j = 0; j < n; ++j) {
    s.signal_fading[j] = s.cellular(j) ? config.cellular_fading : config.d2d_fading;
    s.nakagami_m(j, j) = 0.0;  // unused: the signal uses signal_fading
  }

  const FadingSpec interference = config.interference_fading;
  s.small_scale.assign(s.n_channels(), Eigen::MatrixXd(n, n));
  for (int i = 0; i < s.n_channels(); ++i)
    for (int z = 0; z < n; ++z)
      for (int j = 0; j < n; ++j)
        s.small_scale[i](z, j) = sample_fading(z == j ? s.signal_fading[j] : interference, rng);
  return s;
}

bool signal_known(const Scenario& scenario, CsiScenario csi, int link) {
  const LinkKind k = scenario.links[link].kind;
  return is_visible(expand(csi), classify_gain(k, k, true));
}

std::vector<int> unknown_interferers(const Scenario& scenario, CsiScenario csi, int /*channel*/, int link,
                                     std::span<const int> coexisting) {
  const CsiVisibility vis = expand(csi);
  std::vector<int> out;
  for (int z : coexisting) {
    if (z == link) continue;
    const GainClass cls = classify_gain(scenario.links[z].kind, scenario.links[link].kind, false);
    if (!is_visible(vis, cls)) out.push_back(z);
  }
  return out;
}

}  // namespace d2d

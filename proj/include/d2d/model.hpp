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
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace d2d {

// Network model: links, channels, gain tables and CSI visibility.
//
// Link indices follow the ordering uplink cellular, downlink cellular, D2D.
// Channel indices put the uplink band first. All power quantities are linear
// milliwatts; dB and dBm appear only in configuration.

using Point = Eigen::Vector2d;

enum class LinkKind { UplinkCellular, DownlinkCellular, D2D };
enum class Band { Uplink, Downlink };

inline bool is_cellular(LinkKind k) { return k != LinkKind::D2D; }

struct Link {
  int id = 0;
  LinkKind kind = LinkKind::D2D;
  Point tx_position = Point::Zero();
  Point rx_position = Point::Zero();
  double tx_power_dbm = 0.0;
  double weight = 1.0;
  double sinr_min = 1.0;       // linear
  double succ_prob_min = 0.99;
};

struct Channel {
  int id = 0;
  Band band = Band::Uplink;
};

/// Log-distance path loss: constant + exponent_coeff * log10(d [km]).
struct PathlossModel {
  double constant_db = 128.1;
  double exponent_coeff_db = 37.6;

  static PathlossModel cellular() { return {128.1, 37.6}; }
  static PathlossModel d2d() { return {148.0, 40.0}; }
};

double pathloss_db(const PathlossModel& model, double distance_km);

/// Small-scale power fading with unit mean. Rayleigh is Nakagami(1).
struct FadingSpec {
  enum class Kind { Nakagami, Ricean };
  Kind kind = Kind::Nakagami;
  double param = 1.0;  // Nakagami shape m, or Ricean K-factor (linear)

  static FadingSpec rayleigh() { return {Kind::Nakagami, 1.0}; }
  static FadingSpec nakagami(double m) { return {Kind::Nakagami, m}; }
  static FadingSpec ricean(double k_linear) { return {Kind::Ricean, k_linear}; }

  bool is_rayleigh() const { return kind == Kind::Nakagami && param == 1.0; }
  bool operator==(const FadingSpec&) const = default;
};

void validate(const FadingSpec& spec);
double fading_pdf(const FadingSpec& spec, double x);
/// Pr[beta > x].
double fading_ccdf(const FadingSpec& spec, double x);
double sample_fading(const FadingSpec& spec, std::mt19937_64& rng);
std::string to_string(const FadingSpec& spec);
/// Parses "rayleigh", "nakagami:<m>", "ricean:<K dB>dB" or "ricean:<K linear>".
FadingSpec parse_fading(const std::string& text);

enum class CsiScenario { Full, S1, S2, S3, S4 };

/// Which small-scale gains the base station can acquire.
struct CsiVisibility {
  bool knows_cellular_links = true;
  bool knows_d2d_links = true;
  bool knows_device_to_device_interference = true;
  bool knows_bs_to_d2drx_interference = true;
  bool knows_d2dtx_to_bs_interference = true;
  bool operator==(const CsiVisibility&) const = default;
};

CsiVisibility expand(CsiScenario csi);
std::string to_string(CsiScenario csi);
CsiScenario parse_csi(const std::string& text);
inline constexpr CsiScenario kAllCsi[] = {CsiScenario::Full, CsiScenario::S1, CsiScenario::S2,
                                          CsiScenario::S3, CsiScenario::S4};

/// Link-class taxonomy used to look up visibility of one gain.
enum class GainClass {
  CellularSignal,
  D2dSignal,
  BetweenDevices,  // any device transmitter into a device receiver
  BsToD2dRx,
  D2dTxToBs,
  CellularToCellular,  // never co-channel
};

GainClass classify_gain(LinkKind interferer, LinkKind receiver, bool same_link);
bool is_visible(const CsiVisibility& vis, GainClass cls);

/// Physical parameters of one cell. Defaults reproduce the reference
/// simulation setup.
struct NetworkConfig {
  double cell_radius_m = 500.0;
  double group_radius_m = 60.0;
  int n_uplink_cellular = 4;
  int n_downlink_cellular = 4;
  int n_d2d = 8;
  int n_uplink_channels = 4;
  int n_downlink_channels = 4;
  double cellular_ue_power_dbm = 24.0;
  double d2d_power_dbm = 24.0;
  double bs_power_dbm = 46.0;
  double noise_dbm = -114.0;
  double sinr_min_db = 0.0;
  double succ_prob_min = 0.99;
  double shadowing_std_db = 8.0;
  double min_distance_m = 1.0;
  FadingSpec cellular_fading = FadingSpec::rayleigh();
  FadingSpec d2d_fading = FadingSpec::rayleigh();
  FadingSpec interference_fading = FadingSpec::rayleigh();  // must be Nakagami
  double cellular_weight = 1.0;
  double d2d_weight = 1.0;
};

void validate(const NetworkConfig& config);

struct Scenario {
  std::vector<Link> links;
  std::vector<Channel> channels;
  Point bs_position = Point::Zero();
  Eigen::MatrixXd large_scale;               // (z, j): power x path loss x shadowing, mW
  std::vector<Eigen::MatrixXd> small_scale;  // [channel](z, j), unit-mean fading
  Eigen::MatrixXd nakagami_m;                // (z, j) interference fading shape
  std::vector<FadingSpec> signal_fading;     // per receiving link
  double noise_power = 0.0;                  // mW
  std::uint64_t rng_seed = 0;

  int n_links() const { return static_cast<int>(links.size()); }
  int n_channels() const { return static_cast<int>(channels.size()); }
  int count(LinkKind kind) const;
  int count(Band band) const;
  bool cellular(int link) const { return is_cellular(links[link].kind); }
  /// Band a cellular link must use; D2D links may use either.
  static bool band_allows(LinkKind kind, Band band);
};

/// Draws a drop: users, D2D groups, shadowing and per-channel fading. A pure
/// function of (config, seed).
Scenario generate_scenario(const NetworkConfig& config, std::uint64_t seed);

/// Co-channel transmitters whose small-scale gain towards `link` is hidden
/// from the base station under `csi`.
std::vector<int> unknown_interferers(const Scenario& scenario, CsiScenario csi, int channel,
                                     int link, std::span<const int> coexisting);

bool signal_known(const Scenario& scenario, CsiScenario csi, int link);

double db_to_linear(double db);
double dbm_to_mw(double dbm);

}  // namespace d2d

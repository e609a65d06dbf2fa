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
#include <optional>
#include <span>
#include <vector>

#include "d2d/model.hpp"
#include "d2d/special_fns.hpp"

namespace d2d {

// Outage and expected-rate statistics of one link on one channel.
//
// SINR = signal_scale * beta / (nu + Y), Y = sum_z scale_z * G_z with
// G_z ~ Gamma(shape_z, 1 / shape_z). nu holds the noise plus every
// interference term whose fading the base station knows.

struct Interferer {
  double scale = 1.0;  // mean received power
  double shape = 1.0;  // Nakagami m
};

struct InterferenceContext {
  double nu = 1.0;
  double signal_scale = 1.0;
  std::optional<double> signal_beta;  // set iff the signal fading is known
  FadingSpec signal_fading = FadingSpec::rayleigh();
  std::vector<Interferer> unknown_interferers;
  double sinr_min = 1.0;  // linear
};

void validate(const InterferenceContext& ctx);

struct LinkStats {
  double success_prob = 0.0;
  double expected_rate = 0.0;  // bits/s/Hz, already multiplied by success_prob
};

/// Evaluation route. Auto picks the Rayleigh closed forms where they apply,
/// an exact partial-fraction expansion for integer shapes whose scales are
/// too spread for the series to converge quickly, and the gamma-sum series
/// otherwise. When neither expansion suits, part of the hidden interference
/// is conditioned on and averaged out by quadrature. Series forces the series
/// even when another form exists.
enum class StatsMethod { Auto, Series };

enum class StatsRoute {
  Deterministic,       // no hidden interferers, signal known
  SignalTail,          // no hidden interferers, signal unknown
  ExpMixtureKnown,     // Rayleigh interferers, distinct scales, signal known
  ExpMixtureUnknown,   // same with unknown Rayleigh signal
  ExpMixtureQuadrature,  // Rayleigh interferers, unknown non-Rayleigh signal
  PartialFractionsKnown,
  PartialFractionsUnknown,
  ConditionedKnown,    // one group of hidden interferers folded into nu
  ConditionedUnknown,
  SeriesKnown,
  SeriesUnknown,
};

StatsRoute select_route(const InterferenceContext& ctx, StatsMethod method = StatsMethod::Auto);

/// True when every pair of scales differs by more than 1e-9 relative.
bool scales_distinct(std::span<const Interferer> interferers);

/// Density of Y via the Moschopoulos single-gamma series.
double gamma_sum_pdf(std::span<const Interferer> interferers, double y, const SeriesControl& ctrl = {});
double gamma_sum_cdf(std::span<const Interferer> interferers, double y, const SeriesControl& ctrl = {});

/// Density of a sum of independent exponentials with pairwise distinct means.
/// Throws DomainError when two means coincide to 1e-9 relative.
double exp_mixture_pdf(std::span<const double> scales, double y);

double success_probability(const InterferenceContext& ctx, const SeriesControl& ctrl = {},
                           StatsMethod method = StatsMethod::Auto);
double expected_rate(const InterferenceContext& ctx, const SeriesControl& ctrl = {},
                     StatsMethod method = StatsMethod::Auto);
LinkStats link_stats(const InterferenceContext& ctx, const SeriesControl& ctrl = {},
                     StatsMethod method = StatsMethod::Auto);

/// mu_k = int ln(1 + S / (nu + y)) y^k e^{-theta y} dy over [0, eta] with
/// theta = max_z shape_z / scale_z, evaluated by the integer-shape
/// recurrence. For an unknown signal the recurrence is averaged over the
/// signal fading. Throws UnsupportedError for non-integer shapes.
double mu_recurrence(int k, const InterferenceContext& ctx, const SeriesControl& ctrl = {});

/// Rate parameter theta used by the series and by mu_recurrence.
double series_theta(std::span<const Interferer> interferers);

struct McEstimate {
  LinkStats mean;
  double success_prob_se = 0.0;
  double expected_rate_se = 0.0;
  std::int64_t samples = 0;
};

/// Plain Monte Carlo over the signal (when unknown) and hidden interferer
/// fading. Deterministic for a given seed.
McEstimate mc_oracle(const InterferenceContext& ctx, std::int64_t n, std::uint64_t seed);

}  // namespace d2d

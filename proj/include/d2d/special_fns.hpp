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

#include <functional>
#include <limits>

namespace d2d {

// Truncation control for the gamma-sum series.
struct SeriesControl {
  double rel_tolerance = 1e-12;
  int max_terms = 2000;
};

struct QuadratureControl {
  double abs_tolerance = 1e-13;
  double rel_tolerance = 1e-10;
  int max_subdivisions = 4000;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

namespace special {

/// Exponential integral Ei(x) (Cauchy principal value). Ei(x) = -E1(-x) for
/// x < 0. Throws DomainError at x = 0.
double exp_integral_ei(double x);

/// E1(x) = int_x^inf e^{-t}/t dt for x > 0.
double exp_integral_e1(double x);

/// e^x E1(x); finite for every x > 0 where E1 alone underflows.
double scaled_e1(double x);

/// gamma(s, x) = int_0^x t^{s-1} e^{-t} dt.
double lower_incomplete_gamma(double s, double x);

/// Regularized P(s, x) = gamma(s, x) / Gamma(s).
double gamma_p(double s, double x);

/// Regularized Q(s, x) = 1 - P(s, x), computed without cancellation.
double gamma_q(double s, double x);

/// Gamma(-k, x) = int_x^inf t^{-k-1} e^{-t} dt for integer k >= 0, x > 0.
double upper_incomplete_gamma_nonpos(int k, double x);

/// x^k e^x Gamma(-k, x). Bounded by 1/k for k >= 1, so it stays finite where
/// Gamma(-k, x) over- or underflows.
double scaled_upper_gamma_nonpos(int k, double x);

/// Adaptive Gauss-Kronrod (7/15) quadrature of f over [a, b]. b may be +inf,
/// in which case x = a + t / (1 - t) maps the range onto [0, 1). Throws
/// NumericError (carrying the partial estimate) when max_subdivisions is
/// exhausted before the tolerance is met.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureControl& ctrl = {});

}  // namespace special
}  // namespace d2d

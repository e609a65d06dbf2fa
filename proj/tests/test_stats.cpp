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

#include <boost/math/distributions/gamma.hpp>
#include <cmath>
#include <random>
#include <set>

#include "d2d/errors.hpp"
#include "d2d/stats.hpp"
#include "doctest.h"

using namespace d2d;

namespace {

double gamma_term_pdf(const Interferer& z, double y) {
  return boost::math::pdf(boost::math::gamma_distribution<double>(z.shape, z.scale / z.shape), y);
}

double gamma_term_cdf(const Interferer& z, double y) {
  return boost::math::cdf(boost::math::gamma_distribution<double>(z.shape, z.scale / z.shape), y);
}

// Density of the sum of two gamma terms by direct convolution.
double convolved_pdf(const Interferer& a, const Interferer& b, double y) {
  if (y == 0.0) return 0.0;
  return special::integrate([&](double t) { return gamma_term_pdf(a, t) * gamma_term_pdf(b, y - t); }, 0.0, y,
                            QuadratureControl{0.0, 1e-11, 8000});
}

// Pr[SINR > s] for a Rayleigh signal of unknown gain: the hidden interference
// enters through its moment generating function.
double tail_unknown_rayleigh(const InterferenceContext& c, double s) {
  double v = std::exp(-s * c.nu / c.signal_scale);
  for (const auto& z : c.unknown_interferers) v *= std::pow(1.0 + s * z.scale / (z.shape * c.signal_scale), -z.shape);
  return v;
}

// Expected rate (bits) from the tail: log2(1+xi) p + int_xi^inf Pr[SINR>s]/(1+s) ds / ln 2.
template <class Tail>
double rate_from_tail(Tail tail, double xi) {
  double integral = special::integrate([&](double s) { return tail(s) / (1.0 + s); }, xi, kInf,
                                       QuadratureControl{1e-15, 1e-11, 8000});
  return std::log2(1.0 + xi) * tail(xi) + integral / std::log(2.0);
}

InterferenceContext cor2_example() {
  InterferenceContext c;
  c.nu = 1.0;
  c.signal_scale = 2.0;
  c.sinr_min = 1.0;
  c.unknown_interferers = {{1.0, 1.0}};
  return c;
}

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("gamma-sum density reference values") {
  std::vector<Interferer> one = {{1.0, 1.0}};
  CHECK(gamma_sum_pdf(one, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
  std::vector<Interferer> two = {{2.0, 1.0}, {1.0, 1.0}};
  double ref = std::exp(-0.5) - std::exp(-1.0);
  CHECK(gamma_sum_pdf(two, 1.0) == doctest::Approx(ref).epsilon(1e-12));
  CHECK(ref == doctest::Approx(0.23865).epsilon(1e-5));
  std::vector<double> scales = {2.0, 1.0};
  CHECK(exp_mixture_pdf(scales, 1.0) == doctest::Approx(ref).epsilon(1e-13));
  std::vector<double> unit = {1.0};
  CHECK(exp_mixture_pdf(unit, 0.0) == 1.0);
  CHECK_THROWS_AS(gamma_sum_pdf(std::vector<Interferer>{}, 1.0), ArgumentError);
  std::vector<double> repeated = {1.0, 1.0 + 1e-12};
  CHECK_THROWS_AS(exp_mixture_pdf(repeated, 1.0), DomainError);
}

TEST_CASE("gamma-sum density against direct convolution") {
  const Interferer cases[][2] = {{{1.0, 2.0}, {3.0, 1.0}},
                                 {{0.5, 3.0}, {2.0, 2.0}},
                                 {{1.0, 1.0}, {1.0, 1.0}},
                                 {{4.0, 0.5}, {1.0, 1.5}},
                                 {{10.0, 2.0}, {1.0, 4.0}}};
  for (const auto& pair : cases) {
    std::vector<Interferer> xs = {pair[0], pair[1]};
    for (double y : {0.05, 0.4, 1.0, 2.5, 7.0, 20.0}) {
      CAPTURE(y);
      double ref = convolved_pdf(pair[0], pair[1], y);
      CHECK(std::abs(gamma_sum_pdf(xs, y) - ref) <= 1e-10 + 1e-8 * ref);
    }
  }
  std::vector<Interferer> single = {{3.0, 2.5}};
  for (double y : {0.1, 1.0, 9.0}) CHECK(rel_err(gamma_sum_pdf(single, y), gamma_term_pdf(single[0], y)) < 1e-12);
  for (double y : {0.1, 1.0, 9.0}) CHECK(rel_err(gamma_sum_cdf(single, y), gamma_term_cdf(single[0], y)) < 1e-12);
}

TEST_CASE("gamma-sum density integrates to one") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> scale(0.3, 3.0);
  std::uniform_int_distribution<int> shape(1, 4), count(1, 5);
  for (int t = 0; t < 20; ++t) {
    std::vector<Interferer> xs(count(rng));
    for (auto& z : xs) z = {scale(rng), t % 2 ? shape(rng) : shape(rng) - 0.5};
    double total = special::integrate([&](double y) { return gamma_sum_pdf(xs, y); }, 0.0, kInf,
                                      QuadratureControl{1e-12, 1e-9, 8000});
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("exponential mixture equals the gamma-sum series") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> scale(0.2, 4.0);
  for (int t = 0; t < 30; ++t) {
    std::vector<double> s(1 + t % 6);
    for (auto& v : s) v = scale(rng);
    std::vector<Interferer> xs;
    for (double v : s) xs.push_back({v, 1.0});
    double total = special::integrate([&](double y) { return exp_mixture_pdf(s, y); }, 0.0, kInf);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
    for (double y = 0.0; y <= 20.0; y += 0.25) {
      double a = exp_mixture_pdf(s, y), b = gamma_sum_pdf(xs, y);
      CHECK(a >= 0.0);
      CHECK(std::abs(a - b) <= 1e-6 * b + 1e-300);
    }
  }
}

TEST_CASE("success probability reference values") {
  InterferenceContext c;
  c.nu = 1.0;
  c.signal_scale = 2.0;
  c.signal_beta = 1.0;
  c.sinr_min = 1.0;
  CHECK(success_probability(c) == 1.0);

  c.signal_beta.reset();
  CHECK(success_probability(c) == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));

  c = cor2_example();
  CHECK(select_route(c) == StatsRoute::ExpMixtureUnknown);
  CHECK(success_probability(c) == doctest::Approx(std::exp(-0.5) * 2.0 / 3.0).epsilon(1e-13));
  CHECK(success_probability(c, {}, StatsMethod::Series) == doctest::Approx(std::exp(-0.5) * 2.0 / 3.0).epsilon(1e-9));

  c.signal_beta = 1.0;
  CHECK(select_route(c) == StatsRoute::ExpMixtureKnown);
  CHECK(success_probability(c) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-13));
  CHECK(success_probability(c, {}, StatsMethod::Series) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("expected rate reference values") {
  InterferenceContext c;
  c.nu = 1.0;
  c.signal_scale = 1.0;
  c.signal_beta = 1.0;
  c.sinr_min = 1.0;
  CHECK(expected_rate(c) == doctest::Approx(1.0).epsilon(1e-15));
  c.signal_beta = 0.5;
  CHECK(expected_rate(c) == 0.0);
  CHECK(success_probability(c) == 0.0);

  // Signal tail only: int_xi^inf log2(1 + lam x / nu) e^{-x} dx.
  c.signal_beta.reset();
  c.signal_scale = 3.0;
  double ref = special::integrate([](double x) { return std::log2(1.0 + 3.0 * x) * std::exp(-x); }, 1.0 / 3.0, kInf);
  CHECK(expected_rate(c) == doctest::Approx(ref).epsilon(1e-11));
  c.signal_fading = FadingSpec::nakagami(2.0);
  ref = special::integrate([](double x) { return std::log2(1.0 + 3.0 * x) * 4.0 * x * std::exp(-2.0 * x); },
                           1.0 / 3.0, kInf);
  CHECK(expected_rate(c) == doctest::Approx(ref).epsilon(1e-9));

  c = cor2_example();
  double tail_ref = rate_from_tail([&](double s) { return tail_unknown_rayleigh(c, s); }, c.sinr_min);
  CHECK(expected_rate(c) == doctest::Approx(tail_ref).epsilon(1e-10));
  CHECK(expected_rate(c, {}, StatsMethod::Series) == doctest::Approx(tail_ref).epsilon(1e-8));
  McEstimate mc = mc_oracle(c, 1000000, 99);
  CHECK(std::abs(mc.mean.expected_rate - expected_rate(c)) <= 3.0 * mc.expected_rate_se);
}

TEST_CASE("unknown Rayleigh signal under Nakagami interference") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> scale(0.3, 3.0), nu(0.2, 2.0), xi(0.3, 3.0);
  std::uniform_int_distribution<int> shape(1, 3), count(1, 4);
  for (int t = 0; t < 25; ++t) {
    InterferenceContext c;
    c.nu = nu(rng);
    c.signal_scale = 2.0 * scale(rng);
    c.sinr_min = xi(rng);
    c.unknown_interferers.resize(count(rng));
    for (auto& z : c.unknown_interferers) z = {scale(rng), static_cast<double>(shape(rng))};
    CAPTURE(t);
    auto tail = [&](double s) { return tail_unknown_rayleigh(c, s); };
    for (StatsMethod m : {StatsMethod::Auto, StatsMethod::Series}) {
      LinkStats st = link_stats(c, {}, m);
      CHECK(rel_err(st.success_prob, tail(c.sinr_min)) < 1e-8);
      CHECK(rel_err(st.expected_rate, rate_from_tail(tail, c.sinr_min)) < 1e-7);
    }
  }
}

TEST_CASE("known signal under gamma interference") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> scale(0.3, 3.0), nu(0.2, 2.0), xi(0.3, 3.0), beta(0.2, 4.0);
  std::uniform_int_distribution<int> shape(1, 4);
  for (int t = 0; t < 40; ++t) {
    InterferenceContext c;
    c.nu = nu(rng);
    c.signal_scale = 2.0 * scale(rng);
    c.signal_beta = beta(rng);
    c.sinr_min = xi(rng);
    Interferer a{scale(rng), static_cast<double>(shape(rng))};
    if (t % 4 == 3) a.shape -= 0.5;
    double s = c.signal_scale * *c.signal_beta;
    CAPTURE(t);
    if (t % 2 == 0) {
      c.unknown_interferers = {a};
      auto tail = [&](double x) { return s / x > c.nu ? gamma_term_cdf(a, s / x - c.nu) : 0.0; };
      LinkStats st = link_stats(c);
      CHECK(std::abs(st.success_prob - tail(c.sinr_min)) < 1e-12);
      double ref = s / c.sinr_min > c.nu ? rate_from_tail(tail, c.sinr_min) : 0.0;
      CHECK(std::abs(st.expected_rate - ref) <= 1e-8 * ref + 1e-12);
    } else {
      Interferer b{scale(rng), static_cast<double>(shape(rng))};
      c.unknown_interferers = {a, b};
      double eta = std::max(0.0, s / c.sinr_min - c.nu);
      double p_ref = eta > 0.0 ? special::integrate([&](double y) { return convolved_pdf(a, b, y); }, 0.0, eta) : 0.0;
      double r_ref = eta > 0.0 ? special::integrate(
                                     [&](double y) { return std::log2(1.0 + s / (c.nu + y)) * convolved_pdf(a, b, y); },
                                     0.0, eta, QuadratureControl{1e-13, 1e-9, 4000})
                               : 0.0;
      LinkStats st = link_stats(c);
      CHECK(std::abs(st.success_prob - p_ref) <= 1e-8 * p_ref + 1e-12);
      CHECK(std::abs(st.expected_rate - r_ref) <= 1e-7 * r_ref + 1e-12);
    }
  }
}

TEST_CASE("mu recurrence against quadrature") {
  InterferenceContext c;
  c.nu = 0.7;
  c.signal_scale = 3.0;
  c.signal_beta = 1.3;
  c.sinr_min = 1.2;
  c.unknown_interferers = {{1.0, 2.0}, {0.5, 1.0}};
  double theta = series_theta(c.unknown_interferers);
  CHECK(theta == 2.0);
  double s = 3.0 * 1.3, eta = s / 1.2 - 0.7;
  for (int k : {0, 1, 3, 6}) {
    double ref = special::integrate(
        [&](double y) { return std::log1p(s / (c.nu + y)) * std::pow(y, k) * std::exp(-theta * y); }, 0.0, eta,
        QuadratureControl{0.0, 1e-12, 4000});
    CAPTURE(k);
    CHECK(rel_err(mu_recurrence(k, c), ref) < 1e-6);
    CHECK(rel_err(mu_recurrence(k, c), ref) < 1e-9);
  }
  c.signal_beta = 0.2;  // eta = 0
  for (int k = 0; k < 5; ++k) CHECK(mu_recurrence(k, c) == 0.0);
  c.unknown_interferers[0].shape = 1.5;
  CHECK_THROWS_AS(mu_recurrence(0, c), UnsupportedError);
}

TEST_CASE("mu recurrence stays accurate over wide ranges") {
  for (double eta_scale : {1e-3, 0.1, 1.0, 10.0, 200.0}) {
    for (double theta : {0.05, 1.0, 20.0}) {
      InterferenceContext c;
      c.nu = 1.0;
      c.sinr_min = 1.0;
      c.signal_scale = 1.0 + eta_scale;
      c.signal_beta = 1.0;
      c.unknown_interferers = {{1.0 / theta, 1.0}};
      double s = c.signal_scale, eta = s - 1.0;
      for (int k : {0, 2, 10, 40}) {
        double ref = special::integrate(
            [&](double y) { return std::log1p(s / (1.0 + y)) * std::pow(y, k) * std::exp(-theta * y); }, 0.0, eta,
            QuadratureControl{0.0, 1e-12, 4000});
        CAPTURE(eta_scale);
        CAPTURE(theta);
        CAPTURE(k);
        // Relative to the scale k!/theta^{k+1} h(0) of the full integral.
        double norm = std::exp(std::lgamma(k + 1.0) - (k + 1.0) * std::log(theta)) * std::log1p(s);
        CHECK(std::abs(mu_recurrence(k, c) - ref) <= 1e-9 * norm);
      }
    }
  }
}

TEST_CASE("closed forms agree with the series when both apply") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> scale(0.2, 2.0), nu(0.1, 2.0), xi(0.2, 3.0), beta(0.1, 5.0);
  std::uniform_int_distribution<int> count(1, 5);
  int compared = 0;
  for (int t = 0; t < 60; ++t) {
    InterferenceContext c;
    c.nu = nu(rng);
    c.signal_scale = 4.0 * scale(rng);
    c.sinr_min = xi(rng);
    if (t % 2) c.signal_beta = beta(rng);
    c.unknown_interferers.resize(count(rng));
    for (auto& z : c.unknown_interferers) z = {scale(rng), 1.0};
    if (select_route(c) == StatsRoute::SeriesKnown || select_route(c) == StatsRoute::SeriesUnknown) continue;
    ++compared;
    LinkStats closed = link_stats(c), series = link_stats(c, {}, StatsMethod::Series);
    CAPTURE(t);
    CHECK(std::abs(closed.success_prob - series.success_prob) <= 1e-6 * series.success_prob + 1e-13);
    CHECK(std::abs(closed.expected_rate - series.expected_rate) <= 1e-6 * series.expected_rate + 1e-13);
  }
  CHECK(compared > 40);
}

TEST_CASE("Ricean signal with hidden Rayleigh interference") {
  InterferenceContext c = cor2_example();
  c.signal_fading = FadingSpec::ricean(2.0);
  CHECK(select_route(c) == StatsRoute::ExpMixtureQuadrature);
  LinkStats st = link_stats(c);
  LinkStats series = link_stats(c, {}, StatsMethod::Series);
  CHECK(rel_err(st.success_prob, series.success_prob) < 1e-8);
  CHECK(rel_err(st.expected_rate, series.expected_rate) < 1e-8);
  McEstimate mc = mc_oracle(c, 400000, 5);
  CHECK(std::abs(mc.mean.success_prob - st.success_prob) <= 3.5 * mc.success_prob_se);
  CHECK(std::abs(mc.mean.expected_rate - st.expected_rate) <= 3.5 * mc.expected_rate_se);
}

TEST_CASE("no hidden interference and Rayleigh signal degenerates to the exponential tail") {
  for (double xi : {0.1, 1.0, 5.0}) {
    InterferenceContext c;
    c.nu = 0.8;
    c.signal_scale = 1.7;
    c.sinr_min = xi;
    CHECK(success_probability(c) == doctest::Approx(std::exp(-xi * 0.8 / 1.7)).epsilon(1e-14));
  }
}

TEST_CASE("Monte Carlo oracle contract") {
  InterferenceContext det;
  det.nu = 1.0;
  det.signal_scale = 3.0;
  det.signal_beta = 1.0;
  det.sinr_min = 1.0;
  McEstimate e = mc_oracle(det, 1000, 1);
  CHECK(e.success_prob_se == 0.0);
  CHECK(e.expected_rate_se == 0.0);
  CHECK(e.mean.success_prob == 1.0);
  CHECK(e.mean.expected_rate == doctest::Approx(expected_rate(det)).epsilon(1e-15));

  InterferenceContext c = cor2_example();
  McEstimate m1 = mc_oracle(c, 1000000, 17);
  CHECK(std::abs(m1.mean.success_prob - 0.40435) <= 3.0 * m1.success_prob_se);
  McEstimate again = mc_oracle(c, 1000000, 17);
  CHECK(again.mean.success_prob == m1.mean.success_prob);
  McEstimate half = mc_oracle(c, 500000, 18);
  CHECK(m1.success_prob_se / half.success_prob_se == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(0.02));
  CHECK_THROWS_AS(mc_oracle(c, 0, 1), ArgumentError);
}

TEST_CASE("context validation") {
  InterferenceContext c = cor2_example();
  c.nu = 0.0;
  CHECK_THROWS_AS(success_probability(c), ArgumentError);
  c = cor2_example();
  c.unknown_interferers[0].shape = 0.4;
  CHECK_THROWS_AS(success_probability(c), ArgumentError);
  c = cor2_example();
  c.sinr_min = -1.0;
  CHECK_THROWS_AS(expected_rate(c), ArgumentError);
}

TEST_CASE("series reports non-convergence") {
  InterferenceContext c;
  c.nu = 1.0;
  c.signal_scale = 1.0;
  c.signal_beta = 50.0;
  c.sinr_min = 1.0;
  c.unknown_interferers = {{1.0, 1.0}, {0.01, 1.0}};
  CHECK_THROWS_AS(success_probability(c, SeriesControl{1e-12, 5}, StatsMethod::Series), NumericError);
}

TEST_CASE("probability and rate properties on random contexts") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> scale(0.1, 3.0), nu(0.05, 3.0), xi(0.1, 4.0), beta(0.05, 5.0), u(0.0, 1.0);
  std::uniform_int_distribution<int> shape(1, 3), count(0, 4);
  const FadingSpec signals[] = {FadingSpec::rayleigh(), FadingSpec::nakagami(2.0), FadingSpec::ricean(1.5)};
  for (int t = 0; t < 10000; ++t) {
    InterferenceContext c;
    c.nu = nu(rng);
    c.signal_scale = 2.0 * scale(rng);
    c.sinr_min = xi(rng);
    if (u(rng) < 0.5) c.signal_beta = beta(rng);
    c.signal_fading = signals[t % 3];
    c.unknown_interferers.resize(count(rng));
    for (auto& z : c.unknown_interferers) z = {scale(rng), u(rng) < 0.7 ? 1.0 : static_cast<double>(shape(rng))};
    bool cheap = c.signal_beta || c.signal_fading.is_rayleigh();
    if (!cheap && t % 20) continue;
    CAPTURE(t);
    double p = success_probability(c);
    CHECK(p >= 0.0);
    CHECK(p <= 1.0);
    if (t % 10 == 0) {
      LinkStats st = link_stats(c);
      CHECK(st.expected_rate >= std::log2(1.0 + c.sinr_min) * st.success_prob - 1e-12);
      if (st.success_prob == 0.0) CHECK(st.expected_rate == 0.0);
      InterferenceContext harder = c;
      harder.sinr_min *= 1.5;
      CHECK(success_probability(harder) <= p + 1e-12);
      InterferenceContext crowded = c;
      crowded.unknown_interferers.push_back({scale(rng), 1.0});
      CHECK(success_probability(crowded) <= p + 1e-12);
    }
  }
}

TEST_CASE("widely spread interference scales") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> log_scale(-3.0, 1.0), nu(0.2, 2.0), xi(0.3, 3.0);
  std::uniform_int_distribution<int> shape(1, 3), count(2, 5);
  int fractions = 0;
  for (int t = 0; t < 30; ++t) {
    InterferenceContext c;
    c.nu = nu(rng);
    c.signal_scale = 5.0;
    c.sinr_min = xi(rng);
    c.unknown_interferers.resize(count(rng));
    for (auto& z : c.unknown_interferers) z = {std::pow(10.0, log_scale(rng)), static_cast<double>(shape(rng))};
    c.unknown_interferers[0].shape = 2.0;
    CAPTURE(t);
    fractions += select_route(c) == StatsRoute::PartialFractionsUnknown;
    auto tail = [&](double s) { return tail_unknown_rayleigh(c, s); };
    LinkStats st = link_stats(c);
    CHECK(rel_err(st.success_prob, tail(c.sinr_min)) < 1e-8);
    CHECK(rel_err(st.expected_rate, rate_from_tail(tail, c.sinr_min)) < 1e-7);
  }
  CHECK(fractions > 10);
}

TEST_CASE("partial fractions agree with the series for a known signal") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> log_scale(-1.3, 0.0), beta(0.5, 3.0);
  std::uniform_int_distribution<int> shape(1, 3);
  int compared = 0;
  for (int t = 0; t < 200; ++t) {
    InterferenceContext c;
    c.nu = 0.5;
    c.signal_scale = 4.0;
    c.signal_beta = beta(rng);
    c.sinr_min = 1.0;
    c.unknown_interferers = {{std::pow(10.0, log_scale(rng)), 2.0},
                             {std::pow(10.0, log_scale(rng)), static_cast<double>(shape(rng))},
                             {std::pow(10.0, log_scale(rng)), static_cast<double>(shape(rng))}};
    if (select_route(c) != StatsRoute::PartialFractionsKnown) continue;
    ++compared;
    CAPTURE(t);
    LinkStats a = link_stats(c), b = link_stats(c, {}, StatsMethod::Series);
    CHECK(std::abs(a.success_prob - b.success_prob) <= 1e-9 * b.success_prob + 1e-13);
    CHECK(std::abs(a.expected_rate - b.expected_rate) <= 1e-8 * b.expected_rate + 1e-13);
  }
  CHECK(compared > 5);
}

TEST_CASE("every route agrees with a long series for a known signal") {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> log_scale(-2.0, 0.5), beta(0.3, 3.0), xi(0.3, 2.0);
  std::uniform_int_distribution<int> shape(1, 3), count(2, 5);
  const SeriesControl long_series{1e-12, 30000};
  std::set<StatsRoute> seen;
  for (int t = 0; t < 60; ++t) {
    InterferenceContext c;
    c.nu = 0.5;
    c.signal_scale = 4.0;
    c.signal_beta = beta(rng);
    c.sinr_min = xi(rng);
    c.unknown_interferers.resize(count(rng));
    for (auto& z : c.unknown_interferers) z = {std::pow(10.0, log_scale(rng)), static_cast<double>(shape(rng))};
    if (t % 3 == 0)
      for (auto& z : c.unknown_interferers) z.shape = 1.0;
    seen.insert(select_route(c));
    CAPTURE(t);
    LinkStats a = link_stats(c), b = link_stats(c, long_series, StatsMethod::Series);
    CHECK(std::abs(a.success_prob - b.success_prob) <= 1e-8 * b.success_prob + 1e-12);
    CHECK(std::abs(a.expected_rate - b.expected_rate) <= 1e-7 * b.expected_rate + 1e-12);
  }
  CHECK(seen.count(StatsRoute::ExpMixtureKnown));
  CHECK(seen.count(StatsRoute::PartialFractionsKnown));
  CHECK(seen.count(StatsRoute::ConditionedKnown));
  CHECK(seen.count(StatsRoute::SeriesKnown));
}

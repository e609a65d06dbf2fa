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

#include "d2d/stats.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <random>

#include "d2d/errors.hpp"

namespace d2d {
namespace {

constexpr double kLog2e = 1.4426950408889634;
constexpr double kDistinctRel = 1e-9;
// Exponential-mixture coefficients beyond this magnitude cancel badly;
// such contexts go to the series instead.
constexpr double kMaxMixtureWeight = 1e6;

const QuadratureControl kOuterQuad{1e-14, 1e-9, 4000};

bool all_unit_shapes(std::span<const Interferer> xs) {
  return std::all_of(xs.begin(), xs.end(), [](const Interferer& z) { return z.shape == 1.0; });
}

bool integer_shapes(std::span<const Interferer> xs) {
  return std::all_of(xs.begin(), xs.end(),
                     [](const Interferer& z) { return z.shape == std::floor(z.shape); });
}

// a_z = prod_{k != z} s_z / (s_z - s_k); empty when two scales coincide.
std::vector<double> mixture_weights(std::span<const double> s) {
  std::vector<double> a(s.size(), 1.0);
  for (size_t z = 0; z < s.size(); ++z) {
    for (size_t k = 0; k < s.size(); ++k) {
      if (k == z) continue;
      double gap = s[z] - s[k];
      if (std::abs(gap) <= kDistinctRel * std::max(s[z], s[k])) return {};
      a[z] *= s[z] / gap;
    }
  }
  return a;
}

std::vector<double> scales_of(std::span<const Interferer> xs) {
  std::vector<double> s;
  for (const auto& z : xs) s.push_back(z.scale);
  return s;
}

std::vector<double> usable_mixture_weights(std::span<const Interferer> xs) {
  if (!all_unit_shapes(xs)) return {};
  auto s = scales_of(xs);
  auto a = mixture_weights(s);
  double mass = 0.0;
  for (double v : a) mass += std::abs(v);
  if (mass > kMaxMixtureWeight) return {};
  return a;
}

// e^x minus its Taylor polynomial of degree m - 1, for |x| <= m.
double exp_remainder(int m, double x) {
  double term = 1.0;
  for (int k = 1; k <= m; ++k) term *= x / k;
  double sum = 0.0;
  for (int k = m; k < m + 200; ++k) {
    sum += term;
    term *= x / (k + 1);
    if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// sum_z c_z e^{-y / s_z} where sum_z c_z s_z^{-k} = 0 for k < m. Near y = 0
// the Taylor terms of degree < m cancel exactly, so they are dropped from
// every term together.
double cancelling_exp_sum(std::span<const double> c, std::span<const double> s, int m, double y) {
  double smin = *std::min_element(s.begin(), s.end());
  bool small = m > 0 && y <= m * smin;
  double acc = 0.0;
  for (size_t z = 0; z < s.size(); ++z) acc += c[z] * (small ? exp_remainder(m, -y / s[z]) : std::exp(-y / s[z]));
  return acc;
}

double poisson_pmf(int j, double x) {
  if (x == 0.0) return j == 0 ? 1.0 : 0.0;
  return std::exp(j * std::log(x) - x - std::lgamma(j + 1.0));
}

// Gamma density with shape a and rate theta.
double gamma_density(double a, double theta, double y) {
  if (y == 0.0) {
    if (a == 1.0) return theta;
    return a > 1.0 ? 0.0 : kInf;
  }
  double x = theta * y;
  return theta * std::exp((a - 1.0) * std::log(x) - x - std::lgamma(a));
}

// Y = sum_z scale_z G_z as a mixture of Gamma(rho + n, theta) laws with
// weights w_n; w is the Moschopoulos delta sequence scaled by C so that it
// sums to one.
class GammaSum {
 public:
  GammaSum(std::span<const Interferer> xs, const SeriesControl& ctrl) : ctrl_(ctrl) {
    if (xs.empty()) throw ArgumentError("gamma sum needs at least one term");
    theta_ = series_theta(xs);
    double log_c = 0.0;
    for (const auto& z : xs) {
      double ratio = (z.shape / z.scale) / theta_;
      shapes_.push_back(z.shape);
      gaps_.push_back(1.0 - ratio);
      rho_ += z.shape;
      log_c += z.shape * std::log(ratio);
    }
    if (log_c < -690.0) throw NumericError("interferer scales too spread for the gamma-sum series", 0.0);
    w_.push_back(std::exp(log_c));
    cum_.push_back(w_[0]);
    c_.push_back(0.0);
  }

  double theta() const { return theta_; }
  double rho() const { return rho_; }
  int max_terms() const { return ctrl_.max_terms; }
  double tolerance() const { return ctrl_.rel_tolerance; }

  double weight(int n) {
    extend(n);
    return w_[n];
  }
  // 1 - sum_{i <= n} w_i: the probability mass not yet covered.
  double deficit(int n) {
    extend(n);
    return std::max(0.0, 1.0 - cum_[n]);
  }

 private:
  void extend(int n) {
    while (static_cast<int>(w_.size()) <= n) {
      int m = static_cast<int>(w_.size());
      double cl = 0.0;
      for (size_t z = 0; z < gaps_.size(); ++z) cl += shapes_[z] * std::pow(gaps_[z], m);
      c_.push_back(cl);
      double acc = 0.0;
      for (int l = 1; l <= m; ++l) acc += c_[l] * w_[m - l];
      w_.push_back(acc / m);
      cum_.push_back(cum_.back() + w_.back());
    }
  }

  SeriesControl ctrl_;
  double theta_ = 0.0;
  double rho_ = 0.0;
  std::vector<double> shapes_, gaps_, c_, w_, cum_;
};

// Sums w_n term(n) until deficit(n) * bound(n) drops below the tolerance.
// bound(n) must dominate term(m) for every m > n. Once the uncovered weight
// is at roundoff level nothing more can be gained and the sum is returned.
template <class Term, class Bound>
double sum_series(GammaSum& gs, Term term, Bound bound, const char* what) {
  const double roundoff = 64.0 * DBL_EPSILON;
  double sum = 0.0;
  for (int n = 0; n < gs.max_terms(); ++n) {
    double t = term(n);
    sum += gs.weight(n) * t;
    double d = gs.deficit(n);
    double tail = d * bound(n, t);
    if (tail <= gs.tolerance() * sum || tail == 0.0) return sum;
    if (d <= roundoff * (n + 1)) return sum;
  }
  throw NumericError(std::string(what) + ": series did not converge within max_terms", sum);
}

// Upper bound on gamma_density(a, theta, y) over all a >= a_min.
double density_bound(double a_min, double theta, double y) {
  double x = theta * y;
  if (a_min >= x + 1.0) return gamma_density(a_min, theta, y);
  // x^{a-1} e^{-x} / Gamma(a) peaks between a = x and a = x + 1.
  double peak = std::max({gamma_density(std::max(a_min, x), theta, y), gamma_density(x + 0.5, theta, y),
                          gamma_density(x + 1.0, theta, y)});
  return 1.05 * peak;
}

// norm_mu(k) = theta^{k+1} mu_k / k!, generated for k = 0, 1, 2, ...
class MuSequence {
 public:
  MuSequence(double theta, double eta, double nu, double s) : theta_(theta), eta_(eta), nu_(nu), s_(s) {
    x1_ = theta * eta;
    h0_ = std::log1p(s / nu);
    heta_ = std::log1p(s / (nu + eta));
  }

  double next() {
    int k = static_cast<int>(values_.size());
    pois_.push_back(poisson_pmf(k, x1_));
    t2a_.push_back(special::scaled_upper_gamma_nonpos(k, theta_ * (nu_ + s_)));
    t2b_.push_back(special::scaled_upper_gamma_nonpos(k, theta_ * nu_));
    if (eta_ > 0.0) {
      t3a_.push_back(special::scaled_upper_gamma_nonpos(k, theta_ * (eta_ + nu_ + s_)));
      t3b_.push_back(special::scaled_upper_gamma_nonpos(k, theta_ * (eta_ + nu_)));
    }
    double prev = k == 0 ? h0_ : values_.back();
    double v = prev;
    if (eta_ > 0.0) {
      double e = t2a_[k] - t2b_[k];
      for (int l = 0; l <= k; ++l) e -= pois_[k - l] * (t3a_[l] - t3b_[l]);
      v += e - heta_ * pois_[k];
    } else {
      v = 0.0;
    }
    values_.push_back(std::max(v, 0.0));
    return values_.back();
  }

  double at(int k) {
    while (static_cast<int>(values_.size()) <= k) next();
    return values_[k];
  }

 private:
  double theta_, eta_, nu_, s_;
  double x1_ = 0.0, h0_ = 0.0, heta_ = 0.0;
  std::vector<double> values_, pois_, t2a_, t2b_, t3a_, t3b_;
};

// Exact finite expansion for integer shapes: the Laplace transform
// prod_z (1 + s c_z)^{-m_z}, c_z = scale_z / m_z, splits into partial
// fractions sum_{z,k} A_{z,k} (1 + s c_z)^{-k}, i.e. a signed mixture of
// Gamma(k, c_z) laws. Well conditioned exactly when the scales are spread,
// which is where the single-gamma series is slow.
struct GammaComponent {
  int shape;
  double rate;
  double coef;
};

std::vector<GammaComponent> partial_fractions(std::span<const Interferer> xs) {
  // Merge equal c_z so that every pole is distinct.
  std::vector<std::pair<double, int>> poles;
  for (const auto& z : xs) {
    double c = z.scale / z.shape;
    auto it = std::find_if(poles.begin(), poles.end(),
                           [&](const auto& p) { return std::abs(p.first - c) <= kDistinctRel * std::max(p.first, c); });
    if (it == poles.end()) {
      poles.push_back({c, static_cast<int>(z.shape)});
    } else {
      it->second += static_cast<int>(z.shape);
    }
  }
  std::vector<GammaComponent> out;
  for (size_t z = 0; z < poles.size(); ++z) {
    auto [cz, mz] = poles[z];
    // Around u = 1 + s c_z the other factors are alpha_w (1 + u b_w) with
    // alpha_w = 1 - c_w / c_z and b_w = (c_w / c_z) / alpha_w.
    double log_e0 = 0.0;
    double sign = 1.0;
    std::vector<double> b, m;
    for (size_t w = 0; w < poles.size(); ++w) {
      if (w == z) continue;
      double ratio = poles[w].first / cz;
      double alpha = 1.0 - ratio;
      log_e0 -= poles[w].second * std::log(std::abs(alpha));
      if (alpha < 0.0 && poles[w].second % 2) sign = -sign;
      b.push_back(ratio / alpha);
      m.push_back(poles[w].second);
    }
    std::vector<double> e(mz, 0.0);
    e[0] = sign * std::exp(log_e0);
    for (int n = 1; n < mz; ++n) {
      double acc = 0.0;
      for (int l = 1; l <= n; ++l) {
        double g = 0.0;
        for (size_t w = 0; w < b.size(); ++w) g += m[w] * std::pow(-b[w], l);
        acc += g * e[n - l];
      }
      e[n] = acc / n;
    }
    for (int k = 1; k <= mz; ++k) out.push_back({k, 1.0 / cz, e[mz - k]});
  }
  return out;
}

double mixture_mass(const std::vector<GammaComponent>& comps) {
  double mass = 0.0;
  for (const auto& g : comps) mass += std::abs(g.coef);
  return mass;
}

// Largest factor 1 - rate_z / theta of the single-gamma series; the series
// weights decay like q^n.
double series_decay(std::span<const Interferer> xs) {
  double theta = series_theta(xs), q = 0.0;
  for (const auto& z : xs) q = std::max(q, 1.0 - (z.shape / z.scale) / theta);
  return q;
}

constexpr double kSlowSeriesDecay = 0.9;
constexpr double kMaxPartialFractionMass = 1e4;

bool prefer_partial_fractions(std::span<const Interferer> xs) {
  if (!integer_shapes(xs) || series_decay(xs) <= kSlowSeriesDecay) return false;
  return mixture_mass(partial_fractions(xs)) <= kMaxPartialFractionMass;
}

double eta_of(const InterferenceContext& c, double s) { return std::max(0.0, s / c.sinr_min - c.nu); }

struct Partial {
  double p = 0.0;
  double r_nats = 0.0;
};

// Known signal power s = signal_scale * beta, exponential-mixture interference.
Partial mixture_known(const InterferenceContext& c, std::span<const double> a, double s, bool want_rate) {
  Partial out;
  double eta = eta_of(c, s);
  if (eta <= 0.0) return out;
  const auto& xs = c.unknown_interferers;
  // sum_z a_z scale_z^{-k} vanishes for 1 <= k < |L'|, so 1 - sum_z a_z e^{-eta/scale_z}
  // reduces to the exponential remainders without cancellation at small eta.
  const int n = static_cast<int>(xs.size());
  auto sc = scales_of(xs);
  double tail = cancelling_exp_sum(a, sc, n, eta);
  out.p = std::clamp(eta <= n * *std::min_element(sc.begin(), sc.end()) ? -tail : 1.0 - tail, 0.0, 1.0);
  if (!want_rate || out.p == 0.0) return out;
  double xi = c.sinr_min, nu = c.nu;
  double r = std::log((nu + s) / (nu * (1.0 + xi))) + std::log1p(xi) * out.p;
  for (size_t z = 0; z < xs.size(); ++z) {
    double lz = xs[z].scale;
    double shrink = std::exp(-eta / lz);
    double g_at_zero = special::scaled_e1(nu / lz) - shrink * special::scaled_e1((nu + eta) / lz);
    double g_at_s = special::scaled_e1((nu + s) / lz) - shrink * special::scaled_e1((nu + s + eta) / lz);
    r -= a[z] * (g_at_zero - g_at_s);
  }
  out.r_nats = std::max(r, 0.0);
  return out;
}

Partial series_known(const InterferenceContext& c, GammaSum& gs, double s, bool want_rate) {
  Partial out;
  double eta = eta_of(c, s);
  if (eta <= 0.0) return out;
  double theta = gs.theta(), rho = gs.rho();
  double x = theta * eta;
  out.p = sum_series(
      gs, [&](int n) { return special::gamma_p(rho + n, x); }, [](int, double t) { return t; },
      "success probability");
  out.p = std::clamp(out.p, 0.0, 1.0);
  if (!want_rate || out.p == 0.0) return out;
  if (integer_shapes(c.unknown_interferers)) {
    MuSequence mu(theta, eta, c.nu, s);
    int base = static_cast<int>(rho) - 1;
    out.r_nats = sum_series(
        gs, [&](int n) { return mu.at(base + n); }, [](int, double t) { return t; }, "expected rate");
  } else {
    // int_0^eta h f_Y = h(eta) F(eta) + int_0^eta S / ((nu + y)(nu + S + y)) F(y) dy
    auto cdf = [&](double y) {
      double xy = theta * y;
      return sum_series(
          gs, [&](int n) { return special::gamma_p(rho + n, xy); }, [](int, double t) { return t; },
          "gamma-sum distribution");
    };
    double edge = std::log1p(s / (c.nu + eta)) * out.p;
    double body = special::integrate([&](double y) { return s / ((c.nu + y) * (c.nu + s + y)) * cdf(y); }, 0.0,
                                     eta, kOuterQuad);
    out.r_nats = edge + body;
  }
  return out;
}

Partial fractions_known(const InterferenceContext& c, const std::vector<GammaComponent>& comps, double s,
                        bool want_rate) {
  Partial out;
  double eta = eta_of(c, s);
  if (eta <= 0.0) return out;
  double p = 0.0;
  for (const auto& g : comps) p += g.coef * special::gamma_p(g.shape, g.rate * eta);
  out.p = std::clamp(p, 0.0, 1.0);
  if (!want_rate || out.p == 0.0) return out;
  double r = 0.0;
  for (const auto& g : comps) {
    MuSequence mu(g.rate, eta, c.nu, s);
    r += g.coef * mu.at(g.shape - 1);
  }
  out.r_nats = std::max(r, 0.0);
  return out;
}

// Rayleigh signal and Rayleigh interferers with distinct scales.
Partial mixture_unknown(const InterferenceContext& c, std::span<const double> a, bool want_rate) {
  Partial out;
  const auto& xs = c.unknown_interferers;
  double lam = c.signal_scale, nu = c.nu, xi = c.sinr_min;
  double lead = std::exp(-xi * nu / lam);
  double sub = 0.0;
  for (size_t z = 0; z < xs.size(); ++z) sub += a[z] * xs[z].scale * xi / (lam + xs[z].scale * xi);
  out.p = std::clamp(lead * (1.0 - sub), 0.0, 1.0);
  if (!want_rate || out.p == 0.0) return out;
  // H(x) = e^{nu/x} E1(nu/x + xi nu/lam); the rate needs divided differences
  // (H(lam) - H(l_z)) / (lam - l_z), finite as l_z -> lam.
  double c0 = xi * nu / lam;
  auto h = [&](double x) { return lead * special::scaled_e1(nu / x + c0); };
  auto dh = [&](double x) {
    double u = nu / x + c0;
    return lead * (special::scaled_e1(u) - 1.0 / u) * (-nu / (x * x));
  };
  double f = h(lam);
  double r = std::log1p(xi) * out.p;
  for (size_t z = 0; z < xs.size(); ++z) {
    double lz = xs[z].scale;
    double gap = lam - lz;
    double dd = std::abs(gap) <= 1e-5 * std::max(lam, lz) ? dh(0.5 * (lam + lz)) : (f - h(lz)) / gap;
    r += a[z] * lam * dd;
  }
  out.r_nats = std::max(r, 0.0);
  return out;
}

// Averages a known-signal evaluation over the signal fading density.
template <class Known>
Partial average_over_signal(const InterferenceContext& c, Known known, bool want_rate) {
  Partial out;
  double x0 = c.sinr_min * c.nu / c.signal_scale;
  auto pdf = [&](double x) { return fading_pdf(c.signal_fading, x); };
  out.p = special::integrate(
      [&](double x) { return pdf(x) * known(c.signal_scale * x, false).p; }, x0, kInf, kOuterQuad);
  out.p = std::clamp(out.p, 0.0, 1.0);
  if (want_rate && out.p > 0.0) {
    out.r_nats = special::integrate(
        [&](double x) { return pdf(x) * known(c.signal_scale * x, true).r_nats; }, x0, kInf, kOuterQuad);
  }
  return out;
}

// Splits the hidden interferers at the widest gap between neighbouring rates
// shape / scale. The second group is the smaller one.
std::pair<std::vector<Interferer>, std::vector<Interferer>> split_hidden(std::span<const Interferer> xs) {
  std::vector<Interferer> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const Interferer& a, const Interferer& b) { return a.shape / a.scale < b.shape / b.scale; });
  size_t cut = 1;
  double widest = 0.0;
  for (size_t i = 1; i < sorted.size(); ++i) {
    double gap = std::log((sorted[i].shape / sorted[i].scale) / (sorted[i - 1].shape / sorted[i - 1].scale));
    if (gap > widest) {
      widest = gap;
      cut = i;
    }
  }
  std::vector<Interferer> lo(sorted.begin(), sorted.begin() + cut), hi(sorted.begin() + cut, sorted.end());
  if (lo.size() < hi.size()) std::swap(lo, hi);
  return {lo, hi};
}

double hidden_density(std::span<const Interferer> xs, double u, const SeriesControl& ctrl) {
  if (xs.size() == 1) return gamma_density(xs[0].shape, xs[0].shape / xs[0].scale, u);
  auto a = usable_mixture_weights(xs);
  if (!a.empty()) {
    auto sc = scales_of(xs);
    return exp_mixture_pdf(sc, u);
  }
  if (prefer_partial_fractions(xs)) {
    double f = 0.0;
    for (const auto& g : partial_fractions(xs)) f += g.coef * gamma_density(g.shape, g.rate, u);
    return std::max(f, 0.0);
  }
  return gamma_sum_pdf(xs, u, ctrl);
}

Partial evaluate(const InterferenceContext& c, const SeriesControl& ctrl, StatsMethod method, bool want_rate);

// Treats one group of hidden interferers as extra noise nu + U and averages
// over the density of U.
Partial conditioned(const InterferenceContext& c, const SeriesControl& ctrl, bool want_rate) {
  auto [keep, outer] = split_hidden(c.unknown_interferers);
  InterferenceContext inner = c;
  inner.unknown_interferers = keep;
  double upper = c.signal_beta ? eta_of(c, c.signal_scale * *c.signal_beta) : kInf;
  Partial out;
  if (upper <= 0.0) return out;
  auto at = [&](double u, bool rate) {
    InterferenceContext shifted = inner;
    shifted.nu = c.nu + u;
    return evaluate(shifted, ctrl, StatsMethod::Auto, rate);
  };
  out.p = special::integrate([&](double u) { return hidden_density(outer, u, ctrl) * at(u, false).p; }, 0.0, upper,
                             kOuterQuad);
  out.p = std::clamp(out.p, 0.0, 1.0);
  if (want_rate && out.p > 0.0) {
    out.r_nats = special::integrate([&](double u) { return hidden_density(outer, u, ctrl) * at(u, true).r_nats; },
                                    0.0, upper, kOuterQuad);
  }
  return out;
}

Partial evaluate(const InterferenceContext& c, const SeriesControl& ctrl, StatsMethod method, bool want_rate) {
  validate(c);
  Partial out;
  double xi = c.sinr_min, nu = c.nu, lam = c.signal_scale;
  switch (select_route(c, method)) {
    case StatsRoute::Deterministic: {
      double sinr = lam * *c.signal_beta / nu;
      if (sinr >= xi) {
        out.p = 1.0;
        out.r_nats = std::log1p(sinr);
      }
      return out;
    }
    case StatsRoute::SignalTail: {
      double x0 = xi * nu / lam;
      out.p = fading_ccdf(c.signal_fading, x0);
      if (!want_rate || out.p == 0.0) return out;
      if (c.signal_fading.is_rayleigh()) {
        out.r_nats = std::log1p(xi) * out.p + std::exp(-x0) * special::scaled_e1(nu * (1.0 + xi) / lam);
      } else {
        out.r_nats = special::integrate(
            [&](double x) { return std::log1p(lam * x / nu) * fading_pdf(c.signal_fading, x); }, x0, kInf,
            kOuterQuad);
      }
      return out;
    }
    case StatsRoute::ExpMixtureKnown: {
      auto a = usable_mixture_weights(c.unknown_interferers);
      return mixture_known(c, a, lam * *c.signal_beta, want_rate);
    }
    case StatsRoute::ExpMixtureUnknown: {
      auto a = usable_mixture_weights(c.unknown_interferers);
      return mixture_unknown(c, a, want_rate);
    }
    case StatsRoute::ExpMixtureQuadrature: {
      auto a = usable_mixture_weights(c.unknown_interferers);
      return average_over_signal(c, [&](double s, bool rate) { return mixture_known(c, a, s, rate); }, want_rate);
    }
    case StatsRoute::PartialFractionsKnown: {
      auto comps = partial_fractions(c.unknown_interferers);
      return fractions_known(c, comps, lam * *c.signal_beta, want_rate);
    }
    case StatsRoute::PartialFractionsUnknown: {
      auto comps = partial_fractions(c.unknown_interferers);
      return average_over_signal(
          c, [&](double s, bool rate) { return fractions_known(c, comps, s, rate); }, want_rate);
    }
    case StatsRoute::ConditionedKnown:
    case StatsRoute::ConditionedUnknown:
      return conditioned(c, ctrl, want_rate);
    case StatsRoute::SeriesKnown: {
      GammaSum gs(c.unknown_interferers, ctrl);
      return series_known(c, gs, lam * *c.signal_beta, want_rate);
    }
    case StatsRoute::SeriesUnknown: {
      GammaSum gs(c.unknown_interferers, ctrl);
      return average_over_signal(c, [&](double s, bool rate) { return series_known(c, gs, s, rate); }, want_rate);
    }
  }
  return out;
}

}  // namespace

void validate(const InterferenceContext& c) {
  if (!(c.nu > 0.0) || !std::isfinite(c.nu)) throw ArgumentError("nu must be positive and finite");
  if (!(c.signal_scale > 0.0) || !std::isfinite(c.signal_scale))
    throw ArgumentError("signal scale must be positive and finite");
  if (c.signal_beta && !(*c.signal_beta >= 0.0 && std::isfinite(*c.signal_beta)))
    throw ArgumentError("signal fading gain must be non-negative");
  if (!(c.sinr_min > 0.0) || !std::isfinite(c.sinr_min)) throw ArgumentError("sinr_min must be positive");
  for (const auto& z : c.unknown_interferers) {
    if (!(z.scale > 0.0) || !std::isfinite(z.scale)) throw ArgumentError("interferer scale must be positive");
    if (!(z.shape >= 0.5) || !std::isfinite(z.shape)) throw ArgumentError("interferer shape must be >= 0.5");
  }
  validate(c.signal_fading);
}

bool scales_distinct(std::span<const Interferer> interferers) {
  auto s = scales_of(interferers);
  return s.size() <= 1 || !mixture_weights(s).empty();
}

StatsRoute select_route(const InterferenceContext& c, StatsMethod method) {
  bool known = c.signal_beta.has_value();
  if (c.unknown_interferers.empty()) return known ? StatsRoute::Deterministic : StatsRoute::SignalTail;
  if (method == StatsMethod::Auto && !usable_mixture_weights(c.unknown_interferers).empty()) {
    if (known) return StatsRoute::ExpMixtureKnown;
    return c.signal_fading.is_rayleigh() ? StatsRoute::ExpMixtureUnknown : StatsRoute::ExpMixtureQuadrature;
  }
  if (method == StatsMethod::Auto && prefer_partial_fractions(c.unknown_interferers))
    return known ? StatsRoute::PartialFractionsKnown : StatsRoute::PartialFractionsUnknown;
  if (method == StatsMethod::Auto && series_decay(c.unknown_interferers) > kSlowSeriesDecay)
    return known ? StatsRoute::ConditionedKnown : StatsRoute::ConditionedUnknown;
  return known ? StatsRoute::SeriesKnown : StatsRoute::SeriesUnknown;
}

double series_theta(std::span<const Interferer> interferers) {
  double theta = 0.0;
  for (const auto& z : interferers) theta = std::max(theta, z.shape / z.scale);
  return theta;
}

double gamma_sum_pdf(std::span<const Interferer> interferers, double y, const SeriesControl& ctrl) {
  if (!(y >= 0.0)) throw ArgumentError("gamma_sum_pdf needs y >= 0");
  GammaSum gs(interferers, ctrl);
  double theta = gs.theta(), rho = gs.rho();
  return sum_series(
      gs, [&](int n) { return gamma_density(rho + n, theta, y); },
      [&](int n, double) { return density_bound(rho + n + 1, theta, y); }, "gamma-sum density");
}

double gamma_sum_cdf(std::span<const Interferer> interferers, double y, const SeriesControl& ctrl) {
  if (!(y >= 0.0)) throw ArgumentError("gamma_sum_cdf needs y >= 0");
  GammaSum gs(interferers, ctrl);
  double rho = gs.rho();
  return sum_series(
      gs, [&](int n) { return special::gamma_p(rho + n, gs.theta() * y); }, [](int, double t) { return t; },
      "gamma-sum distribution");
}

double exp_mixture_pdf(std::span<const double> scales, double y) {
  if (scales.empty()) throw ArgumentError("exp_mixture_pdf needs at least one scale");
  if (!(y >= 0.0)) throw ArgumentError("exp_mixture_pdf needs y >= 0");
  for (double s : scales)
    if (!(s > 0.0)) throw ArgumentError("exponential means must be positive");
  auto a = mixture_weights(scales);
  if (a.empty()) throw DomainError("exponential mixture is degenerate: repeated scale");
  // Same identity as in mixture_known: the first |L'| - 1 Taylor terms cancel.
  std::vector<double> c(scales.size());
  for (size_t z = 0; z < scales.size(); ++z) c[z] = a[z] / scales[z];
  return std::max(cancelling_exp_sum(c, scales, static_cast<int>(scales.size()) - 1, y), 0.0);
}

double success_probability(const InterferenceContext& ctx, const SeriesControl& ctrl, StatsMethod method) {
  return evaluate(ctx, ctrl, method, false).p;
}

double expected_rate(const InterferenceContext& ctx, const SeriesControl& ctrl, StatsMethod method) {
  return evaluate(ctx, ctrl, method, true).r_nats * kLog2e;
}

LinkStats link_stats(const InterferenceContext& ctx, const SeriesControl& ctrl, StatsMethod method) {
  auto part = evaluate(ctx, ctrl, method, true);
  return {part.p, part.p == 0.0 ? 0.0 : part.r_nats * kLog2e};
}

double mu_recurrence(int k, const InterferenceContext& ctx, const SeriesControl& ctrl) {
  (void)ctrl;
  validate(ctx);
  if (k < 0) throw ArgumentError("mu_recurrence needs k >= 0");
  if (ctx.unknown_interferers.empty()) throw ArgumentError("mu_recurrence needs hidden interferers");
  if (!integer_shapes(ctx.unknown_interferers))
    throw UnsupportedError("mu_recurrence needs integer Nakagami shapes");
  double theta = series_theta(ctx.unknown_interferers);
  double scale = std::exp(std::lgamma(k + 1.0) - (k + 1.0) * std::log(theta));
  auto known = [&](double s) {
    double eta = eta_of(ctx, s);
    if (eta <= 0.0) return 0.0;
    MuSequence mu(theta, eta, ctx.nu, s);
    return mu.at(k) * scale;
  };
  if (ctx.signal_beta) return known(ctx.signal_scale * *ctx.signal_beta);
  double x0 = ctx.sinr_min * ctx.nu / ctx.signal_scale;
  return special::integrate(
      [&](double x) { return fading_pdf(ctx.signal_fading, x) * known(ctx.signal_scale * x); }, x0, kInf,
      kOuterQuad);
}

McEstimate mc_oracle(const InterferenceContext& ctx, std::int64_t n, std::uint64_t seed) {
  validate(ctx);
  if (n < 1) throw ArgumentError("mc_oracle needs n >= 1");
  std::mt19937_64 rng(seed);
  std::vector<std::gamma_distribution<double>> draws;
  for (const auto& z : ctx.unknown_interferers) draws.emplace_back(z.shape, 1.0 / z.shape);
  double sp = 0.0, sp2 = 0.0, sr = 0.0, sr2 = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    double beta = ctx.signal_beta ? *ctx.signal_beta : sample_fading(ctx.signal_fading, rng);
    double y = 0.0;
    for (size_t z = 0; z < draws.size(); ++z) y += ctx.unknown_interferers[z].scale * draws[z](rng);
    double sinr = ctx.signal_scale * beta / (ctx.nu + y);
    if (sinr >= ctx.sinr_min) {
      double r = std::log2(1.0 + sinr);
      sp += 1.0;
      sp2 += 1.0;
      sr += r;
      sr2 += r * r;
    }
  }
  double dn = static_cast<double>(n);
  McEstimate est;
  est.samples = n;
  est.mean.success_prob = sp / dn;
  est.mean.expected_rate = sr / dn;
  if (n > 1) {
    auto se = [&](double s, double s2) {
      double var = std::max(0.0, (s2 - s * s / dn) / (dn - 1.0));
      return std::sqrt(var / dn);
    };
    est.success_prob_se = se(sp, sp2);
    est.expected_rate_se = se(sr, sr2);
  }
  return est;
}

}  // namespace d2d

#pragma once

// Exact distributions, generating functions and moments of the Poisson-type
// fields: GPRF, its fractional time change (FGPRF), the Skellam-type field
// (GSPP) and its fractional variant (FGSPP), plus path-integral moments.
//
// Fractional pmfs are Σ_N C_N x^N W_N(Λx) with x = sᵅtᵝ and
//   W_N(y) = ₂Ψ₂[(N+1,1),(N+1,1);(αN+1,α),(βN+1,β) | −y] = E[(UV)^N e^{−yUV}],
// U = Lᵅ(1), V = Lᵝ(1). W_N is cached per N inside the model objects.

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "poisson_fields/detail/mixture.hpp"
#include "poisson_fields/errors.hpp"
#include "poisson_fields/partitions.hpp"
#include "poisson_fields/specfun.hpp"
#include "poisson_fields/types.hpp"

namespace poisson_fields::model {

inline constexpr double kDefaultTailTol = 1e-10;

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

/// A probability together with a bound on its absolute evaluation error.
struct PmfValue {
  double value = 0.0;
  double error_bound = 0.0;
};

namespace detail {

using poisson_fields::detail::ClockLaw;
using poisson_fields::detail::JumpLaw;
using poisson_fields::detail::require;

/// W_N is first requested at kWrightTargetTol; kWrightFailTol is the loosest
/// accepted bound. The achieved bound is propagated, not either value.
inline constexpr double kWrightTargetTol = 1e-14;
inline constexpr double kWrightFailTol = 1e-10;

inline double log_factorial(long n) { return std::lgamma(static_cast<double>(n) + 1.0); }

/// Smallest n ≥ start with tail(n) ≤ tol for a non-increasing tail(·).
template <class Tail>
long first_below(Tail&& tail, long start, double tol) {
  long lo = start;
  if (tail(lo) <= tol) return lo;
  long step = 1;
  long hi = lo + step;
  while (tail(hi) > tol) {
    lo = hi;
    step *= 2;
    hi = lo + step;
    if (step > (1L << 24)) throw ResourceLimit("support needed for the tail tolerance is too large");
  }
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    if (tail(mid) <= tol) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

/// W_N(y) = e^{log_scale}·scaled.value, with log_scale = log W_N(0) = log E[(UV)^N].
struct ScaledWright {
  double log_scale = 0.0;
  specfun::SeriesResult scaled;

  /// (e^{log_coeff}·W_N, e^{log_coeff}·bound).
  std::pair<double, double> times(double log_coeff) const {
    auto mul = [&](double v) {
      return v == 0.0 ? 0.0 : std::copysign(std::exp(std::log(std::abs(v)) + log_coeff + log_scale), v);
    };
    return {mul(scaled.value), mul(scaled.truncation_bound)};
  }
};

/// Cache of W_N(y) for one (α, β, y).
class WrightCache {
  static constexpr double kRescaleBelow = 1e-200;
  static constexpr double kRescaleStep = 500.0;

 public:
  WrightCache(FracOrders frac, double y, double tol) : frac_(frac), y_(y), tol_(tol) {}

  const ScaledWright& get(long n) const {
    auto it = cache_.find(n);
    if (it != cache_.end()) return it->second;
    const double dn = static_cast<double>(n);
    const double a = frac_.alpha;
    const double b = frac_.beta;
    specfun::WrightParams p{{{dn + 1.0, 1.0}, {dn + 1.0, 1.0}}, {{a * dn + 1.0, a}, {b * dn + 1.0, b}}};
    ScaledWright w;
    w.log_scale = 2.0 * std::lgamma(dn + 1.0) - std::lgamma(a * dn + 1.0) - std::lgamma(b * dn + 1.0);
    auto evaluate = [&] {
      try {
        w.scaled = specfun::wright_2psi2_scaled(p, -y_, w.log_scale, std::min(tol_, kWrightTargetTol));
      } catch (const NonConvergence&) {
        w.scaled = specfun::wright_2psi2_scaled(p, -y_, w.log_scale, tol_);
      }
    };
    evaluate();
    // W_N(y) can sit hundreds of orders below W_N(0); rescale until it is a normal double.
    for (int i = 0; i < 64 && std::abs(w.scaled.value) < kRescaleBelow; ++i) {
      w.log_scale += w.scaled.value > 0.0 ? std::log(w.scaled.value) : -kRescaleStep;
      evaluate();
    }
    return cache_.emplace(n, w).first->second;
  }

 private:
  FracOrders frac_;
  double y_;
  double tol_;
  mutable std::map<long, ScaledWright> cache_;
};

/// Mixed compound law Σ_{K ≤ k_max} P(K) q^{*K} on [lo, hi], where
/// P(K) = y^K W_K(y)/K! is the fractional batch count and q the batch-size law.
/// All summands are non-negative; errors of P(K) are weighted by the listed mass.
inline PmfTable compound_table(const std::vector<std::pair<long, double>>& marks, const WrightCache& wright,
                               double y, long k_max, long lo, long hi) {
  long step_lo = 0;
  long step_hi = 0;
  for (const auto& [v, q] : marks) {
    step_lo = std::min(step_lo, v);
    step_hi = std::max(step_hi, v);
  }
  PmfTable t;
  t.first = lo;
  t.probs.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
  std::vector<specfun::detail::CompensatedSum> acc(t.probs.size());
  // conv holds q^{*K} on [K·step_lo, K·step_hi], clipped above hi when no mark is negative.
  std::vector<double> conv{1.0};
  long conv_first = 0;
  const double log_y = std::log(y);
  for (long kk = 0; kk <= k_max; ++kk) {
    if (kk > 0) {
      const long first = conv_first + step_lo;
      long last = conv_first + static_cast<long>(conv.size()) - 1 + step_hi;
      if (step_lo >= 0) last = std::min(last, hi);
      if (last < first) break;
      std::vector<double> next(static_cast<std::size_t>(last - first + 1), 0.0);
      for (std::size_t i = 0; i < conv.size(); ++i) {
        if (conv[i] == 0.0) continue;
        for (const auto& [v, q] : marks) {
          const long at = conv_first + static_cast<long>(i) + v - first;
          if (at < static_cast<long>(next.size())) next[static_cast<std::size_t>(at)] += conv[i] * q;
        }
      }
      conv.swap(next);
      conv_first = first;
    }
    const auto [p, e] = wright.get(kk).times(static_cast<double>(kk) * log_y - std::lgamma(static_cast<double>(kk) + 1.0));
    if (p == 0.0 && e == 0.0) continue;
    double listed = 0.0;
    for (std::size_t i = 0; i < conv.size(); ++i) {
      const long n = conv_first + static_cast<long>(i);
      if (n < lo || n > hi) continue;
      acc[static_cast<std::size_t>(n - lo)].add(p * conv[i]);
      listed += conv[i];
    }
    t.value_error_bound += e * listed;
  }
  for (std::size_t i = 0; i < acc.size(); ++i) t.probs[i] = std::clamp(acc[i].value(), 0.0, 1.0);
  return t;
}

inline PmfTable one_sided_table(const std::vector<PmfValue>& values, double tail) {
  PmfTable t;
  t.first = 0;
  for (const auto& v : values) {
    t.probs.push_back(std::clamp(v.value, 0.0, 1.0));
    t.value_error_bound += v.error_bound;
  }
  t.tail_mass_bound = tail;
  return t;
}

}  // namespace detail

// ---------------------------------------------------------------- GPRF

/// P{M(A) = n}; zero for n < 0.
inline double gprf_pmf(const RateVector& rates, double area, long n) {
  detail::require(area > 0.0, "gprf_pmf: area > 0");
  if (n < 0) return 0.0;
  const std::size_t k = rates.k();
  std::vector<double> log_mu(k);
  for (std::size_t j = 0; j < k; ++j) log_mu[j] = std::log(rates[j] * area);
  const double base = -rates.total() * area;
  specfun::detail::CompensatedSum acc;
  partitions::for_each_theta(static_cast<int>(k), static_cast<int>(n), [&](const std::vector<int>& parts) {
    double l = base;
    for (std::size_t j = 0; j < k; ++j) {
      if (parts[j] > 0) l += parts[j] * log_mu[j] - detail::log_factorial(parts[j]);
    }
    acc.add(std::exp(l));
  });
  return acc.value();
}

inline double gprf_pgf(const RateVector& rates, double area, double z) {
  detail::require(std::abs(z) <= 1.0, "gprf_pgf: |z| <= 1");
  double e = 0.0;
  for (std::size_t j = 0; j < rates.k(); ++j) e += rates[j] * (std::pow(z, double(j + 1)) - 1.0);
  return std::exp(area * e);
}

inline Moments gprf_moments(const RateVector& rates, double area) {
  return {rates.moment(1) * area, rates.moment(2) * area};
}

inline double gprf_cov(const RateVector& rates, const Window& a, const Window& b) {
  return rates.moment(2) * a.intersection_measure(b);
}

/// P{M(A) > n}.
inline double gprf_upper_tail_bound(const RateVector& rates, double area, long n) {
  return poisson_fields::detail::upper_tail_bound(poisson_fields::detail::batch_jumps(rates),
                                                  {FracOrders{}, area}, static_cast<double>(n) + 1.0);
}

inline PmfTable gprf_table(const RateVector& rates, double area, double tail_tol = kDefaultTailTol) {
  const long n_max = detail::first_below(
      [&](long n) { return gprf_upper_tail_bound(rates, area, n); }, 0, tail_tol);
  std::vector<PmfValue> v;
  for (long n = 0; n <= n_max; ++n) v.push_back({gprf_pmf(rates, area, n), 0.0});
  PmfTable t = detail::one_sided_table(v, gprf_upper_tail_bound(rates, area, n_max));
  t.value_error_bound = 1e-15 * static_cast<double>(v.size());
  return t;
}

// ---------------------------------------------------------------- FGPRF

/// M(Lᵅ(s), Lᵝ(t)) for one rectangle [0,s]×[0,t].
class FgprfModel {
 public:
  FgprfModel(RateVector rates, FracOrders frac, double s, double t, double tol = specfun::kDefaultTol)
      : rates_(std::move(rates)),
        frac_(frac),
        s_(s),
        t_(t),
        tol_(tol),
        x_((detail::require(s > 0.0 && t > 0.0, "FGPRF needs s, t > 0"), frac.clock_area(s, t))),
        wright_(frac, rates_.total() * x_, detail::kWrightFailTol) {}

  double clock_area() const { return x_; }
  const FracOrders& orders() const { return frac_; }
  const RateVector& rates() const { return rates_; }

  /// log C_N(n), C_N(n) = Σ_{Θ(k,n), Σn_j = N} Π (λ_j x)^{n_j}/n_j!, keyed by N.
  std::map<long, double> log_batch_coefficients(long n) const {
    const std::size_t k = rates_.k();
    std::vector<double> log_lx(k);
    for (std::size_t j = 0; j < k; ++j) log_lx[j] = std::log(rates_[j] * x_);
    std::map<long, std::vector<double>> logs;
    partitions::for_each_theta(static_cast<int>(k), static_cast<int>(n), [&](const std::vector<int>& parts) {
      long big_n = 0;
      double l = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        if (parts[j] == 0) continue;
        big_n += parts[j];
        l += parts[j] * log_lx[j] - detail::log_factorial(parts[j]);
      }
      logs[big_n].push_back(l);
    });
    std::map<long, double> out;
    for (auto& [key, v] : logs) {
      const double m = *std::max_element(v.begin(), v.end());
      specfun::detail::CompensatedSum acc;
      for (double l : v) acc.add(std::exp(l - m));
      out[key] = m + std::log(acc.value());
    }
    return out;
  }

  const detail::ScaledWright& wright_factor(long big_n) const { return wright_.get(big_n); }

  PmfValue pmf(long n) const {
    if (n < 0) return {0.0, 0.0};
    PmfValue out;
    specfun::detail::CompensatedSum acc;
    for (const auto& [big_n, log_c] : log_batch_coefficients(n)) {
      const auto [v, e] = wright_.get(big_n).times(log_c);
      acc.add(v);
      out.error_bound += e;
    }
    out.value = acc.value();
    return out;
  }

  /// ∂p(n)/∂λ₁ = Σ_Θ Π(λ_j x)^{n_j}/n_j! [(n₁/λ₁) W_N − x W_{N+1}], using W_N' = −W_{N+1}.
  PmfValue pmf_rate1_derivative(long n) const {
    if (n < 0) return {0.0, 0.0};
    const std::size_t k = rates_.k();
    std::vector<double> log_lx(k);
    for (std::size_t j = 0; j < k; ++j) log_lx[j] = std::log(rates_[j] * x_);
    PmfValue out;
    specfun::detail::CompensatedSum acc;
    partitions::for_each_theta(static_cast<int>(k), static_cast<int>(n), [&](const std::vector<int>& parts) {
      long big_n = 0;
      double l = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        big_n += parts[j];
        l += parts[j] * log_lx[j] - detail::log_factorial(parts[j]);
      }
      if (parts[0] > 0) {
        const auto [v, e] = wright_.get(big_n).times(l + std::log(parts[0] / rates_[0]));
        acc.add(v);
        out.error_bound += e;
      }
      const auto [v, e] = wright_.get(big_n + 1).times(l + std::log(x_));
      acc.add(-v);
      out.error_bound += e;
    });
    out.value = acc.value();
    return out;
  }

  /// E z^M = ₂Ψ₂[(1,1),(1,1);(1,α),(1,β) | Σλ_j(z^j−1) x].
  specfun::SeriesResult pgf(double z) const {
    detail::require(std::abs(z) <= 1.0, "fgprf_pgf: |z| <= 1");
    double c = 0.0;
    for (std::size_t j = 0; j < rates_.k(); ++j) c += rates_[j] * (std::pow(z, double(j + 1)) - 1.0);
    return specfun::wright_2psi2({{{1.0, 1.0}, {1.0, 1.0}}, {{1.0, frac_.alpha}, {1.0, frac_.beta}}},
                                 c * x_, tol_);
  }

  Moments moments() const {
    const double ga = std::tgamma(frac_.alpha + 1.0);
    const double gb = std::tgamma(frac_.beta + 1.0);
    const double m1 = rates_.moment(1) * x_;
    const double mean = m1 / (ga * gb);
    const double var_factor =
        4.0 / (std::tgamma(2.0 * frac_.alpha + 1.0) * std::tgamma(2.0 * frac_.beta + 1.0)) -
        1.0 / (ga * ga * gb * gb);
    return {mean, rates_.moment(2) * x_ / (ga * gb) + m1 * m1 * var_factor};
  }

  /// P{M > n}.
  double upper_tail_bound(long n) const {
    return poisson_fields::detail::upper_tail_bound(poisson_fields::detail::batch_jumps(rates_),
                                                    {frac_, x_}, static_cast<double>(n) + 1.0);
  }

  PmfTable table(double tail_tol = kDefaultTailTol) const {
    const long n_max = detail::first_below([&](long n) { return upper_tail_bound(n); }, 0, tail_tol);
    std::vector<std::pair<long, double>> marks;
    for (std::size_t j = 0; j < rates_.k(); ++j) marks.emplace_back(static_cast<long>(j + 1), rates_[j] / rates_.total());
    // Every batch adds at least one point, so K ≤ n_max is exact on [0, n_max].
    PmfTable t = detail::compound_table(marks, wright_, rates_.total() * x_, n_max, 0, n_max);
    t.tail_mass_bound = upper_tail_bound(n_max);
    return t;
  }

 private:
  RateVector rates_;
  FracOrders frac_;
  double s_;
  double t_;
  double tol_;
  double x_;
  detail::WrightCache wright_;
};

inline double fgprf_pmf(const RateVector& rates, FracOrders frac, double s, double t, long n,
                        double tol = 1e-10) {
  const PmfValue v = FgprfModel(rates, frac, s, t).pmf(n);
  if (v.error_bound > tol) throw NonConvergence("fgprf_pmf: error bound exceeds tolerance");
  return v.value;
}

inline double fgprf_pgf(const RateVector& rates, FracOrders frac, double s, double t, double z,
                        double tol = specfun::kDefaultTol) {
  return FgprfModel(rates, frac, s, t, tol).pgf(z).value;
}

inline Moments fgprf_moments(const RateVector& rates, FracOrders frac, double s, double t) {
  return FgprfModel(rates, frac, s, t).moments();
}

/// 1 − P{no point in K}. Fractional orders need the two sides of a planar K.
inline double capacity_functional(const RateVector& rates, const Window& k, FracOrders frac = {}) {
  const double area = k.measure();
  detail::require(area > 0.0, "capacity_functional: |K| > 0");
  if (frac.classical()) return -std::expm1(-rates.total() * area);
  if (k.dimension() != 2 || !k.is_anchored()) {
    throw InvalidParams("fractional capacity functional needs an anchored planar rectangle");
  }
  const FgprfModel m(rates, frac, k.upper()[0], k.upper()[1]);
  return 1.0 - m.wright_factor(0).times(0.0).first;
}

// ------------------------------------------- inverse-subordinator moments

struct ProductMoments {
  double mean_st = 0.0;  // E[Lᵅ(s) Lᵝ(t)]
  double cov = 0.0;      // Cov(Lᵅ(s)Lᵝ(t), Lᵅ(s')Lᵝ(t'))
};

namespace detail {

/// E[Lᵅ(s) Lᵅ(s')] for s ≤ s':
///   (1/(Γ(α+1)Γ(α))) ∫₀ˢ ((s'−x)ᵅ + (s−x)ᵅ) x^{α−1} dx,
/// with x = s u^{1/α} turning the integral into (sᵅ/α) ∫₀¹ f(s u^{1/α}) du.
/// The remaining (s − x)ᵅ endpoint behaviour is handled by tanh-sinh.
inline double inverse_stable_cross_moment(double alpha, double s, double s2) {
  const double scale = std::pow(s, alpha) / alpha;
  auto f = [&](double u) {
    const double x = s * std::pow(u, 1.0 / alpha);
    return std::pow(std::max(s2 - x, 0.0), alpha) + std::pow(std::max(s - x, 0.0), alpha);
  };
  double err = 0.0;
  double l1 = 0.0;
  boost::math::quadrature::tanh_sinh<double> rule;
  const double integral = rule.integrate(f, 0.0, 1.0, 1e-14, &err, &l1);
  const double norm = 1.0 / (std::tgamma(alpha + 1.0) * std::tgamma(alpha));
  const double value = norm * scale * integral;
  if (!(norm * scale * err <= 1e-10)) {
    throw QuadratureFailure("covariance quadrature did not reach 1e-10");
  }
  return value;
}

}  // namespace detail

inline ProductMoments inverse_subordinator_product_moments(FracOrders frac, double s, double t,
                                                           double s2, double t2) {
  detail::require(s > 0.0 && t > 0.0, "product moments need s, t > 0");
  detail::require(s <= s2 && t <= t2, "product moments need (s,t) <= (s',t')");
  const double ga = std::tgamma(frac.alpha + 1.0);
  const double gb = std::tgamma(frac.beta + 1.0);
  ProductMoments out;
  out.mean_st = frac.clock_area(s, t) / (ga * gb);
  const double mean_2 = frac.clock_area(s2, t2) / (ga * gb);
  const double cross = detail::inverse_stable_cross_moment(frac.alpha, s, s2) *
                       detail::inverse_stable_cross_moment(frac.beta, t, t2);
  out.cov = cross - out.mean_st * mean_2;
  return out;
}

inline double fgprf_cov(const RateVector& rates, FracOrders frac, double s, double t, double s2,
                        double t2) {
  const ProductMoments pm = inverse_subordinator_product_moments(frac, s, t, s2, t2);
  const double m1 = rates.moment(1);
  return pm.mean_st * rates.moment(2) + pm.cov * m1 * m1;
}

// ---------------------------------------------------------------- GSPP

/// One index i ∈ 𝓘 with its batch rates.
struct IndexedRates {
  double index;
  RateVector rates;
};

inline double gspp_log_mgf(const std::vector<IndexedRates>& family, double area, double u) {
  double e = 0.0;
  for (const auto& [i, rates] : family) {
    detail::require(i != 0.0, "gspp index set must exclude 0");
    for (std::size_t j = 0; j < rates.k(); ++j) e += rates[j] * std::expm1(i * double(j + 1) * u);
  }
  return area * e;
}

inline double gspp_mgf(const std::vector<IndexedRates>& family, double area, double u) {
  return std::exp(gspp_log_mgf(family, area, u));
}

inline std::vector<IndexedRates> skellam_family(const SkellamRates& rates) {
  return {{1.0, rates.plus}, {-1.0, rates.minus}};
}

inline double gspp_mgf(const SkellamRates& rates, double area, double u) {
  return gspp_mgf(skellam_family(rates), area, u);
}

/// M₁(A) − M₂(A) through the Bessel form over Θ̃(k,n).
class SkellamModel {
 public:
  SkellamModel(SkellamRates rates, double area, double tol = specfun::kDefaultTol)
      : rates_(std::move(rates)), area_(area), tol_(tol) {
    detail::require(area > 0.0, "skellam: area > 0");
    w_ = 1;
    while (partitions::signed_truncation_bound(rates_, area_, w_) >= tol_ / 10.0) {
      ++w_;
      if (w_ > 100000) throw ResourceLimit("skellam: truncation cap W too large");
    }
  }

  int weight_cap() const { return w_; }
  double truncation_mass() const { return partitions::signed_truncation_bound(rates_, area_, w_); }

  PmfValue pmf(long n) const {
    const std::size_t k = rates_.k();
    const int w = std::max<int>(w_, static_cast<int>(std::abs(n)));
    PmfValue out;
    specfun::detail::CompensatedSum acc;
    const double base = -rates_.total() * area_;
    partitions::for_each_theta_signed(static_cast<int>(k), static_cast<int>(n), w, [&](const std::vector<int>& parts) {
      double l = base;
      double rel = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        const auto& bi = bessel(j, std::abs(parts[j]));
        if (!(bi.value > 0.0)) return;
        l += 0.5 * parts[j] * std::log(rates_.plus[j] / rates_.minus[j]) + std::log(bi.value);
        rel += bi.truncation_bound / bi.value;
      }
      const double term = std::exp(l);
      acc.add(term);
      out.error_bound += term * rel;
    });
    out.value = acc.value();
    return out;
  }

  double upper_tail_bound(long n) const {
    return poisson_fields::detail::upper_tail_bound(poisson_fields::detail::skellam_jumps(rates_),
                                                    {FracOrders{}, area_}, static_cast<double>(n) + 1.0);
  }
  /// P{S < n}.
  double lower_tail_bound(long n) const {
    return poisson_fields::detail::upper_tail_bound(poisson_fields::detail::skellam_jumps(rates_).negated(),
                                                    {FracOrders{}, area_}, 1.0 - static_cast<double>(n));
  }

  PmfTable table(double tail_tol = kDefaultTailTol) const {
    const double mean = [&] {
      double m = 0.0;
      for (std::size_t j = 0; j < rates_.k(); ++j) m += double(j + 1) * (rates_.plus[j] - rates_.minus[j]);
      return m * area_;
    }();
    const long center = static_cast<long>(std::floor(mean));
    const long hi = detail::first_below([&](long n) { return upper_tail_bound(n); }, center, tail_tol / 2);
    const long lo = -detail::first_below([&](long m) { return lower_tail_bound(-m); }, -center, tail_tol / 2);
    PmfTable t;
    t.first = lo;
    for (long n = lo; n <= hi; ++n) {
      const PmfValue v = pmf(n);
      t.probs.push_back(std::clamp(v.value, 0.0, 1.0));
      t.value_error_bound += v.error_bound;
    }
    t.tail_mass_bound = upper_tail_bound(hi) + lower_tail_bound(lo) + truncation_mass();
    return t;
  }

 private:
  const specfun::SeriesResult& bessel(std::size_t j, int order) const {
    auto key = std::make_pair(j, order);
    auto it = bessel_.find(key);
    if (it != bessel_.end()) return it->second;
    const double arg = 2.0 * area_ * std::sqrt(rates_.plus[j] * rates_.minus[j]);
    return bessel_.emplace(key, specfun::bessel_i(order, arg, 1e-15)).first->second;
  }

  SkellamRates rates_;
  double area_;
  double tol_;
  int w_ = 1;
  mutable std::map<std::pair<std::size_t, int>, specfun::SeriesResult> bessel_;
};

inline double skellam_pmf(const SkellamRates& rates, double area, long n, double tol = specfun::kDefaultTol) {
  return SkellamModel(rates, area, tol).pmf(n).value;
}

// ---------------------------------------------------------------- FGSPP

/// 𝒮(Lᵅ(s), Lᵝ(t)).
class FgsppModel {
 public:
  FgsppModel(SkellamRates rates, FracOrders frac, double s, double t, double tol = 1e-12)
      : rates_(std::move(rates)),
        frac_(frac),
        tol_(tol),
        x_((detail::require(s > 0.0 && t > 0.0, "FGSPP needs s, t > 0"), frac.clock_area(s, t))),
        wright_(frac, rates_.total() * x_, detail::kWrightFailTol) {
    // Total batch count K = Σ(a_j + b_j) ~ fractional Poisson with rate Λ₁+Λ₂.
    const RateVector one{rates_.total()};
    const FgprfModel count(one, frac_, s, t);
    k_max_ = detail::first_below([&](long kk) { return count.upper_tail_bound(kk); }, 0, tol_ / 2);
    k_tail_ = count.upper_tail_bound(k_max_);
  }

  long batch_cap() const { return k_max_; }
  double truncation_mass() const { return k_tail_; }
  double clock_area() const { return x_; }

  PmfValue pmf(long n) const {
    const std::size_t k = rates_.k();
    if (std::abs(n) > static_cast<long>(k) * k_max_) return {0.0, 0.0};
    std::vector<double> log_c(k);
    std::vector<double> log_ratio(k);
    for (std::size_t j = 0; j < k; ++j) {
      log_c[j] = std::log(std::sqrt(rates_.plus[j] * rates_.minus[j]) * x_);
      log_ratio[j] = 0.5 * std::log(rates_.plus[j] / rates_.minus[j]);
    }
    PmfValue out;
    specfun::detail::CompensatedSum acc;
    const int w = static_cast<int>(std::max<long>({k_max_, std::abs(n), 1L}));
    partitions::for_each_theta_signed(static_cast<int>(k), static_cast<int>(n), w, [&](const std::vector<int>& parts) {
      long base = 0;
      for (int p : parts) base += std::abs(p);
      if (base > k_max_) return;
      const long m_max = (k_max_ - base) / 2;
      // h[M] = Σ_{Σ m_j = M} Π_j c_j^{2m_j+|n_j|}/((|n_j|+m_j)! m_j!), prefactor included.
      std::vector<double> h(static_cast<std::size_t>(m_max) + 1, 0.0);
      h[0] = 1.0;
      double log_pref = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        const long a = std::abs(parts[j]);
        log_pref += parts[j] * log_ratio[j] + a * log_c[j] - detail::log_factorial(a);
        std::vector<double> g(h.size(), 0.0);
        for (long m = 0; m <= m_max; ++m) {
          g[m] = std::exp(2.0 * m * log_c[j] + detail::log_factorial(a) - detail::log_factorial(a + m) -
                          detail::log_factorial(m));
        }
        std::vector<double> next(h.size(), 0.0);
        for (long i = 0; i <= m_max; ++i) {
          if (h[i] == 0.0) continue;
          for (long m = 0; i + m <= m_max; ++m) next[i + m] += h[i] * g[m];
        }
        h.swap(next);
      }
      for (long m = 0; m <= m_max; ++m) {
        if (!(h[m] > 0.0)) continue;
        const auto [v, e] = wright_.get(base + 2 * m).times(log_pref + std::log(h[m]));
        acc.add(v);
        out.error_bound += e;
      }
    });
    out.value = acc.value();
    return out;
  }

  /// ₂Ψ₂[(1,1),(1,1);(1,α),(1,β) | −φ(z) x].
  specfun::SeriesResult pgf(double z) const {
    detail::require(z > 0.0 && z <= 1.0, "fgspp_pgf: z in (0,1]");
    double phi = 0.0;
    for (std::size_t j = 0; j < rates_.k(); ++j) {
      const double jj = double(j + 1);
      phi += rates_.plus[j] * (1.0 - std::pow(z, jj)) + rates_.minus[j] * (1.0 - std::pow(z, -jj));
    }
    return specfun::wright_2psi2({{{1.0, 1.0}, {1.0, 1.0}}, {{1.0, frac_.alpha}, {1.0, frac_.beta}}},
                                 -phi * x_, specfun::kDefaultTol);
  }

  Moments moments() const {
    const double ga = std::tgamma(frac_.alpha + 1.0);
    const double gb = std::tgamma(frac_.beta + 1.0);
    double drift = 0.0;
    double second = 0.0;
    for (std::size_t j = 0; j < rates_.k(); ++j) {
      const double jj = double(j + 1);
      drift += jj * (rates_.plus[j] - rates_.minus[j]);
      second += jj * jj * (rates_.plus[j] + rates_.minus[j]);
    }
    const double ea = x_ / (ga * gb);
    const double var_a = x_ * x_ *
                         (4.0 / (std::tgamma(2.0 * frac_.alpha + 1.0) * std::tgamma(2.0 * frac_.beta + 1.0)) -
                          1.0 / (ga * ga * gb * gb));
    return {drift * ea, second * ea + drift * drift * var_a};
  }

  double upper_tail_bound(long n) const {
    return poisson_fields::detail::upper_tail_bound(poisson_fields::detail::skellam_jumps(rates_),
                                                    {frac_, x_}, static_cast<double>(n) + 1.0);
  }
  double lower_tail_bound(long n) const {
    return poisson_fields::detail::upper_tail_bound(poisson_fields::detail::skellam_jumps(rates_).negated(),
                                                    {frac_, x_}, 1.0 - static_cast<double>(n));
  }

  PmfTable table(double tail_tol = kDefaultTailTol) const {
    const long center = static_cast<long>(std::floor(moments().mean));
    const long hi = detail::first_below([&](long n) { return upper_tail_bound(n); }, center, tail_tol / 2);
    const long lo = -detail::first_below([&](long m) { return lower_tail_bound(-m); }, -center, tail_tol / 2);
    std::vector<std::pair<long, double>> marks;
    const double total = rates_.total();
    for (std::size_t j = 0; j < rates_.k(); ++j) {
      marks.emplace_back(static_cast<long>(j + 1), rates_.plus[j] / total);
      marks.emplace_back(-static_cast<long>(j + 1), rates_.minus[j] / total);
    }
    PmfTable t = detail::compound_table(marks, wright_, total * x_, k_max_, lo, hi);
    t.tail_mass_bound = upper_tail_bound(hi) + lower_tail_bound(lo) + k_tail_;
    return t;
  }

 private:
  SkellamRates rates_;
  FracOrders frac_;
  double tol_;
  double x_;
  detail::WrightCache wright_;
  long k_max_ = 0;
  double k_tail_ = 0.0;
};

inline double fgspp_pmf(const SkellamRates& rates, FracOrders frac, double s, double t, long n,
                        double tol = 1e-12) {
  return FgsppModel(rates, frac, s, t, tol).pmf(n).value;
}

inline double fgspp_pgf(const SkellamRates& rates, FracOrders frac, double s, double t, double z,
                        double tol = 1e-12) {
  return FgsppModel(rates, frac, s, t, tol).pgf(z).value;
}

// ------------------------------------------------------- path integrals

/// Moments of ∫₀ˢ∫₀ᵗ M(u,v) du dv.
inline Moments integral_moments(const RateVector& rates, double s, double t) {
  detail::require(s >= 0.0 && t >= 0.0, "integral_moments: s, t >= 0");
  const double a = s * t;
  return {rates.moment(1) * a * a / 4.0, rates.moment(2) * a * a * a / 9.0};
}

}  // namespace poisson_fields::model

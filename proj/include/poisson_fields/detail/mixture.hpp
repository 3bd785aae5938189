#pragma once

// Laws of the form X = Σ_v v·Poisson(rate_v · A) with a random area
// A = x·U·V, U = Lᵅ(1), V = Lᵝ(1) independent (A = x when α = β = 1).
// Used for tail bounds and raw moments of every family.

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "poisson_fields/specfun.hpp"
#include "poisson_fields/types.hpp"

namespace poisson_fields::detail {

struct JumpLaw {
  std::vector<std::pair<double, double>> jumps;  // (jump value, rate per unit area)

  /// Σ rate (e^{u v} − 1).
  double psi(double u) const {
    double s = 0.0;
    for (const auto& [v, r] : jumps) s += r * std::expm1(u * v);
    return s;
  }
  double max_abs_jump() const {
    double m = 0.0;
    for (const auto& [v, r] : jumps) m = std::max(m, std::abs(v));
    return m;
  }
  bool non_negative() const {
    return std::all_of(jumps.begin(), jumps.end(), [](const auto& p) { return p.first >= 0.0; });
  }
  JumpLaw negated() const {
    JumpLaw out = *this;
    for (auto& p : out.jumps) p.first = -p.first;
    return out;
  }
};

inline JumpLaw batch_jumps(const RateVector& rates) {
  JumpLaw law;
  for (std::size_t j = 0; j < rates.k(); ++j) law.jumps.emplace_back(double(j + 1), rates[j]);
  return law;
}

inline JumpLaw skellam_jumps(const SkellamRates& rates) {
  JumpLaw law;
  for (std::size_t j = 0; j < rates.k(); ++j) {
    law.jumps.emplace_back(double(j + 1), rates.plus[j]);
    law.jumps.emplace_back(-double(j + 1), rates.minus[j]);
  }
  return law;
}

struct ClockLaw {
  FracOrders frac;
  double x = 1.0;  // sᵅ tᵝ, or the plain area in the classical case

  /// E[Aⁱ] = xⁱ (i!)² / (Γ(αi+1) Γ(βi+1)).
  double area_moment(int i) const {
    const double di = i;
    const double l = di * std::log(x) + 2.0 * std::lgamma(di + 1.0) -
                     std::lgamma(frac.alpha * di + 1.0) - std::lgamma(frac.beta * di + 1.0);
    return std::exp(l);
  }

  /// log E[exp(w A / x)]; +inf where the transform diverges.
  double log_mixture_mgf(double w) const {
    if (frac.classical()) return w;
    if (w == 0.0) return 0.0;
    if (w < 0.0) {
      try {
        const auto r = specfun::wright_2psi2(
            {{{1.0, 1.0}, {1.0, 1.0}}, {{1.0, frac.alpha}, {1.0, frac.beta}}}, w, 1e-13);
        return r.value > 0.0 ? std::log(r.value) : -std::numeric_limits<double>::infinity();
      } catch (const Error&) {
        return std::numeric_limits<double>::infinity();
      }
    }
    // Positive terms r!/(Γ(αr+1)Γ(βr+1)) w^r, summed in log space.
    const double delta = frac.alpha + frac.beta - 2.0;
    const double lw = std::log(w);
    if (delta < -1.0 - 1e-12) return std::numeric_limits<double>::infinity();
    if (delta <= -1.0 + 1e-12) {
      const double rho = std::pow(frac.alpha, frac.alpha) * std::pow(frac.beta, frac.beta);
      if (w >= rho) return std::numeric_limits<double>::infinity();
    }
    double m = 0.0;  // running max of log terms; r = 0 term is log 1
    double acc = 1.0;
    double prev = 0.0;
    for (int r = 1; r < 200000; ++r) {
      const double dr = r;
      const double l = std::lgamma(dr + 1.0) - std::lgamma(frac.alpha * dr + 1.0) -
                       std::lgamma(frac.beta * dr + 1.0) + dr * lw;
      if (l > m) {
        acc = acc * std::exp(m - l) + 1.0;
        m = l;
      } else {
        acc += std::exp(l - m);
      }
      if (l < prev && l < m - 40.0) {
        // Log-concave terms: the remaining tail is below a geometric series.
        const double q = std::exp(l - prev);
        return m + std::log(acc + std::exp(l - m) * q / (1.0 - q));
      }
      prev = l;
    }
    return std::numeric_limits<double>::infinity();
  }
};

/// E[X^m] for m = 0..m_max via the cumulant recursion, conditional on A,
/// then integrated against the area moments.
inline std::vector<double> raw_moments(const JumpLaw& law, const ClockLaw& clock, int m_max) {
  std::vector<double> cum(static_cast<std::size_t>(m_max) + 1, 0.0);
  for (int i = 1; i <= m_max; ++i) {
    for (const auto& [v, r] : law.jumps) cum[i] += r * std::pow(v, i);
  }
  // poly[m][i]: coefficient of Aⁱ in E[X^m | A].
  std::vector<std::vector<double>> poly(m_max + 1, std::vector<double>(m_max + 1, 0.0));
  poly[0][0] = 1.0;
  std::vector<std::vector<double>> binom(m_max + 1, std::vector<double>(m_max + 1, 0.0));
  for (int n = 0; n <= m_max; ++n) {
    binom[n][0] = 1.0;
    for (int r = 1; r <= n; ++r) binom[n][r] = binom[n - 1][r - 1] + (r <= n - 1 ? binom[n - 1][r] : 0.0);
  }
  for (int m = 1; m <= m_max; ++m) {
    for (int i = 1; i <= m; ++i) {
      const double c = binom[m - 1][i - 1] * cum[i];
      for (int d = 0; d + 1 <= m_max; ++d) poly[m][d + 1] += c * poly[m - i][d];
    }
  }
  std::vector<double> out(static_cast<std::size_t>(m_max) + 1, 0.0);
  for (int m = 0; m <= m_max; ++m) {
    double s = 0.0;
    for (int d = 0; d <= m; ++d) {
      if (poly[m][d] != 0.0) s += poly[m][d] * clock.area_moment(d);
    }
    out[m] = s;
  }
  return out;
}

/// Upper bound on P(X ≥ threshold), threshold > 0: the smaller of a
/// Chernoff bound and a moment (Markov) bound.
inline double upper_tail_bound(const JumpLaw& law, const ClockLaw& clock, double threshold) {
  if (threshold <= 0.0) return 1.0;
  double best = 1.0;

  auto objective = [&](double u) {
    const double w = clock.x * law.psi(u);
    const double l = clock.log_mixture_mgf(w);
    return l - u * threshold;
  };
  const double vmax = std::max(law.max_abs_jump(), 1e-300);
  double hi = 0.5 / vmax;
  double f_hi = objective(hi);
  if (std::isfinite(f_hi)) {
    for (int i = 0; i < 12; ++i) {
      const double next = 2.0 * hi;
      const double f_next = objective(next);
      if (!std::isfinite(f_next) || f_next >= f_hi) break;
      hi = next;
      f_hi = f_next;
    }
    double a = 0.0;
    double b = 2.0 * hi;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    auto safe = [&](double u) {
      const double v = objective(u);
      return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };
    for (int it = 0; it < 60; ++it) {
      const double m1 = b - g * (b - a);
      const double m2 = a + g * (b - a);
      if (safe(m1) <= safe(m2)) {
        b = m2;
      } else {
        a = m1;
      }
    }
    const double f = std::min(safe(0.5 * (a + b)), f_hi);
    if (std::isfinite(f)) best = std::min(best, std::exp(f));
  }

  constexpr int kMaxMoment = 48;
  const auto mom = raw_moments(law, clock, kMaxMoment);
  const bool signed_law = !law.non_negative();
  for (int m = 1; m <= kMaxMoment; ++m) {
    if (signed_law && m % 2 == 1) continue;
    const double e = mom[m];
    if (!std::isfinite(e) || e <= 0.0) continue;
    const double b = std::exp(std::log(e) - m * std::log(threshold));
    best = std::min(best, b);
  }
  return best;
}

}  // namespace poisson_fields::detail

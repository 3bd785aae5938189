#pragma once

// Special functions behind the closed-form distributions: Fox-Wright series,
// Mittag-Leffler functions, modified Bessel I and term-wise Caputo factors.
//
// Every series is summed in log-gamma space with explicit sign tracking.
// For negative arguments where cancellation would eat the tolerance, the
// Fox-Wright family is evaluated through its Mellin-Barnes integral instead.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "poisson_fields/errors.hpp"

namespace poisson_fields::specfun {

inline constexpr double kDefaultTol = 1e-12;
inline constexpr std::size_t kDefaultMaxTerms = 20000;

enum class Method { series, mellin_barnes };

inline const char* to_string(Method m) {
  return m == Method::series ? "series" : "mellin_barnes";
}

struct SeriesResult {
  double value = 0.0;
  std::size_t terms_used = 0;
  /// Bound on the omitted tail plus accumulated rounding, absolute.
  double truncation_bound = 0.0;
  Method method = Method::series;
};

/// `tol` is absolute for values of magnitude ≤ 1 and relative above.
struct SeriesOptions {
  double tol = kDefaultTol;
  std::size_t max_terms = kDefaultMaxTerms;
};

/// One Γ(offset + slope·r) factor of a Fox-Wright coefficient.
struct WrightPair {
  double offset;
  double slope;
};

struct WrightParams {
  std::vector<WrightPair> upper;
  std::vector<WrightPair> lower;
};

struct SignedLog {
  double log_abs;
  int sign;  // 0 encodes an exact zero
};

inline bool is_gamma_pole(double x) { return x <= 0.0 && x == std::floor(x); }

/// log|Γ(x)| and sign(Γ(x)); throws at poles.
inline SignedLog log_gamma_signed(double x) {
  if (is_gamma_pole(x)) throw InvalidParams("gamma pole at " + std::to_string(x));
  int s = 1;
  const double l = ::lgamma_r(x, &s);
  return {l, s};
}

/// log|1/Γ(x)| and its sign; zero at the poles of Γ.
inline SignedLog log_rgamma_signed(double x) {
  if (is_gamma_pole(x)) return {-std::numeric_limits<double>::infinity(), 0};
  const SignedLog g = log_gamma_signed(x);
  return {-g.log_abs, g.sign};
}

inline double log_gamma(double x) {
  const SignedLog g = log_gamma_signed(x);
  if (g.sign < 0) throw InvalidParams("log_gamma of negative Gamma value");
  return g.log_abs;
}

namespace detail {

using cplx = std::complex<double>;

/// log sin(πz) without overflow for large |Im z|.
inline cplx log_sin_pi(cplx z) {
  const cplx w = std::numbers::pi * z;
  const double v = w.imag();
  if (std::abs(v) < 5.0) return std::log(std::sin(w));
  const cplx i(0.0, 1.0);
  if (v > 0) {
    // sin w = (i/2) e^{-iw} (1 - e^{2iw}), |e^{2iw}| = e^{-2v}
    return std::log(i / 2.0) - i * w + std::log(1.0 - std::exp(2.0 * i * w));
  }
  return std::log(-i / 2.0) + i * w + std::log(1.0 - std::exp(-2.0 * i * w));
}

/// Principal-branch-agnostic log Γ(z); only exp(log_gamma) is meaningful.
inline cplx log_gamma(cplx z) {
  if (z.real() < 0.5) {
    return std::log(std::numbers::pi) - log_sin_pi(z) - log_gamma(1.0 - z);
  }
  cplx shift(0.0, 0.0);
  while (std::abs(z) < 15.0) {
    shift += std::log(z);
    z += 1.0;
  }
  static constexpr double c[] = {1.0 / 12,   -1.0 / 360,          1.0 / 1260,
                                 -1.0 / 1680, 1.0 / 1188,         -691.0 / 360360,
                                 1.0 / 156,  -3617.0 / 122400};
  const cplx zi = 1.0 / z;
  const cplx zi2 = zi * zi;
  cplx series = 0.0;
  cplx p = zi;
  for (double ck : c) {
    series += ck * p;
    p *= zi2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * std::numbers::pi) + series - shift;
}

/// Neumaier-compensated accumulator.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct Term {
  double log_abs;    // -inf for an exact zero
  int sign;
  double log_scale;  // magnitude of the log-space work, drives rounding estimate
};

/// Thrown internally when cancellation would exceed the tolerance.
struct IllConditioned {};

/// Sums Σ t_r. Stops once three consecutive magnitudes decreased, the latest
/// term is below tol, and the geometric tail bound from the last ratio
/// (floored by `ratio_limit`, the asymptotic ratio) is below tol.
/// Log-concave terms make the ratio non-increasing, so the bound holds.
template <class TermFn>
SeriesResult sum_series(TermFn&& term, const SeriesOptions& opt, double ratio_limit,
                        bool abort_on_cancellation) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  CompensatedSum acc;
  double rounding = 0.0;
  double prev_log = std::numeric_limits<double>::infinity();
  double prev_ratio = std::numeric_limits<double>::infinity();
  int streak = 0;
  for (std::size_t r = 0; r < opt.max_terms; ++r) {
    const Term t = term(r);
    if (t.log_abs > 700.0) {
      if (abort_on_cancellation) throw IllConditioned{};
      throw NonConvergence("series term overflows double precision");
    }
    const double mag = t.sign == 0 ? 0.0 : std::exp(t.log_abs);
    acc.add(t.sign * mag);
    rounding += mag * eps * (8.0 + t.log_scale);
    if (abort_on_cancellation && rounding > opt.tol * std::max(1.0, std::abs(acc.value()))) {
      throw IllConditioned{};
    }
    double ratio = std::numeric_limits<double>::infinity();
    if (t.sign != 0 && std::isfinite(prev_log)) ratio = std::exp(t.log_abs - prev_log);
    if (t.log_abs < prev_log) {
      ++streak;
    } else {
      streak = 0;
    }
    if (t.sign == 0 && r > 0 && !std::isfinite(prev_log)) {
      // Two consecutive exact zeros: only occurs for terminating series.
      ++streak;
    }
    const double scaled_tol = opt.tol * std::max(1.0, std::abs(acc.value()));
    if (streak >= 3 && mag <= scaled_tol) {
      if (t.sign == 0) {
        return {acc.value(), r + 1, rounding, Method::series};
      }
      const double q = std::max(ratio, ratio_limit);
      if (q < 1.0 && (ratio_limit > 0.0 || ratio <= prev_ratio * (1.0 + 1e-12))) {
        const double tail = mag * q / (1.0 - q);
        if (tail <= scaled_tol) return {acc.value(), r + 1, tail + rounding, Method::series};
      }
    }
    prev_log = t.sign == 0 ? -std::numeric_limits<double>::infinity() : t.log_abs;
    prev_ratio = ratio;
  }
  throw NonConvergence("series did not reach tolerance within " + std::to_string(opt.max_terms) +
                       " terms");
}

/// Convergence class of Σ ΠΓ(a+αr)/ΠΓ(b+βr) x^r/r!.
struct Convergence {
  bool entire;
  double radius;  // valid when !entire; 0 means divergent for x != 0
};

inline Convergence classify(const WrightParams& p) {
  double delta = 0.0;
  for (const auto& l : p.lower) delta += l.slope;
  for (const auto& u : p.upper) delta -= u.slope;
  if (delta > -1.0 + 1e-12) return {true, std::numeric_limits<double>::infinity()};
  if (delta < -1.0 - 1e-12) return {false, 0.0};
  double log_rho = 0.0;
  for (const auto& u : p.upper) log_rho -= u.slope * std::log(std::abs(u.slope));
  for (const auto& l : p.lower) log_rho += l.slope * std::log(std::abs(l.slope));
  return {false, std::exp(log_rho)};
}

inline Term wright_term(const WrightParams& p, double log_abs_x, bool negative, std::size_t r,
                        double log_scale = 0.0) {
  const double rr = static_cast<double>(r);
  double l = -log_scale;
  double scale = 0.0;
  int sign = (negative && (r % 2 == 1)) ? -1 : 1;
  for (const auto& u : p.upper) {
    const SignedLog g = log_gamma_signed(u.offset + u.slope * rr);
    l += g.log_abs;
    scale += std::abs(g.log_abs);
    sign *= g.sign;
  }
  for (const auto& w : p.lower) {
    const SignedLog g = log_rgamma_signed(w.offset + w.slope * rr);
    if (g.sign == 0) return {-std::numeric_limits<double>::infinity(), 0, 0.0};
    l += g.log_abs;
    scale += std::abs(g.log_abs);
    sign *= g.sign;
  }
  const double lf = std::lgamma(rr + 1.0);
  l -= lf;
  scale += lf;
  if (r > 0) {
    l += rr * log_abs_x;
    scale += std::abs(rr * log_abs_x);
  }
  return {l, sign, scale};
}

/// Mellin-Barnes evaluation of Σ_r ΠΓ(a_i+α_i r)/ΠΓ(b_j+β_j r) (−y)^r/r!, y > 0:
///   (1/2πi) ∫ Γ(z) ΠΓ(a_i−α_i z)/ΠΓ(b_j−β_j z) y^{−z} dz,  0 < Re z < min a_i/α_i.
/// Conjugate symmetry reduces it to (1/π)∫₀^∞ Re f; trapezoid rule in the
/// analytic strip converges geometrically in the step.
inline bool mellin_applicable(const WrightParams& p) {
  double kappa = 1.0;
  for (const auto& u : p.upper) {
    if (!(u.slope > 0.0) || !(u.offset > 0.0)) return false;
    kappa += u.slope;
  }
  for (const auto& l : p.lower) {
    if (l.slope < 0.0) return false;
    kappa -= l.slope;
  }
  return kappa > 1e-9;
}

inline SeriesResult mellin_barnes(const WrightParams& p, double y, double log_scale = 0.0) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double log_y = std::log(y);
  double c_max = std::numeric_limits<double>::infinity();
  for (const auto& u : p.upper) c_max = std::min(c_max, u.offset / u.slope);

  auto log_f = [&](cplx z) {
    cplx acc = log_gamma(z) - z * log_y - log_scale;
    for (const auto& u : p.upper) acc += log_gamma(u.offset - u.slope * z);
    for (const auto& l : p.lower) acc -= log_gamma(l.offset - l.slope * z);
    return acc;
  };

  // Abscissa: minimise the integrand magnitude slightly off the real axis.
  const double margin = std::min(0.3, 0.25 * c_max);
  const double lo = margin;
  const double hi = c_max - margin;
  auto objective = [&](double c) { return log_f(cplx(c, 0.5)).real(); };
  constexpr int kGrid = 24;
  double best_c = 0.5 * (lo + hi);
  double best_v = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kGrid; ++i) {
    const double c = lo + (hi - lo) * i / kGrid;
    const double v = objective(c);
    if (v < best_v) {
      best_v = v;
      best_c = c;
    }
  }
  {
    const double step = (hi - lo) / kGrid;
    double a = std::max(lo, best_c - step);
    double b = std::min(hi, best_c + step);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 16; ++it) {
      const double m1 = b - g * (b - a);
      const double m2 = a + g * (b - a);
      if (objective(m1) < objective(m2)) {
        b = m2;
      } else {
        a = m1;
      }
    }
    best_c = 0.5 * (a + b);
  }
  const double c = best_c;
  const double d = std::min(c, c_max - c);
  // Magnitudes are taken relative to the real-axis value so deep underflow
  // of the result does not stall the decay test.
  const double shift = log_f(cplx(c, 0.0)).real();
  // Step from the strip width; refined until the integrand is resolved.
  double h = 2.0 * std::numbers::pi * d / 40.0;
  constexpr std::size_t kMinNodes = 96;
  constexpr std::size_t kMaxNodes = 400000;
  for (int refine = 0;; ++refine) {
    CompensatedSum fine;
    CompensatedSum coarse;
    double abs_sum = 0.0;
    double max_abs = 0.0;
    double scale = 0.0;
    int decreasing = 0;
    double prev = std::numeric_limits<double>::infinity();
    std::size_t m = 0;
    for (; m < kMaxNodes; ++m) {
      const double tau = h * static_cast<double>(m);
      const cplx lf = log_f(cplx(c, tau));
      const double w = m == 0 ? 0.5 : 1.0;
      double re = 0.0;
      double mag = 0.0;
      if (std::isfinite(lf.real())) {
        mag = std::exp(lf.real() - shift);
        re = mag * std::cos(lf.imag());
        scale += w * mag * (std::abs(lf.real()) + std::abs(lf.imag()));
      }
      fine.add(w * re);
      if (m % 2 == 0) coarse.add(w * re);
      abs_sum += w * mag;
      max_abs = std::max(max_abs, mag);
      decreasing = mag < prev ? decreasing + 1 : 0;
      prev = mag;
      if (m > 8 && decreasing >= 4 && mag < max_abs * 1e-19) break;
    }
    if (m == kMaxNodes) throw NonConvergence("Mellin-Barnes contour sum did not decay");
    if (m < kMinNodes && refine < 8) {
      h *= static_cast<double>(m + 1) / static_cast<double>(2 * kMinNodes);
      continue;
    }
    const double unit = std::exp(shift) * h / std::numbers::pi;
    const double value = fine.value() * unit;
    const double coarse_value = coarse.value() * 2.0 * unit;
    const double l1 = abs_sum * unit;
    // Trapezoid error at step h is roughly the square of the 2h error, relative to l1.
    const double diff = std::abs(value - coarse_value);
    const double disc = l1 > 0.0 ? diff * (diff / l1) : 0.0;
    const double rounding = eps * (16.0 * l1 + scale * unit);
    const double bound = disc + rounding + max_abs * 1e-19 * unit * std::numbers::pi;
    return {value, m + 1, bound, Method::mellin_barnes};
  }
}

inline double leading_term(const WrightParams& p, double log_scale = 0.0) {
  double l = -log_scale;
  int sign = 1;
  for (const auto& u : p.upper) {
    const SignedLog g = log_gamma_signed(u.offset);
    l += g.log_abs;
    sign *= g.sign;
  }
  for (const auto& w : p.lower) {
    const SignedLog g = log_rgamma_signed(w.offset);
    if (g.sign == 0) return 0.0;
    l += g.log_abs;
    sign *= g.sign;
  }
  return sign * std::exp(l);
}

/// Generic Fox-Wright evaluation with route selection.
/// Returns the value multiplied by e^{-log_scale}; the scale keeps large
/// values representable and tolerances are relative to the scaled value.
inline SeriesResult fox_wright(const WrightParams& p, double x, const SeriesOptions& opt,
                               double log_scale = 0.0) {
  for (const auto& u : p.upper) {
    if (u.slope == 0.0) throw InvalidParams("Wright upper slope must be non-zero");
  }
  for (const auto& l : p.lower) {
    if (l.slope == 0.0) throw InvalidParams("Wright lower slope must be non-zero");
  }
  if (!(opt.tol > 0.0)) throw InvalidParams("tol must be positive");
  if (!std::isfinite(x)) throw InvalidParams("argument must be finite");
  if (x == 0.0) return {leading_term(p, log_scale), 1, 0.0, Method::series};

  const Convergence conv = classify(p);
  const bool series_converges = conv.entire || std::abs(x) < conv.radius;
  const double ratio_limit = conv.entire ? 0.0 : std::abs(x) / conv.radius;
  const double log_abs_x = std::log(std::abs(x));
  const bool negative = x < 0.0;
  auto term = [&](std::size_t r) { return wright_term(p, log_abs_x, negative, r, log_scale); };

  if (!negative) {
    if (!series_converges) {
      throw NonConvergence("Wright series diverges at this positive argument");
    }
    return sum_series(term, opt, ratio_limit, false);
  }

  const bool mellin_ok = mellin_applicable(p);
  const bool slow = !conv.entire && ratio_limit > 0.9;
  if (series_converges && !(slow && mellin_ok)) {
    try {
      return sum_series(term, opt, ratio_limit, mellin_ok);
    } catch (const IllConditioned&) {
    } catch (const NonConvergence&) {
      if (!mellin_ok) throw;
    }
  }
  if (!mellin_ok) {
    throw NonConvergence("Wright series diverges and no contour representation applies");
  }
  SeriesResult mb = mellin_barnes(p, -x, log_scale);
  if (!(mb.truncation_bound <= std::max(opt.tol, 1e-13) * std::max(1.0, std::abs(mb.value)))) {
    throw NonConvergence("Mellin-Barnes route could not reach tolerance");
  }
  return mb;
}

}  // namespace detail

/// ₂Ψ₂[(a₁,α₁),(a₂,α₂);(b₁,β₁),(b₂,β₂) | x].
inline SeriesResult wright_2psi2(const WrightParams& params, double x, double tol = kDefaultTol,
                                 std::size_t max_terms = kDefaultMaxTerms) {
  if (params.upper.size() != 2 || params.lower.size() != 2) {
    throw InvalidParams("wright_2psi2 needs exactly two upper and two lower pairs");
  }
  return detail::fox_wright(params, x, {tol, max_terms});
}

/// ₂Ψ₂ at x times e^{-log_scale}, for values beyond double range.
inline SeriesResult wright_2psi2_scaled(const WrightParams& params, double x, double log_scale,
                                        double tol = kDefaultTol,
                                        std::size_t max_terms = kDefaultMaxTerms) {
  if (params.upper.size() != 2 || params.lower.size() != 2) {
    throw InvalidParams("wright_2psi2 needs exactly two upper and two lower pairs");
  }
  return detail::fox_wright(params, x, {tol, max_terms}, log_scale);
}

/// E_α(x) = Σ x^r/Γ(αr+1).
inline SeriesResult mittag_leffler(double alpha, double x, double tol = kDefaultTol,
                                   std::size_t max_terms = kDefaultMaxTerms) {
  poisson_fields::detail::require(alpha > 0.0 && alpha <= 1.0, "mittag_leffler: alpha in (0,1]");
  return detail::fox_wright({{{1.0, 1.0}}, {{1.0, alpha}}}, x, {tol, max_terms});
}

/// E^γ_{α,β}(x) = Σ Γ(γ+r) x^r/(Γ(γ) Γ(αr+β) r!).
inline SeriesResult mittag_leffler_3(double alpha, double beta, double gamma, double x,
                                     double tol = kDefaultTol,
                                     std::size_t max_terms = kDefaultMaxTerms) {
  poisson_fields::detail::require(alpha > 0.0, "mittag_leffler_3: alpha > 0");
  if (is_gamma_pole(gamma)) throw InvalidParams("mittag_leffler_3: gamma at a pole of Gamma");
  const SignedLog g = log_gamma_signed(gamma);
  const double inv = g.sign * std::exp(-g.log_abs);
  SeriesResult r =
      detail::fox_wright({{{gamma, 1.0}}, {{beta, alpha}}}, x, {tol / std::abs(inv), max_terms});
  r.value *= inv;
  r.truncation_bound *= std::abs(inv);
  return r;
}

/// I_ν(x) = Σ (x/2)^{2m+ν}/(m! Γ(m+ν+1)).
inline SeriesResult bessel_i(double nu, double x, double tol = kDefaultTol,
                             std::size_t max_terms = kDefaultMaxTerms) {
  poisson_fields::detail::require(nu >= 0.0, "bessel_i: nu >= 0");
  poisson_fields::detail::require(x >= 0.0, "bessel_i: x >= 0");
  if (x == 0.0) return {nu == 0.0 ? 1.0 : 0.0, 1, 0.0, Method::series};
  const double lh = std::log(x / 2.0);
  auto term = [&](std::size_t m) {
    const double mm = static_cast<double>(m);
    const double a = std::lgamma(mm + 1.0);
    const double b = std::lgamma(mm + nu + 1.0);
    const double p = (2.0 * mm + nu) * lh;
    return detail::Term{p - a - b, 1, std::abs(p) + a + b};
  };
  return detail::sum_series(term, {tol, max_terms}, 0.0, false);
}

/// c with D^β t^p = c t^{p−β} (Caputo); zero for constants.
inline double caputo_term_derivative(double p, double beta) {
  poisson_fields::detail::require(p >= 0.0, "caputo_term_derivative: p >= 0");
  poisson_fields::detail::require(beta > 0.0 && beta <= 1.0, "caputo_term_derivative: beta in (0,1]");
  if (p == 0.0) return 0.0;
  const SignedLog num = log_gamma_signed(p + 1.0);
  const SignedLog den = log_gamma_signed(p - beta + 1.0);
  return num.sign * den.sign * std::exp(num.log_abs - den.log_abs);
}

}  // namespace poisson_fields::specfun

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "poisson_fields/errors.hpp"

namespace poisson_fields {

/// Batch rates λ_1..λ_k; λ_j is the rate of batches of j simultaneous points.
class RateVector {
 public:
  RateVector() = default;
  RateVector(std::initializer_list<double> rates) : RateVector(std::vector<double>(rates)) {}
  explicit RateVector(std::vector<double> rates) : rates_(std::move(rates)) {
    detail::require(!rates_.empty(), "RateVector needs k >= 1");
    for (double r : rates_) {
      detail::require(std::isfinite(r) && r > 0.0, "RateVector entries must be positive");
    }
  }

  std::size_t k() const { return rates_.size(); }
  double operator[](std::size_t j) const { return rates_[j]; }
  /// λ for batch size `size` (1-based).
  double at_size(std::size_t size) const { return rates_.at(size - 1); }
  const std::vector<double>& values() const { return rates_; }

  double total() const {
    double s = 0.0;
    for (double r : rates_) s += r;
    return s;
  }
  /// Σ j^p λ_j.
  double moment(int p) const {
    double s = 0.0;
    for (std::size_t j = 0; j < rates_.size(); ++j) {
      s += std::pow(static_cast<double>(j + 1), p) * rates_[j];
    }
    return s;
  }

 private:
  std::vector<double> rates_;
};

/// Axis-aligned box lo < x ≤ hi in ℝᵈ₊; anchored boxes have lo = 0.
class Window {
 public:
  static Window anchored(std::vector<double> corner) {
    detail::require(!corner.empty(), "Window needs dimension >= 1");
    for (double c : corner) detail::require(c >= 0.0, "Window corner must be non-negative");
    Window w;
    w.lo_.assign(corner.size(), 0.0);
    w.hi_ = std::move(corner);
    return w;
  }
  static Window rectangle(double s, double t) { return anchored({s, t}); }
  /// (s, s'] × (t, t'].
  static Window increment(double s, double s2, double t, double t2) {
    detail::require(s >= 0.0 && t >= 0.0, "increment corners must be non-negative");
    detail::require(s <= s2 && t <= t2, "increment requires s <= s' and t <= t'");
    Window w;
    w.lo_ = {s, t};
    w.hi_ = {s2, t2};
    return w;
  }

  std::size_t dimension() const { return hi_.size(); }
  const std::vector<double>& lower() const { return lo_; }
  const std::vector<double>& upper() const { return hi_; }
  bool is_anchored() const {
    return std::all_of(lo_.begin(), lo_.end(), [](double v) { return v == 0.0; });
  }

  double measure() const {
    double m = 1.0;
    for (std::size_t i = 0; i < hi_.size(); ++i) m *= hi_[i] - lo_[i];
    return m;
  }

  double intersection_measure(const Window& other) const {
    detail::require(dimension() == other.dimension(), "windows must share a dimension");
    double m = 1.0;
    for (std::size_t i = 0; i < hi_.size(); ++i) {
      const double a = std::max(lo_[i], other.lo_[i]);
      const double b = std::min(hi_[i], other.hi_[i]);
      if (b <= a) return 0.0;
      m *= b - a;
    }
    return m;
  }

  bool contains(const std::vector<double>& x) const {
    if (x.size() != hi_.size()) return false;
    for (std::size_t i = 0; i < hi_.size(); ++i) {
      if (!(x[i] > lo_[i] || (lo_[i] == 0.0 && x[i] >= 0.0)) || x[i] > hi_[i]) return false;
    }
    return true;
  }

 private:
  std::vector<double> lo_;
  std::vector<double> hi_;
};

/// Orders of the two inverse-stable clocks; α = β = 1 is the classical field.
struct FracOrders {
  double alpha = 1.0;
  double beta = 1.0;

  FracOrders() = default;
  FracOrders(double a, double b) : alpha(a), beta(b) {
    detail::require(a > 0.0 && a <= 1.0, "alpha must lie in (0,1]");
    detail::require(b > 0.0 && b <= 1.0, "beta must lie in (0,1]");
  }
  bool classical() const { return alpha == 1.0 && beta == 1.0; }
  /// sᵅ tᵝ.
  double clock_area(double s, double t) const { return std::pow(s, alpha) * std::pow(t, beta); }
};

/// Rates of the positive (plus) and negative (minus) batch fields.
struct SkellamRates {
  RateVector plus;
  RateVector minus;

  SkellamRates() = default;
  SkellamRates(RateVector p, RateVector m) : plus(std::move(p)), minus(std::move(m)) {
    detail::require(plus.k() == minus.k(), "SkellamRates: plus and minus must share k");
  }
  std::size_t k() const { return plus.k(); }
  double total() const { return plus.total() + minus.total(); }
  SkellamRates swapped() const { return {minus, plus}; }
};

/// Probabilities on the contiguous support [first, first + probs.size()).
struct PmfTable {
  long first = 0;
  std::vector<double> probs;
  /// Bound on mass outside the support plus mass dropped by series truncation.
  double tail_mass_bound = 0.0;
  /// Bound on the summed absolute evaluation error of the listed entries.
  double value_error_bound = 0.0;

  long last() const { return first + static_cast<long>(probs.size()) - 1; }
  double operator()(long n) const {
    if (n < first || n > last()) return 0.0;
    return probs[static_cast<std::size_t>(n - first)];
  }
  double total() const {
    double s = 0.0;
    for (double p : probs) s += p;
    return s;
  }
  double mean() const {
    double s = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) s += probs[i] * static_cast<double>(first + static_cast<long>(i));
    return s;
  }
  double variance() const {
    const double m = mean();
    double s = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      const double d = static_cast<double>(first + static_cast<long>(i)) - m;
      s += probs[i] * d * d;
    }
    return s;
  }
};

}  // namespace poisson_fields

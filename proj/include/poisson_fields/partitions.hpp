#pragma once

// Index sets of the batch-count sums:
//   Θ(k,n)  = {(n_1..n_k) ∈ ℕ₀ᵏ : Σ j n_j = n}
//   Θ̃(k,n) = {(n_1..n_k) ∈ ℤᵏ  : Σ j n_j = n}, truncated to |n_j| ≤ W.
// Both are enumerated in ascending lexicographic order on (n_k, ..., n_1).

#include <boost/math/special_functions/gamma.hpp>

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "poisson_fields/errors.hpp"
#include "poisson_fields/types.hpp"

namespace poisson_fields::partitions {

inline constexpr std::size_t kDefaultCardinalityCap = 10'000'000;

struct Composition {
  std::vector<int> parts;  // parts[j-1] = n_j
};

struct SignedComposition {
  std::vector<int> parts;
  int weight_bound = 0;
};

/// Number of partitions of n into parts of size ≤ k.
inline std::uint64_t restricted_partition_count(int k, int n) {
  std::vector<std::uint64_t> p(static_cast<std::size_t>(n) + 1, 0);
  p[0] = 1;
  for (int part = 1; part <= k; ++part) {
    for (int m = part; m <= n; ++m) p[m] += p[m - part];
  }
  return p[n];
}

namespace detail {

template <class F>
void theta_descend(std::vector<int>& parts, int j, int remaining, F& visit) {
  if (j == 1) {
    parts[0] = remaining;
    visit(static_cast<const std::vector<int>&>(parts));
    return;
  }
  for (int c = 0; c * j <= remaining; ++c) {
    parts[j - 1] = c;
    theta_descend(parts, j - 1, remaining - c * j, visit);
  }
  parts[j - 1] = 0;
}

template <class F>
void signed_descend(std::vector<int>& parts, int j, long remaining, int w, F& visit) {
  if (j == 1) {
    if (remaining >= -w && remaining <= w) {
      parts[0] = static_cast<int>(remaining);
      visit(static_cast<const std::vector<int>&>(parts));
    }
    return;
  }
  // Coordinates below j contribute at most w·(1+...+(j-1)) in absolute value.
  const long reach = static_cast<long>(w) * (j - 1) * j / 2;
  for (int c = -w; c <= w; ++c) {
    const long rest = remaining - static_cast<long>(c) * j;
    if (rest < -reach || rest > reach) continue;
    parts[j - 1] = c;
    signed_descend(parts, j - 1, rest, w, visit);
  }
  parts[j - 1] = 0;
}

}  // namespace detail

/// Calls visit(parts) for every element of Θ(k,n) without materialising the set.
template <class F>
void for_each_theta(int k, int n, F&& visit, std::size_t cap = kDefaultCardinalityCap) {
  poisson_fields::detail::require(k >= 1, "enumerate_theta: k >= 1");
  poisson_fields::detail::require(n >= 0, "enumerate_theta: n >= 0");
  if (restricted_partition_count(k, n) > cap) {
    throw ResourceLimit("Theta(" + std::to_string(k) + "," + std::to_string(n) +
                        ") exceeds the cardinality cap");
  }
  std::vector<int> parts(static_cast<std::size_t>(k), 0);
  detail::theta_descend(parts, k, n, visit);
}

inline std::vector<Composition> enumerate_theta(int k, int n,
                                                std::size_t cap = kDefaultCardinalityCap) {
  std::vector<Composition> out;
  for_each_theta(
      k, n, [&](const std::vector<int>& p) { out.push_back({p}); }, cap);
  return out;
}

/// Calls visit(parts) for every element of Θ̃(k,n) with max|n_j| ≤ W.
template <class F>
void for_each_theta_signed(int k, int n, int w, F&& visit,
                           std::size_t cap = kDefaultCardinalityCap) {
  poisson_fields::detail::require(k >= 1, "enumerate_theta_signed: k >= 1");
  poisson_fields::detail::require(w >= 1 && w >= (n < 0 ? -n : n),
                                  "enumerate_theta_signed: W >= max(1, |n|)");
  std::size_t count = 0;
  auto counted = [&](const std::vector<int>& p) {
    if (++count > cap) throw ResourceLimit("signed Theta enumeration exceeds the cardinality cap");
    visit(p);
  };
  std::vector<int> parts(static_cast<std::size_t>(k), 0);
  detail::signed_descend(parts, k, n, w, counted);
}

inline std::vector<SignedComposition> enumerate_theta_signed(
    int k, int n, int w, std::size_t cap = kDefaultCardinalityCap) {
  std::vector<SignedComposition> out;
  for_each_theta_signed(
      k, n, w, [&](const std::vector<int>& p) { out.push_back({p, w}); }, cap);
  return out;
}

/// P(Poisson(mu) > w).
inline double poisson_upper_tail(double mu, long w) {
  if (mu <= 0.0) return 0.0;
  if (w < 0) return 1.0;
  return boost::math::gamma_p(static_cast<double>(w) + 1.0, mu);
}

/// Bound on the mass dropped by restricting every |n_j| ≤ W: the event
/// |N1_j − N2_j| > W requires N1_j > W or N2_j > W.
inline double signed_truncation_bound(const SkellamRates& rates, double area, int w) {
  poisson_fields::detail::require(area > 0.0, "signed_truncation_bound: area > 0");
  poisson_fields::detail::require(w >= 1, "signed_truncation_bound: W >= 1");
  double total = 0.0;
  for (std::size_t j = 0; j < rates.k(); ++j) {
    total += poisson_upper_tail(rates.plus[j] * area, w);
    total += poisson_upper_tail(rates.minus[j] * area, w);
  }
  return total < 1.0 ? total : 1.0;
}

}  // namespace poisson_fields::partitions

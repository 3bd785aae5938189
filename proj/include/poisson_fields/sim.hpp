#pragma once

// Seeded samplers. Every sampler is a pure function of its arguments and
// the RngStream it advances; batches run on independent stream ids so the
// output does not depend on the number of worker threads.

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <numbers>
#include <random>
#include <thread>
#include <utility>
#include <vector>

#include "poisson_fields/errors.hpp"
#include "poisson_fields/model.hpp"
#include "poisson_fields/types.hpp"

namespace poisson_fields::sim {

using poisson_fields::detail::require;

inline constexpr std::uint64_t kDefaultSeed = 20240601;

/// SplitMix64 with a per-stream odd increment derived from (seed, stream_id).
/// Satisfies UniformRandomBitGenerator, so std distributions accept it.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed = kDefaultSeed, std::uint64_t stream_id = 0)
      : seed_(seed), stream_id_(stream_id) {
    state_ = mix64(seed ^ 0x6a09e667f3bcc909ULL);
    gamma_ = mix_gamma(mix64(seed + 0x9e3779b97f4a7c15ULL) ^ mix64(stream_id ^ 0xbb67ae8584caa73bULL));
    state_ = mix64(state_ ^ stream_id);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += gamma_;
    return mix64(state_);
  }

  /// Uniform on the open interval (0,1).
  double open_uniform() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  static std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  /// Odd increment with enough bit transitions to avoid weak gammas.
  static std::uint64_t mix_gamma(std::uint64_t z) {
    z = mix64(z) | 1ULL;
    const int transitions = std::popcount(z ^ (z >> 1));
    return transitions < 24 ? z ^ 0xaaaaaaaaaaaaaaaaULL : z;
  }

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t state_ = 0;
  std::uint64_t gamma_ = 0;
};

// ---------------------------------------------------------------- counts

inline long poisson_draw(double mean, RngStream& rng) {
  if (mean <= 0.0) return 0;
  return std::poisson_distribution<long>(mean)(rng);
}

inline long binomial_draw(long trials, double p, RngStream& rng) {
  if (trials <= 0 || p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  return std::binomial_distribution<long>(trials, p)(rng);
}

struct MarkedPoint {
  std::vector<double> location;
  int mark = 1;  // batch size j
};

/// Batches inside a window; a point with mark j carries j simultaneous events.
struct PointPattern {
  Window window;
  std::vector<MarkedPoint> points;

  /// Number of points with mark j.
  long component_count(int j) const {
    return std::count_if(points.begin(), points.end(), [j](const MarkedPoint& p) { return p.mark == j; });
  }
  /// Σ marks over points inside `sub`.
  long count_in(const Window& sub) const {
    long c = 0;
    for (const auto& p : points) {
      if (sub.contains(p.location)) c += p.mark;
    }
    return c;
  }
  long total() const { return count_in(window); }
};

inline long sample_prf(double rate, double area, RngStream& rng) {
  require(rate > 0.0, "sample_prf: rate > 0");
  require(area >= 0.0, "sample_prf: area >= 0");
  return poisson_draw(rate * area, rng);
}

inline void scatter_uniform(PointPattern& pattern, long count, int mark, RngStream& rng) {
  const auto& lo = pattern.window.lower();
  const auto& hi = pattern.window.upper();
  for (long i = 0; i < count; ++i) {
    MarkedPoint p;
    p.mark = mark;
    p.location.resize(lo.size());
    // Upper-closed boxes: 1 − U lies in (0,1], so locations lie in (lo, hi].
    for (std::size_t d = 0; d < lo.size(); ++d) {
      p.location[d] = lo[d] + (hi[d] - lo[d]) * (1.0 - rng.open_uniform());
    }
    pattern.points.push_back(std::move(p));
  }
}

inline PointPattern sample_prf_points(double rate, const Window& window, RngStream& rng) {
  PointPattern pattern{window, {}};
  scatter_uniform(pattern, sample_prf(rate, window.measure(), rng), 1, rng);
  return pattern;
}

enum class GprfMethod { superposition, compound };

/// Independent Poisson(λ_j |A|) batch counts N_1..N_k.
inline std::vector<long> sample_gprf_components(const RateVector& rates, double area, RngStream& rng) {
  require(area >= 0.0, "sample_gprf: area >= 0");
  std::vector<long> counts(rates.k());
  for (std::size_t j = 0; j < rates.k(); ++j) counts[j] = poisson_draw(rates[j] * area, rng);
  return counts;
}

inline long weighted_total(const std::vector<long>& components) {
  long m = 0;
  for (std::size_t j = 0; j < components.size(); ++j) m += static_cast<long>(j + 1) * components[j];
  return m;
}

inline long sample_gprf(const RateVector& rates, double area, RngStream& rng,
                        GprfMethod method = GprfMethod::superposition) {
  if (method == GprfMethod::superposition) return weighted_total(sample_gprf_components(rates, area, rng));
  const long n = poisson_draw(rates.total() * area, rng);
  if (n == 0) return 0;
  if (rates.k() == 1) return n;
  std::discrete_distribution<int> jump(rates.values().begin(), rates.values().end());
  long m = 0;
  for (long r = 0; r < n; ++r) m += jump(rng) + 1;
  return m;
}

inline long sample_gprf(const RateVector& rates, const Window& window, RngStream& rng,
                        GprfMethod method = GprfMethod::superposition) {
  return sample_gprf(rates, window.measure(), rng, method);
}

/// Marked pattern whose count_in(B) is a GPRF count for every sub-box B.
inline PointPattern sample_gprf_points(const RateVector& rates, const Window& window, RngStream& rng) {
  PointPattern pattern{window, {}};
  const auto counts = sample_gprf_components(rates, window.measure(), rng);
  for (std::size_t j = 0; j < counts.size(); ++j) scatter_uniform(pattern, counts[j], int(j + 1), rng);
  return pattern;
}

// ---------------------------------------------------------------- thinning

struct ThinResult {
  long kept = 0;
  long removed = 0;
};

/// Keeps each of `count` points independently with probability p.
inline ThinResult thin_prf(long count, double p, RngStream& rng) {
  require(p > 0.0 && p < 1.0, "thin_prf: p in (0,1)");
  require(count >= 0, "thin_prf: count >= 0");
  const long kept = binomial_draw(count, p, rng);
  return {kept, count - kept};
}

/// Each batch of size j is kept whole with probability p_j.
inline ThinResult thin_gprf(const std::vector<long>& components, const std::vector<double>& p, RngStream& rng) {
  require(components.size() == p.size(), "thin_gprf: one probability per batch size");
  ThinResult out;
  for (std::size_t j = 0; j < p.size(); ++j) {
    require(p[j] > 0.0 && p[j] < 1.0, "thin_gprf: p_j in (0,1)");
    const long kept = binomial_draw(components[j], p[j], rng);
    out.kept += static_cast<long>(j + 1) * kept;
    out.removed += static_cast<long>(j + 1) * (components[j] - kept);
  }
  return out;
}

/// Point-level thinning; both parts keep the parent window.
inline std::pair<PointPattern, PointPattern> thin_points(const PointPattern& pattern,
                                                         const std::vector<double>& p, RngStream& rng) {
  PointPattern kept{pattern.window, {}};
  PointPattern removed{pattern.window, {}};
  for (const auto& pt : pattern.points) {
    const std::size_t j = static_cast<std::size_t>(pt.mark - 1);
    require(j < p.size(), "thin_points: mark without a retention probability");
    (rng.open_uniform() < p[j] ? kept : removed).points.push_back(pt);
  }
  return {std::move(kept), std::move(removed)};
}

// ---------------------------------------------------------------- subordinators

/// Standard positive α-stable S with E e^{−uS} = e^{−uᵅ} (Kanter's representation).
inline double sample_positive_stable(double alpha, RngStream& rng) {
  require(alpha > 0.0 && alpha <= 1.0, "stable: alpha in (0,1]");
  if (alpha == 1.0) return 1.0;
  const double u = std::numbers::pi * rng.open_uniform();
  const double e = -std::log(rng.open_uniform());
  const double a = std::sin(alpha * u) / std::pow(std::sin(u), 1.0 / alpha) *
                   std::pow(std::sin((1.0 - alpha) * u), (1.0 - alpha) / alpha);
  return a / std::pow(e, (1.0 - alpha) / alpha);
}

/// Hᵅ(t) = t^{1/α} S.
inline double sample_stable_subordinator(double alpha, double t, RngStream& rng) {
  require(t > 0.0, "stable subordinator: t > 0");
  require(alpha > 0.0 && alpha < 1.0, "stable subordinator: alpha in (0,1)");
  return std::pow(t, 1.0 / alpha) * sample_positive_stable(alpha, rng);
}

/// Lᵅ(t) = (t/S)ᵅ; exactly t when α = 1.
inline double sample_inverse_stable(double alpha, double t, RngStream& rng) {
  require(alpha > 0.0 && alpha <= 1.0, "inverse stable: alpha in (0,1]");
  require(t >= 0.0, "inverse stable: t >= 0");
  if (alpha == 1.0 || t == 0.0) return t;
  return std::pow(t / sample_positive_stable(alpha, rng), alpha);
}

struct SubordinatorPath {
  std::vector<double> grid;
  std::vector<double> values;
  double alpha = 1.0;
};

namespace detail {

/// W with density ∝ w^{−α} p_S(w): Kanter's pair reweighted by S^{−α},
/// i.e. E ~ Gamma(2−α) and U accepted with probability A(U)^{α−1}/sup.
inline double sample_tilted_stable(double alpha, RngStream& rng) {
  const double e = std::gamma_distribution<double>(2.0 - alpha, 1.0)(rng);
  const double log_sup = -alpha * std::log(alpha) - (1.0 - alpha) * std::log1p(-alpha);
  for (;;) {
    const double u = std::numbers::pi * rng.open_uniform();
    // log of sin(u) / (sin(αu)ᵅ sin((1−α)u)^{1−α}), decreasing in u.
    const double log_g = std::log(std::sin(u)) - alpha * std::log(std::sin(alpha * u)) -
                         (1.0 - alpha) * std::log(std::sin((1.0 - alpha) * u));
    if (std::log(rng.open_uniform()) <= log_g - log_sup) {
      const double log_a = (std::log(std::sin(alpha * u)) * alpha +
                            std::log(std::sin((1.0 - alpha) * u)) * (1.0 - alpha) - std::log(std::sin(u))) /
                           (1.0 - alpha);
      return std::exp((1.0 - alpha) / alpha * (log_a - std::log(e)));
    }
  }
}

}  // namespace detail

/// Joint draw of Lᵅ at every grid time. Each passage of H over a level r
/// is generated exactly: the undershoot fraction is Beta(α, 1−α), the
/// passage time given the pre-jump level y is (y/W)ᵅ with W tilted stable,
/// and the jump over the remaining gap g is g·V^{−1/α} with V uniform.
inline SubordinatorPath sample_inverse_stable_path(double alpha, const std::vector<double>& grid,
                                                   RngStream& rng) {
  require(alpha > 0.0 && alpha <= 1.0, "inverse stable path: alpha in (0,1]");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    require(grid[i] >= 0.0, "inverse stable path: grid must be non-negative");
    if (i > 0) require(grid[i] > grid[i - 1], "inverse stable path: grid must be increasing");
  }
  SubordinatorPath path{grid, std::vector<double>(grid.size(), 0.0), alpha};
  if (alpha == 1.0) {
    path.values = grid;
    return path;
  }
  double clock = 0.0;  // current passage time
  double level = 0.0;  // H at that time, the last level crossed
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i];
    if (t > level) {
      const double r = t - level;
      const double ga = std::gamma_distribution<double>(alpha, 1.0)(rng);
      const double gb = std::gamma_distribution<double>(1.0 - alpha, 1.0)(rng);
      const double under = r * ga / (ga + gb);
      if (under > 0.0) clock += std::pow(under / detail::sample_tilted_stable(alpha, rng), alpha);
      level += under + (r - under) * std::pow(rng.open_uniform(), -1.0 / alpha);
    }
    path.values[i] = clock;
  }
  return path;
}

// ---------------------------------------------------------------- fractional fields

inline long sample_fgprf(const RateVector& rates, FracOrders frac, double s, double t, RngStream& rng,
                         GprfMethod method = GprfMethod::superposition) {
  require(s > 0.0 && t > 0.0, "sample_fgprf: s, t > 0");
  const double ls = sample_inverse_stable(frac.alpha, s, rng);
  const double lt = sample_inverse_stable(frac.beta, t, rng);
  return sample_gprf(rates, ls * lt, rng, method);
}

/// Σ_i i·M_i(A) with independent GPRF components per index.
inline double sample_gspp(const std::vector<model::IndexedRates>& family, double area, RngStream& rng) {
  double total = 0.0;
  for (const auto& [index, rates] : family) {
    require(index != 0.0, "sample_gspp: index set must exclude 0");
    total += index * static_cast<double>(sample_gprf(rates, area, rng));
  }
  return total;
}

inline long sample_skellam(const SkellamRates& rates, double area, RngStream& rng) {
  const long plus = sample_gprf(rates.plus, area, rng);
  return plus - sample_gprf(rates.minus, area, rng);
}

inline long sample_fgspp(const SkellamRates& rates, FracOrders frac, double s, double t, RngStream& rng) {
  require(s > 0.0 && t > 0.0, "sample_fgspp: s, t > 0");
  const double ls = sample_inverse_stable(frac.alpha, s, rng);
  const double lt = sample_inverse_stable(frac.beta, t, rng);
  return sample_skellam(rates, ls * lt, rng);
}

/// st Σ_{r ≤ N} X_r U_{r,1} U_{r,2} with N ~ Poisson(Λst) and P(X = j) = λ_j/Λ.
inline double sample_gprf_integral(const RateVector& rates, double s, double t, RngStream& rng) {
  require(s >= 0.0 && t >= 0.0, "sample_gprf_integral: s, t >= 0");
  const double area = s * t;
  const long n = poisson_draw(rates.total() * area, rng);
  if (n == 0) return 0.0;
  std::discrete_distribution<int> jump(rates.values().begin(), rates.values().end());
  double sum = 0.0;
  for (long r = 0; r < n; ++r) {
    const double x = static_cast<double>(jump(rng) + 1);
    sum += x * rng.open_uniform() * rng.open_uniform();
  }
  return area * sum;
}

// ---------------------------------------------------------------- lattice

inline constexpr double kLatticeCellCap = 1e15;

/// Homogeneous cell law on the n-scaled lattice: each cell independently
/// takes value v with probability p_v and 0 otherwise.
struct LatticeConfig {
  long n = 1;
  std::vector<std::pair<long, double>> cell_law;  // (value, probability)

  double nonzero_probability() const {
    double p = 0.0;
    for (const auto& c : cell_law) p += c.second;
    return p;
  }
  void validate() const {
    require(n >= 1, "lattice: n >= 1");
    require(!cell_law.empty(), "lattice: empty cell law");
    for (const auto& [v, p] : cell_law) {
      require(v != 0, "lattice: zero value in cell law");
      require(p > 0.0 && p < 1.0, "lattice: cell probabilities in (0,1)");
    }
    require(nonzero_probability() < 1.0, "lattice: cell probabilities must sum below 1");
  }
};

/// p = λ_j/n² for value j.
inline LatticeConfig lattice_gprf(const RateVector& rates, long n) {
  LatticeConfig c{n, {}};
  const double n2 = static_cast<double>(n) * static_cast<double>(n);
  for (std::size_t j = 0; j < rates.k(); ++j) c.cell_law.emplace_back(long(j + 1), rates[j] / n2);
  c.validate();
  return c;
}

/// Values ±j with probabilities λ_j^{(1)}/n² and λ_j^{(2)}/n².
inline LatticeConfig lattice_skellam(const SkellamRates& rates, long n) {
  LatticeConfig c{n, {}};
  const double n2 = static_cast<double>(n) * static_cast<double>(n);
  for (std::size_t j = 0; j < rates.k(); ++j) {
    c.cell_law.emplace_back(long(j + 1), rates.plus[j] / n2);
    c.cell_law.emplace_back(-long(j + 1), rates.minus[j] / n2);
  }
  c.validate();
  return c;
}

inline long lattice_cells(const LatticeConfig& config, double s, double t) {
  require(s >= 0.0 && t >= 0.0, "lattice: s, t >= 0");
  const double nd = static_cast<double>(config.n);
  const double cells = std::floor(nd * s) * std::floor(nd * t);
  if (cells > kLatticeCellCap) throw ResourceLimit("lattice: cell count exceeds the cap");
  return static_cast<long>(cells);
}

/// Sum over ⌊ns⌋⌊nt⌋ cells. The number of non-zero cells is
/// Binomial(cells, Σp); given that, the values are iid with law p_v/Σp.
inline long sample_lattice_field(const LatticeConfig& config, double s, double t, RngStream& rng) {
  config.validate();
  const long cells = lattice_cells(config, s, t);
  const double q = config.nonzero_probability();
  const long active = binomial_draw(cells, q, rng);
  if (active == 0) return 0;
  std::vector<double> w;
  for (const auto& c : config.cell_law) w.push_back(c.second);
  std::discrete_distribution<std::size_t> value(w.begin(), w.end());
  long sum = 0;
  for (long i = 0; i < active; ++i) sum += config.cell_law[value(rng)].first;
  return sum;
}

// ---------------------------------------------------------------- batches

inline constexpr std::size_t kChunkSize = 4096;

inline unsigned default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

/// Draws `samples` values; chunk c uses RngStream(seed, c), so the output
/// is identical for every thread count.
template <class T, class Draw>
std::vector<T> run_batches(std::size_t samples, std::uint64_t seed, Draw draw, unsigned threads = 0) {
  std::vector<T> out(samples);
  const std::size_t chunks = (samples + kChunkSize - 1) / kChunkSize;
  if (threads == 0) threads = default_threads();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(chunks, 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t c = next.fetch_add(1); c < chunks; c = next.fetch_add(1)) {
      RngStream rng(seed, c);
      const std::size_t end = std::min(samples, (c + 1) * kChunkSize);
      for (std::size_t i = c * kChunkSize; i < end; ++i) out[i] = draw(rng);
    }
  };
  if (threads <= 1) {
    worker();
    return out;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  for (unsigned i = 0; i < threads; ++i) {
    pool.emplace_back([&]() {
      try {
        worker();
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        next.store(chunks);
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

struct SampleSummary {
  double mean = 0.0;
  double variance = 0.0;  // unbiased
  std::size_t count = 0;
  double mean_se() const { return std::sqrt(variance / static_cast<double>(count)); }
  /// Standard error of the sample variance from the fourth central moment.
  double variance_se = 0.0;
};

/// Two-pass moments in index order.
template <class T>
SampleSummary summarize(const std::vector<T>& xs) {
  SampleSummary s;
  s.count = xs.size();
  if (xs.empty()) return s;
  double sum = 0.0;
  for (const auto& x : xs) sum += static_cast<double>(x);
  s.mean = sum / static_cast<double>(xs.size());
  double m2 = 0.0;
  double m4 = 0.0;
  for (const auto& x : xs) {
    const double d = static_cast<double>(x) - s.mean;
    m2 += d * d;
    m4 += d * d * d * d;
  }
  const double n = static_cast<double>(xs.size());
  s.variance = xs.size() > 1 ? m2 / (n - 1.0) : 0.0;
  const double mu2 = m2 / n;
  const double mu4 = m4 / n;
  s.variance_se = std::sqrt(std::max(mu4 - mu2 * mu2, 0.0) / n);
  return s;
}

}  // namespace poisson_fields::sim

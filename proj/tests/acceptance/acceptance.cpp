// Acceptance harness: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance <path-to-poisson-fields-binary>
//
// Reference values come from oracles written here (direct convolutions,
// Panjer recursion, Boost distributions) rather than from the library.

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "poisson_fields.hpp"

namespace pf = poisson_fields;
namespace pm = poisson_fields::model;
namespace ps = poisson_fields::sim;
namespace pv = poisson_fields::verify;

namespace {

// ---------------------------------------------------------------- pinned tolerances

constexpr double kPoissonReductionTol = 1e-12;
constexpr double kClassicalReductionTol = 1e-8;
constexpr double kNormalizationTol = 1e-8;
constexpr double kOracleTol = 1e-10;
constexpr double kSkellamOracleTol = 1e-9;
constexpr double kMomentZ = 3.0;
constexpr double kGofLevel = 1e-3;
constexpr int kGofReps = 100;
constexpr int kGofMinPassing = 99;
constexpr double kCovarianceZ = 3.2905267314918945;  // two-sided 99.9% interval
constexpr double kOdeTol = 1e-6;
constexpr double kOdeStep = 1e-5;
constexpr double kPdeTol = 1e-6;
constexpr double kPdeStep = 1e-4;
constexpr double kFractionalTol = 1e-5;
constexpr double kLatticeTvTol = 0.02;
constexpr double kCovZ = 3.0;

constexpr std::size_t kMomentSamples = 1'000'000;
constexpr std::size_t kGofSamples = 100'000;
constexpr std::size_t kThinSamples = 100'000;
constexpr std::size_t kLatticeSamples = 100'000;
constexpr std::size_t kCovPaths = 1'000'000;
constexpr std::size_t kReproSamples = 30'000;

// Runtime budgets in seconds.
constexpr double kBudget[12] = {0, 10, 30, 10, 30, 120, 300, 120, 60, 180, 300, 600};

constexpr std::uint64_t kSeed = ps::kDefaultSeed;

std::uint64_t seed_for(const std::string& label, int rep = 0) {
  return pv::derive_seed(kSeed, label + "#" + std::to_string(rep));
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// ---------------------------------------------------------------- oracles

double poisson_pmf(double mean, long n) {
  if (n < 0) return 0.0;
  if (mean == 0.0) return n == 0 ? 1.0 : 0.0;
  return boost::math::pdf(boost::math::poisson_distribution<double>(mean), static_cast<double>(n));
}

long poisson_cut(double mean) {
  long c = 0;
  while (boost::math::cdf(boost::math::complement(boost::math::poisson_distribution<double>(mean), double(c))) > 1e-17) ++c;
  return c;
}

/// Law of Σ j·X_j with independent X_j ~ Poisson(λ_j·area), on 0..n_max.
std::vector<double> stretched_convolution(const std::vector<double>& rates, double area, long n_max) {
  std::vector<double> p(static_cast<std::size_t>(n_max) + 1, 0.0);
  p[0] = 1.0;
  for (std::size_t j = 0; j < rates.size(); ++j) {
    const long step = static_cast<long>(j + 1);
    std::vector<double> q(p.size(), 0.0);
    for (long n = 0; n <= n_max; ++n) {
      for (long c = 0; c * step <= n; ++c) q[n] += p[n - c * step] * poisson_pmf(rates[j] * area, c);
    }
    p.swap(q);
  }
  return p;
}

/// Compound Poisson recursion: g(0) = e^{−Λa}, n g(n) = a Σ_j j λ_j g(n−j).
std::vector<double> panjer(const std::vector<double>& rates, double area, long n_max) {
  double total = 0.0;
  for (double r : rates) total += r;
  std::vector<double> g(static_cast<std::size_t>(n_max) + 1, 0.0);
  g[0] = std::exp(-total * area);
  for (long n = 1; n <= n_max; ++n) {
    double s = 0.0;
    for (std::size_t j = 0; j < rates.size() && static_cast<long>(j + 1) <= n; ++j) {
      s += static_cast<double>(j + 1) * rates[j] * g[n - static_cast<long>(j + 1)];
    }
    g[n] = area * s / static_cast<double>(n);
  }
  return g;
}

/// Law of Σ_i i·M_i(A) for integer indices, by convolving every (i, j) Poisson component.
std::map<long, double> signed_law(const std::vector<pm::IndexedRates>& family, double area) {
  std::map<long, double> law{{0, 1.0}};
  for (const auto& [index, rates] : family) {
    for (std::size_t j = 0; j < rates.k(); ++j) {
      const double mean = rates[j] * area;
      const long step = static_cast<long>(std::lround(index)) * static_cast<long>(j + 1);
      std::map<long, double> next;
      const long cut = poisson_cut(mean);
      for (const auto& [v, p] : law) {
        for (long c = 0; c <= cut; ++c) next[v + c * step] += p * poisson_pmf(mean, c);
      }
      law.swap(next);
    }
  }
  return law;
}

pf::PmfTable to_table(const std::map<long, double>& law) {
  pf::PmfTable t;
  t.first = law.begin()->first;
  t.probs.assign(static_cast<std::size_t>(law.rbegin()->first - t.first + 1), 0.0);
  double s = 0.0;
  for (const auto& [v, p] : law) {
    t.probs[static_cast<std::size_t>(v - t.first)] = p;
    s += p;
  }
  t.tail_mass_bound = std::max(0.0, 1.0 - s);
  return t;
}

pf::PmfTable gprf_oracle_table(const std::vector<double>& rates, double area) {
  double mean = 0.0;
  for (std::size_t j = 0; j < rates.size(); ++j) mean += static_cast<double>(j + 1) * rates[j] * area;
  const long n_max = static_cast<long>(mean + 40.0 * std::sqrt(mean + 1.0) + 40.0);
  const auto p = stretched_convolution(rates, area, n_max);
  std::map<long, double> law;
  for (long n = 0; n <= n_max; ++n) law[n] = p[n];
  return to_table(law);
}

/// Pearson test with cells merged left to right until each expects ≥ 5;
/// mass outside the table joins the outermost cells.
double pearson_p_value(const std::vector<long>& xs, const pf::PmfTable& pmf) {
  const double n = static_cast<double>(xs.size());
  std::map<long, double> obs;
  for (long x : xs) obs[std::clamp(x, pmf.first, pmf.last())] += 1.0;
  struct Cell {
    double expected = 0.0;
    double observed = 0.0;
  };
  std::vector<Cell> cells;
  Cell cur;
  double listed = 0.0;
  for (long v = pmf.first; v <= pmf.last(); ++v) listed += pmf(v);
  const double outside = std::max(0.0, 1.0 - listed);
  for (long v = pmf.first; v <= pmf.last(); ++v) {
    cur.expected += n * pmf(v);
    if (v == pmf.first) cur.expected += n * outside / 2.0;
    if (v == pmf.last()) cur.expected += n * outside / 2.0;
    auto it = obs.find(v);
    if (it != obs.end()) cur.observed += it->second;
    if (cur.expected >= 5.0) {
      cells.push_back(cur);
      cur = Cell{};
    }
  }
  if (cells.empty()) return 1.0;
  cells.back().expected += cur.expected;
  cells.back().observed += cur.observed;
  if (cells.size() < 2) return 1.0;
  double stat = 0.0;
  for (const auto& c : cells) stat += (c.observed - c.expected) * (c.observed - c.expected) / c.expected;
  const boost::math::chi_squared chi(static_cast<double>(cells.size() - 1));
  return boost::math::cdf(boost::math::complement(chi, stat));
}

double empirical_tv(const std::vector<long>& xs, const pf::PmfTable& pmf) {
  std::map<long, double> emp;
  for (long x : xs) emp[x] += 1.0 / static_cast<double>(xs.size());
  double tv = pmf.tail_mass_bound;
  for (long v = pmf.first; v <= pmf.last(); ++v) {
    auto it = emp.find(v);
    tv += std::abs((it == emp.end() ? 0.0 : it->second) - pmf(v));
  }
  for (const auto& [v, p] : emp) {
    if (v < pmf.first || v > pmf.last()) tv += p;
  }
  return 0.5 * tv;
}

double clock_mean(double order, double side) { return std::pow(side, order) / std::tgamma(order + 1.0); }
double clock_second(double order, double side) { return 2.0 * std::pow(side, 2 * order) / std::tgamma(2 * order + 1.0); }

// ---------------------------------------------------------------- harness

struct Outcome {
  bool passed = true;
  std::string detail;
};

int g_failures = 0;

void report(int id, const std::string& title, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_budget = secs < kBudget[id];
  const bool ok = o.passed && in_budget;
  if (!ok) ++g_failures;
  std::printf("%s [%2d] %s: %s; %.1f s (budget %.0f s%s)\n", ok ? "PASS" : "FAIL", id, title.c_str(),
              o.detail.c_str(), secs, kBudget[id], in_budget ? "" : ", exceeded");
  std::fflush(stdout);
}

// ---------------------------------------------------------------- criteria

Outcome criterion_reductions() {
  double poisson_diff = 0.0;
  for (double lam : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    for (double area : {0.5, 1.0, 2.0}) {
      if (lam * area > 10.0) continue;
      for (long n = 0; n <= 30; ++n) {
        poisson_diff = std::max(poisson_diff, std::abs(pm::gprf_pmf({lam}, area, n) - poisson_pmf(lam * area, n)));
      }
    }
  }
  const std::vector<std::vector<double>> grids{{1.0}, {1.0, 1.0}, {0.5, 1.0, 2.0}, {2.0, 1.0, 0.5}, {3.0, 0.5}};
  const std::vector<std::pair<double, double>> sides{{1.0, 1.0}, {0.5, 2.0}, {1.5, 1.2}, {2.0, 1.0}};
  double fgprf_diff = 0.0;
  for (const auto& g : grids) {
    const pf::RateVector r(g);
    for (auto [s, t] : sides) {
      if (r.total() * s * t > 10.0) continue;
      const pm::FgprfModel m(r, {1.0, 1.0}, s, t);
      for (long n = 0; n <= 30; ++n) fgprf_diff = std::max(fgprf_diff, std::abs(m.pmf(n).value - pm::gprf_pmf(r, s * t, n)));
    }
  }
  const std::vector<pf::SkellamRates> sk{{{1.0}, {1.0}}, {{2.0}, {0.5}}, {{1.0, 0.5}, {0.3, 0.2}}, {{0.5, 0.5, 0.5}, {1.0, 0.2, 0.1}}};
  double fgspp_diff = 0.0;
  for (const auto& r : sk) {
    for (auto [s, t] : sides) {
      if (r.total() * s * t > 10.0) continue;
      const pm::FgsppModel m(r, {1.0, 1.0}, s, t);
      const pm::SkellamModel ref(r, s * t);
      for (long n = -30; n <= 30; ++n) fgspp_diff = std::max(fgspp_diff, std::abs(m.pmf(n).value - ref.pmf(n).value));
    }
  }
  const bool ok = poisson_diff < kPoissonReductionTol && fgprf_diff < kClassicalReductionTol &&
                  fgspp_diff < kClassicalReductionTol;
  return {ok, "k=1 vs Poisson " + fmt(poisson_diff) + " (<" + fmt(kPoissonReductionTol) + "), fgprf(1,1) vs gprf " +
                  fmt(fgprf_diff) + ", fgspp(1,1) vs skellam " + fmt(fgspp_diff) + " (<" + fmt(kClassicalReductionTol) + ")"};
}

Outcome criterion_normalization() {
  const std::vector<std::vector<double>> grids{{1.0}, {2.0}, {0.5, 2.0}, {1.0, 0.5, 0.25}, {2.0, 2.0, 2.0}};
  const std::vector<pf::FracOrders> orders{{1.0, 1.0}, {0.5, 0.5}, {0.6, 0.8}, {0.9, 0.3}};
  const std::vector<std::pair<double, double>> sides{{0.5, 1.0}, {1.0, 1.0}, {2.0, 1.0}, {2.0, 2.0}, {4.0, 1.0}};
  double worst = 0.0;
  std::string worst_case;
  int tables = 0;
  auto account = [&](const pf::PmfTable& t, const std::string& label) {
    ++tables;
    const double deficit = std::abs(1.0 - t.total());
    const double bound = t.tail_mass_bound + t.value_error_bound;
    // The certified remainder must cover the deficit and itself be small.
    const double stat = std::max(bound, deficit > bound ? 1.0 : deficit);
    if (stat > worst) {
      worst = stat;
      worst_case = label;
    }
  };
  for (const auto& g : grids) {
    const pf::RateVector r(g);
    for (auto [s, t] : sides) {
      if (s * t <= 4.0) account(pm::gprf_table(r, s * t), "gprf");
      for (const auto& fo : orders) {
        if (fo.clock_area(s, t) > 4.0) continue;
        account(pm::FgprfModel(r, fo, s, t).table(), "fgprf");
      }
    }
  }
  const std::vector<pf::SkellamRates> sk{{{1.0}, {1.0}}, {{2.0}, {0.5}}, {{1.0, 0.5}, {0.3, 2.0}}, {{2.0, 1.0, 0.5}, {0.5, 0.5, 0.5}}};
  for (const auto& r : sk) {
    for (auto [s, t] : sides) {
      if (s * t <= 4.0) account(pm::SkellamModel(r, s * t).table(), "skellam");
      for (const auto& fo : orders) {
        if (fo.clock_area(s, t) > 4.0) continue;
        account(pm::FgsppModel(r, fo, s, t).table(), "fgspp");
      }
    }
  }
  return {worst < kNormalizationTol, std::to_string(tables) + " tables, worst certified remainder " + fmt(worst) + " (" +
                                         worst_case + ", <" + fmt(kNormalizationTol) + ")"};
}

Outcome criterion_representations() {
  const std::vector<std::vector<double>> grids{{1.0}, {0.7, 0.3}, {1.0, 1.0}, {0.8, 0.5, 0.3}, {2.0, 0.1, 1.0}};
  double conv = 0.0;
  double rec = 0.0;
  for (const auto& g : grids) {
    for (double area : {0.5, 1.0, 2.5}) {
      const auto a = stretched_convolution(g, area, 40);
      const auto b = panjer(g, area, 40);
      for (long n = 0; n <= 40; ++n) {
        const double p = pm::gprf_pmf(pf::RateVector(g), area, n);
        conv = std::max(conv, std::abs(p - a[n]));
        rec = std::max(rec, std::abs(p - b[n]));
      }
    }
  }
  return {conv < kOracleTol && rec < kOracleTol,
          "vs convolution " + fmt(conv) + ", vs compound recursion " + fmt(rec) + " (<" + fmt(kOracleTol) + ")"};
}

Outcome criterion_skellam_oracle() {
  const std::vector<pf::SkellamRates> sk{{{1.0}, {1.0}}, {{2.0}, {0.3}}, {{1.0, 0.5}, {0.7, 0.2}}, {{0.2, 1.5}, {1.0, 1.0}}};
  double worst = 0.0;
  for (const auto& r : sk) {
    for (double area : {0.5, 1.0, 2.0}) {
      const auto plus = stretched_convolution(r.plus.values(), area, 120);
      const auto minus = stretched_convolution(r.minus.values(), area, 120);
      const pm::SkellamModel model(r, area);
      for (long n = -20; n <= 20; ++n) {
        double expected = 0.0;
        for (long m = 0; m <= 120; ++m) {
          if (m + n >= 0 && m + n <= 120) expected += plus[m + n] * minus[m];
        }
        worst = std::max(worst, std::abs(model.pmf(n).value - expected));
      }
    }
  }
  // Single-batch closed form as a second reference.
  double bessel = 0.0;
  for (long n = -20; n <= 20; ++n) {
    const double mu1 = 1.4, mu2 = 0.6;
    const double ref = std::exp(-(mu1 + mu2)) * std::pow(mu1 / mu2, n / 2.0) *
                       boost::math::cyl_bessel_i(std::abs(double(n)), 2.0 * std::sqrt(mu1 * mu2));
    bessel = std::max(bessel, std::abs(pm::skellam_pmf({{0.7}, {0.3}}, 2.0, n) - ref));
  }
  worst = std::max(worst, bessel);
  return {worst < kSkellamOracleTol, "max diff " + fmt(worst) + " (<" + fmt(kSkellamOracleTol) + ")"};
}

Outcome criterion_moments() {
  struct Z {
    std::string name;
    double z;
  };
  std::vector<Z> zs;
  bool formulas_ok = true;
  auto zcheck = [&](const std::string& name, const ps::SampleSummary& s, double mean, double var, bool with_var) {
    zs.push_back({name + ".mean", std::abs(s.mean - mean) / s.mean_se()});
    if (with_var) zs.push_back({name + ".var", std::abs(s.variance - var) / s.variance_se});
  };
  {
    const pf::RateVector r{1.0, 0.5, 0.25};
    const double area = 2.0;
    const auto m = pm::gprf_moments(r, area);
    formulas_ok &= std::abs(m.mean - area * 2.75) < 1e-12 && std::abs(m.variance - area * 5.25) < 1e-12;
    const auto xs = ps::run_batches<long>(kMomentSamples, seed_for("m.gprf"), [&](ps::RngStream& g) { return ps::sample_gprf(r, area, g); });
    zcheck("gprf", ps::summarize(xs), m.mean, m.variance, true);
  }
  {
    const pf::RateVector r{1.0, 0.5};
    const pf::FracOrders fo(0.7, 0.6);
    const double s = 1.0, t = 2.0;
    const auto m = pm::fgprf_moments(r, fo, s, t);
    const double eu = clock_mean(0.7, s), ev = clock_mean(0.6, t);
    const double e2 = clock_second(0.7, s) * clock_second(0.6, t);
    formulas_ok &= std::abs(m.mean - 2.0 * eu * ev) < 1e-12 &&
                   std::abs(m.variance - (3.0 * eu * ev + 4.0 * (e2 - eu * eu * ev * ev))) < 1e-10;
    const auto xs = ps::run_batches<long>(kMomentSamples, seed_for("m.fgprf"), [&](ps::RngStream& g) { return ps::sample_fgprf(r, fo, s, t, g); });
    zcheck("fgprf", ps::summarize(xs), m.mean, m.variance, true);
  }
  {
    const pf::RateVector r{1.0, 0.5};
    const double s = 1.0, t = 1.2, st = s * t;
    const auto m = pm::integral_moments(r, s, t);
    formulas_ok &= std::abs(m.mean - 2.0 * st * st / 4.0) < 1e-14 && std::abs(m.variance - 3.0 * st * st * st / 9.0) < 1e-14;
    const auto xs = ps::run_batches<double>(kMomentSamples, seed_for("m.integral"), [&](ps::RngStream& g) { return ps::sample_gprf_integral(r, s, t, g); });
    zcheck("integral", ps::summarize(xs), m.mean, m.variance, true);
  }
  {
    const pf::SkellamRates r({1.0, 0.5}, {0.3, 0.2});
    const pf::FracOrders fo(0.7, 0.9);
    const double s = 1.5, t = 1.0;
    const double mean = pm::FgsppModel(r, fo, s, t).moments().mean;
    formulas_ok &= std::abs(mean - (2.0 - 0.7) * clock_mean(0.7, s) * clock_mean(0.9, t)) < 1e-12;
    const auto xs = ps::run_batches<long>(kMomentSamples, seed_for("m.fgspp"), [&](ps::RngStream& g) { return ps::sample_fgspp(r, fo, s, t, g); });
    zcheck("fgspp", ps::summarize(xs), mean, 0.0, false);
  }
  {
    const double alpha = 0.6, t = 2.0;
    const auto xs = ps::run_batches<double>(kMomentSamples, seed_for("m.inverse"), [&](ps::RngStream& g) { return ps::sample_inverse_stable(alpha, t, g); });
    zcheck("inverse_stable", ps::summarize(xs), clock_mean(alpha, t), 0.0, false);
  }
  double worst = 0.0;
  std::string where;
  for (const auto& z : zs) {
    if (z.z > worst) {
      worst = z.z;
      where = z.name;
    }
  }
  std::string d = std::to_string(zs.size()) + " z-scores, worst " + fmt(worst) + " SE at " + where + " (<" + fmt(kMomentZ) + ")";
  if (!formulas_ok) d += "; closed-form moments disagree with reference formulas";
  return {formulas_ok && worst < kMomentZ, d};
}

Outcome criterion_gof() {
  struct Group {
    std::string name;
    std::function<long(ps::RngStream&)> draw;
    pf::PmfTable pmf;
  };
  std::vector<Group> groups;
  const std::vector<std::pair<std::vector<double>, double>> gprf_points{{{1.0}, 2.0}, {{1.0, 0.5}, 1.5}, {{0.5, 0.3, 0.2}, 3.0}};
  for (auto method : {ps::GprfMethod::superposition, ps::GprfMethod::compound}) {
    int i = 0;
    for (const auto& [g, area] : gprf_points) {
      const pf::RateVector r(g);
      const double a = area;
      groups.push_back({std::string(method == ps::GprfMethod::superposition ? "gprf.sup" : "gprf.cmp") + std::to_string(i++),
                        [r, a, method](ps::RngStream& rng) { return ps::sample_gprf(r, a, rng, method); },
                        gprf_oracle_table(g, area)});
    }
  }
  struct FracPoint {
    std::vector<double> rates;
    pf::FracOrders fo;
    double s, t;
  };
  const std::vector<FracPoint> fgprf_points{{{1.0}, {0.5, 0.5}, 1.0, 1.0}, {{1.0, 0.5}, {0.7, 0.6}, 1.0, 2.0}, {{0.5, 0.3, 0.2}, {0.9, 0.4}, 2.0, 1.0}};
  int i = 0;
  for (const auto& p : fgprf_points) {
    const pf::RateVector r(p.rates);
    groups.push_back({"fgprf" + std::to_string(i++), [r, p](ps::RngStream& rng) { return ps::sample_fgprf(r, p.fo, p.s, p.t, rng); },
                      pm::FgprfModel(r, p.fo, p.s, p.t).table(1e-12)});
  }
  const std::vector<std::pair<std::vector<pm::IndexedRates>, double>> gspp_points{
      {{{1.0, {1.0}}, {-1.0, {0.5}}}, 1.0}, {{{2.0, {0.7}}, {-3.0, {0.4}}}, 1.0}, {{{1.0, {0.5, 0.3}}, {-2.0, {0.4}}}, 2.0}};
  i = 0;
  for (const auto& [fam, area] : gspp_points) {
    const auto f = fam;
    const double a = area;
    groups.push_back({"gspp" + std::to_string(i++), [f, a](ps::RngStream& rng) { return std::lround(ps::sample_gspp(f, a, rng)); },
                      to_table(signed_law(fam, area))});
  }
  struct SkPoint {
    pf::SkellamRates r;
    pf::FracOrders fo;
    double s, t;
  };
  const std::vector<SkPoint> fgspp_points{{{{0.5}, {0.5}}, {0.6, 0.8}, 1.0, 1.0},
                                          {{{1.0, 0.5}, {0.3, 0.2}}, {0.7, 0.9}, 1.5, 1.0},
                                          {{{0.8}, {0.4}}, {0.5, 0.5}, 1.0, 1.0}};
  i = 0;
  for (const auto& p : fgspp_points) {
    groups.push_back({"fgspp" + std::to_string(i++), [p](ps::RngStream& rng) { return ps::sample_fgspp(p.r, p.fo, p.s, p.t, rng); },
                      pm::FgsppModel(p.r, p.fo, p.s, p.t).table(1e-12)});
  }

  int worst = kGofReps;
  std::string where;
  std::string failing;
  for (const auto& g : groups) {
    int passing = 0;
    for (int rep = 0; rep < kGofReps; ++rep) {
      const auto xs = ps::run_batches<long>(kGofSamples, seed_for("gof." + g.name, rep), g.draw);
      if (pearson_p_value(xs, g.pmf) > kGofLevel) ++passing;
    }
    if (passing < worst) {
      worst = passing;
      where = g.name;
    }
    if (passing < kGofMinPassing) failing += " " + g.name + "=" + std::to_string(passing);
  }
  std::string d = std::to_string(groups.size()) + " sampler/point groups x " + std::to_string(kGofReps) + " reps, worst " +
                  std::to_string(worst) + "/" + std::to_string(kGofReps) + " at " + where + " (need >=" + std::to_string(kGofMinPassing) + ")";
  if (!failing.empty()) d += "; below:" + failing;
  return {failing.empty(), d};
}

Outcome criterion_thinning() {
  double min_p = 1.0;
  double max_z = 0.0;
  std::string min_where, z_where;
  auto gof = [&](const std::string& name, const std::vector<long>& xs, const pf::PmfTable& t) {
    const double p = pearson_p_value(xs, t);
    if (p < min_p) {
      min_p = p;
      min_where = name;
    }
  };
  auto indep = [&](const std::string& name, const std::vector<std::pair<long, long>>& pairs) {
    const auto r = pv::independence_check(pairs);
    if (r.contingency.p_value < min_p) {
      min_p = r.contingency.p_value;
      min_where = name + ".contingency";
    }
    const double z = std::abs(r.covariance) / r.covariance_se;
    if (z > max_z) {
      max_z = z;
      z_where = name;
    }
  };
  auto split = [](const std::vector<std::pair<long, long>>& pairs) {
    std::pair<std::vector<long>, std::vector<long>> out;
    for (const auto& [a, b] : pairs) {
      out.first.push_back(a);
      out.second.push_back(b);
    }
    return out;
  };
  {
    // One-batch field thinned pointwise.
    const double lam = 3.0, area = 1.0, p = 0.3;
    const auto pairs = ps::run_batches<std::pair<long, long>>(kThinSamples, seed_for("thin.prf"), [&](ps::RngStream& g) {
      const auto t = ps::thin_prf(ps::sample_prf(lam, area, g), p, g);
      return std::pair<long, long>{t.kept, t.removed};
    });
    const auto [kept, removed] = split(pairs);
    gof("prf.kept", kept, gprf_oracle_table({p * lam}, area));
    gof("prf.removed", removed, gprf_oracle_table({(1 - p) * lam}, area));
    indep("prf", pairs);
  }
  {
    // Batch-size dependent retention.
    const std::vector<double> rates{1.0, 0.6, 0.3}, keep{0.3, 0.5, 0.8};
    const double area = 2.0;
    const auto pairs = ps::run_batches<std::pair<long, long>>(kThinSamples, seed_for("thin.gprf"), [&](ps::RngStream& g) {
      const auto t = ps::thin_gprf(ps::sample_gprf_components(pf::RateVector(rates), area, g), keep, g);
      return std::pair<long, long>{t.kept, t.removed};
    });
    std::vector<double> kr, rr;
    for (std::size_t j = 0; j < rates.size(); ++j) {
      kr.push_back(keep[j] * rates[j]);
      rr.push_back((1 - keep[j]) * rates[j]);
    }
    const auto [kept, removed] = split(pairs);
    gof("gprf.kept", kept, gprf_oracle_table(kr, area));
    gof("gprf.removed", removed, gprf_oracle_table(rr, area));
    indep("gprf", pairs);
  }
  {
    // Planar point patterns: kept/removed marginals and independence, and
    // disjoint rectangular increments of the kept field.
    const std::vector<double> rates{1.0, 0.5};
    const std::vector<double> keep{0.4, 0.7};
    const auto window = pf::Window::rectangle(2.0, 1.5);
    const auto left = pf::Window::increment(0.0, 1.0, 0.0, 1.5);
    const auto right = pf::Window::increment(1.0, 2.0, 0.0, 1.5);
    struct Obs {
      long kept, removed, kept_left, kept_right;
    };
    const auto obs = ps::run_batches<Obs>(kThinSamples, seed_for("thin.plane"), [&](ps::RngStream& g) {
      const auto pat = ps::sample_gprf_points(pf::RateVector(rates), window, g);
      const auto [k, r] = ps::thin_points(pat, keep, g);
      return Obs{k.total(), r.total(), k.count_in(left), k.count_in(right)};
    });
    std::vector<long> kept, removed, kl;
    std::vector<std::pair<long, long>> kr, lr;
    for (const auto& o : obs) {
      kept.push_back(o.kept);
      removed.push_back(o.removed);
      kl.push_back(o.kept_left);
      kr.emplace_back(o.kept, o.removed);
      lr.emplace_back(o.kept_left, o.kept_right);
    }
    gof("plane.kept", kept, gprf_oracle_table({0.4, 0.35}, 3.0));
    gof("plane.removed", removed, gprf_oracle_table({0.6, 0.15}, 3.0));
    gof("plane.kept_increment", kl, gprf_oracle_table({0.4, 0.35}, 1.5));
    indep("plane.kept_removed", kr);
    indep("plane.disjoint_increments", lr);
  }
  const bool ok = min_p > kGofLevel && max_z < kCovarianceZ;
  return {ok, "min p " + fmt(min_p) + " at " + min_where + " (>" + fmt(kGofLevel) + "), max |cov|/SE " + fmt(max_z) + " at " +
                  z_where + " (<" + fmt(kCovarianceZ) + ")"};
}

Outcome criterion_residuals() {
  double ode = 0.0, pde = 0.0, frac = 0.0;
  for (const auto& g : std::vector<std::vector<double>>{{1.0}, {1.0, 0.5}, {0.7, 0.2, 0.4}}) {
    const pf::RateVector r(g);
    for (auto [s, t] : {std::pair{1.0, 1.0}, std::pair{0.7, 1.6}}) {
      for (long n = 0; n <= 5; ++n) ode = std::max(ode, pv::ode_residual(r, s, t, n, kOdeStep).residual);
      for (double z : {-0.7, 0.0, 0.4, 0.9}) pde = std::max(pde, pv::pgf_pde_residual(r, s, t, z, kPdeStep).residual);
    }
  }
  // Interior points; for orders summing to 1 the double series needs Λ s^α t^β < ½.
  struct Point {
    std::vector<double> rates;
    pf::FracOrders fo;
    double s, t;
  };
  const std::vector<Point> points{{{1.0}, {0.5, 0.5}, 0.3, 0.4},      {{1.0}, {0.5, 0.5}, 0.1, 1.2},
                                  {{1.0, 0.5}, {0.5, 0.5}, 0.2, 0.3}, {{0.4, 0.6}, {0.5, 0.5}, 0.15, 0.5},
                                  {{1.0}, {0.6, 0.8}, 1.0, 1.0},      {{1.0, 0.5}, {0.6, 0.8}, 0.7, 1.3},
                                  {{0.4, 0.6}, {0.6, 0.8}, 1.5, 0.5}};
  for (const auto& p : points) {
    for (long n = 0; n <= 3; ++n) {
      frac = std::max(frac, pv::fractional_system_residual(pf::RateVector(p.rates), p.fo, p.s, p.t, n).residual);
    }
  }
  const bool ok = ode < kOdeTol && pde < kPdeTol && frac < kFractionalTol;
  return {ok, "ode " + fmt(ode) + " (<" + fmt(kOdeTol) + "), pgf pde " + fmt(pde) + " (<" + fmt(kPdeTol) + "), fractional system " +
                  fmt(frac) + " (<" + fmt(kFractionalTol) + ")"};
}

Outcome criterion_lattice() {
  const double side = pv::detail::kLatticeSide;
  const double area = side * side;
  std::string d;
  bool ok = true;
  auto run = [&](const std::string& name, const std::function<ps::LatticeConfig(long)>& config, const pf::PmfTable& limit) {
    std::vector<double> tv;
    for (long n : {32L, 128L, 512L}) {
      const auto cfg = config(n);
      const auto xs = ps::run_batches<long>(kLatticeSamples, seed_for("lattice." + name, static_cast<int>(n)),
                                            [&](ps::RngStream& g) { return ps::sample_lattice_field(cfg, side, side, g); });
      tv.push_back(empirical_tv(xs, limit));
    }
    const bool mono = tv[0] > tv[1] && tv[1] > tv[2];
    const bool small = tv[2] < kLatticeTvTol;
    ok = ok && mono && small;
    d += (d.empty() ? "" : "; ") + name + " TV " + fmt(tv[0]) + " > " + fmt(tv[1]) + " > " + fmt(tv[2]) + (mono ? "" : " (not monotone)");
  };
  const pf::RateVector r{2.0, 1.0};
  run("gprf", [&](long n) { return ps::lattice_gprf(r, n); }, gprf_oracle_table({2.0, 1.0}, area));
  const pf::SkellamRates sk({2.0}, {1.0});
  run("skellam", [&](long n) { return ps::lattice_skellam(sk, n); }, to_table(signed_law({{1.0, {2.0}}, {-1.0, {1.0}}}, area)));
  return {ok, d + " (n=512 <" + fmt(kLatticeTvTol) + ")"};
}

Outcome criterion_covariance() {
  const pf::RateVector r{1.0, 1.0};
  const pf::FracOrders fo(0.5, 0.5);
  const double expected = pm::fgprf_cov(r, fo, 1.0, 1.0, 2.0, 2.0);
  const std::vector<double> grid{1.0, 2.0};
  const auto pairs = ps::run_batches<std::pair<long, long>>(kCovPaths, seed_for("cov.paths"), [&](ps::RngStream& g) {
    const auto u = ps::sample_inverse_stable_path(fo.alpha, grid, g);
    const auto v = ps::sample_inverse_stable_path(fo.beta, grid, g);
    const double inner = u.values[0] * v.values[0];
    const double outer = u.values[1] * v.values[1];
    const long x = ps::sample_gprf(r, inner, g);
    return std::pair<long, long>{x, x + ps::sample_gprf(r, outer - inner, g)};
  });
  const double n = static_cast<double>(pairs.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pairs) {
    mx += double(x);
    my += double(y);
  }
  mx /= n;
  my /= n;
  double c = 0.0, c2 = 0.0;
  for (const auto& [x, y] : pairs) {
    const double p = (double(x) - mx) * (double(y) - my);
    c += p;
    c2 += p * p;
  }
  const double cov = c / (n - 1.0);
  const double se = std::sqrt(std::max(c2 / n - (c / n) * (c / n), 0.0) / n);
  const double z = std::abs(cov - expected) / se;
  return {z < kCovZ, "quadrature " + fmt(expected) + ", Monte Carlo " + fmt(cov) + " +- " + fmt(se) + ", z " + fmt(z) + " (<" + fmt(kCovZ) + ")"};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream o;
  o << f.rdbuf();
  return o.str();
}

Outcome criterion_reproducibility(const std::string& binary) {
  if (binary.empty() || !std::filesystem::exists(binary)) return {false, "CLI binary not found: '" + binary + "'"};
  const auto dir = std::filesystem::temp_directory_path() / ("pf-acceptance-" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const std::vector<std::pair<std::string, std::string>> runs{
      {"gprf", "gprf --rates 1,0.5 --area 2"},
      {"gprf_compound", "gprf --rates 1,0.5,0.2 --area 2 --method compound"},
      {"fgprf", "fgprf --rates 1,0.5 --alpha 0.7 --beta 0.6 --s 1 --t 2"},
      {"fgspp", "fgspp --plus 1 --minus 0.5 --alpha 0.6 --beta 0.8 --s 1 --t 1"},
      {"gspp", "gspp --family '2:0.7;-3:0.4' --area 1"},
      {"integral", "integral --rates 1,0.5 --s 1 --t 1.2"},
      {"inverse_stable", "inverse-stable --alpha 0.6 --t 2"},
      {"lattice", "lattice --variant skellam --plus 2 --minus 1 --lattice-n 64 --s 1 --t 1"},
      {"fgprf_json", "fgprf --rates 1 --alpha 0.5 --beta 0.5 --s 1 --t 1 --format json"}};
  int identical = 0;
  std::string mismatched;
  for (const auto& [name, args] : runs) {
    std::vector<std::string> outputs;
    for (const char* threads : {"1", "2", "4", "8"}) {
      const auto out = dir / (name + "_t" + threads + ".out");
      const std::string cmd = "'" + binary + "' simulate " + args + " --samples " + std::to_string(kReproSamples) +
                              " --seed 424242 --threads " + threads + " --out '" + out.string() + "' > /dev/null 2>&1";
      if (std::system(cmd.c_str()) != 0) {
        std::filesystem::remove_all(dir);
        return {false, "simulate failed: " + cmd};
      }
      outputs.push_back(read_file(out));
    }
    const bool same = !outputs[0].empty() && std::all_of(outputs.begin(), outputs.end(), [&](const auto& o) { return o == outputs[0]; });
    if (same) {
      ++identical;
    } else {
      mismatched += " " + name;
    }
  }
  std::filesystem::remove_all(dir);
  std::string d = std::to_string(identical) + "/" + std::to_string(runs.size()) + " processes byte-identical across 1/2/4/8 threads";
  if (!mismatched.empty()) d += "; differing:" + mismatched;
  return {identical == static_cast<int>(runs.size()), d};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string binary = argc > 1 ? argv[1] : "";
  std::printf("acceptance: seed %llu\n", static_cast<unsigned long long>(kSeed));
  report(1, "reduction identities", criterion_reductions);
  report(2, "normalization with certified tails", criterion_normalization);
  report(3, "superposition and compound representations", criterion_representations);
  report(4, "two-sided Bessel pmf vs convolution", criterion_skellam_oracle);
  report(5, "moment formulas vs 1e6-sample Monte Carlo", criterion_moments);
  report(6, "goodness of fit of the samplers", criterion_gof);
  report(7, "thinning marginals and independence", criterion_thinning);
  report(8, "differential-equation residuals", criterion_residuals);
  report(9, "lattice convergence", criterion_lattice);
  report(10, "fractional covariance vs path Monte Carlo", criterion_covariance);
  report(11, "thread-count reproducibility of simulate", [&] { return criterion_reproducibility(binary); });
  std::printf("acceptance: %d of 11 criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}

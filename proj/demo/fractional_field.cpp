// Exact fractional field pmf next to Monte Carlo frequencies.

#include <cstdio>
#include <map>

#include "poisson_fields.hpp"

namespace pf = poisson_fields;

int main() {
  const pf::RateVector rates{1.0, 0.5};
  const pf::FracOrders frac(0.7, 0.6);
  const double s = 1.0;
  const double t = 2.0;

  const pf::model::FgprfModel model(rates, frac, s, t);
  const pf::PmfTable table = model.table();
  const auto moments = model.moments();

  const std::size_t samples = 200000;
  const auto xs = pf::sim::run_batches<long>(samples, pf::sim::kDefaultSeed, [&](pf::sim::RngStream& rng) {
    return pf::sim::sample_fgprf(rates, frac, s, t, rng);
  });
  std::map<long, double> freq;
  for (long x : xs) freq[x] += 1.0 / static_cast<double>(samples);

  std::printf("fractional field, rates (1, 0.5), orders (0.7, 0.6), window [0,1]x[0,2]\n");
  std::printf("mean %.6f  variance %.6f  certified tail %.2e\n", moments.mean, moments.variance,
              table.tail_mass_bound);
  std::printf("%4s  %12s  %12s\n", "n", "exact", "simulated");
  for (long n = 0; n <= 10; ++n) std::printf("%4ld  %12.8f  %12.8f\n", n, table(n), freq[n]);

  const auto gof = pf::verify::chi_square_gof(xs, table);
  std::printf("chi-square %.3f on %d dof, p = %.4f\n", gof.statistic, gof.dof, gof.p_value);
  return 0;
}

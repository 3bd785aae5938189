#include <gtest/gtest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <cmath>

#include "poisson_fields/specfun.hpp"

namespace sf = poisson_fields::specfun;

namespace {

sf::WrightParams wright_n(double n, double alpha, double beta) {
  return {{{n + 1.0, 1.0}, {n + 1.0, 1.0}}, {{alpha * n + 1.0, alpha}, {beta * n + 1.0, beta}}};
}

}  // namespace

TEST(Wright, ClassicalOrdersCollapseToExponential) {
  for (double n : {0.0, 1.0, 4.0}) {
    for (double y : {0.0, 0.5, 3.0, 20.0}) {
      const auto r = sf::wright_2psi2(wright_n(n, 1.0, 1.0), -y);
      EXPECT_NEAR(r.value, std::exp(-y), 1e-12) << "n=" << n << " y=" << y;
    }
  }
}

// Reference values from a 30-digit evaluation of the defining series.
TEST(Wright, ConvergentSeriesMatchesReference) {
  const auto a = sf::wright_2psi2(wright_n(2.0, 0.7, 0.6), -1.5);
  EXPECT_NEAR(a.value, 0.130310683594894985685, 1e-11);
  const auto b = sf::wright_2psi2(wright_n(0.0, 0.7, 0.6), -0.8);
  EXPECT_NEAR(b.value, 0.502339514691067290055, 1e-11);
  EXPECT_LE(a.truncation_bound, 1e-10);
}

// Orders summing to 1: the series has a finite radius; the value is the
// moment E[(UV)^N e^{-y UV}] with U, V independent copies of √2|Z|,
// integrated at 30 digits.
TEST(Wright, HalfOrdersMatchMomentIntegral) {
  const auto a = sf::wright_2psi2(wright_n(0.0, 0.5, 0.5), -1.0);
  EXPECT_NEAR(a.value, 0.484051295085710309672, 1e-10);
  const auto b = sf::wright_2psi2(wright_n(3.0, 0.5, 0.5), -2.0);
  EXPECT_NEAR(b.value, 0.066044587274388692015, 1e-10);
}

TEST(Wright, DerivativeIsNextIndex) {
  const double h = 1e-5;
  for (auto [alpha, beta] : {std::pair{0.7, 0.6}, std::pair{0.5, 0.5}, std::pair{0.9, 0.3}}) {
    const double y = 1.2;
    const double up = sf::wright_2psi2(wright_n(2.0, alpha, beta), -(y + h)).value;
    const double dn = sf::wright_2psi2(wright_n(2.0, alpha, beta), -(y - h)).value;
    const double next = sf::wright_2psi2(wright_n(3.0, alpha, beta), -y).value;
    EXPECT_NEAR((up - dn) / (2 * h), -next, 1e-7) << alpha << "," << beta;
  }
}

TEST(Wright, ScaledEvaluationRemovesLogScale) {
  const auto p = wright_n(40.0, 0.8, 0.7);
  const double log_scale = 2.0 * std::lgamma(41.0) - std::lgamma(33.0) - std::lgamma(29.0);
  const auto plain = sf::wright_2psi2(p, -0.3, 1e-14);
  const auto scaled = sf::wright_2psi2_scaled(p, -0.3, log_scale, 1e-14);
  EXPECT_NEAR(scaled.value * std::exp(log_scale) / plain.value, 1.0, 1e-10);
}

TEST(Wright, RejectsWrongArity) {
  EXPECT_THROW(sf::wright_2psi2({{{1.0, 1.0}}, {{1.0, 1.0}}}, 0.5), poisson_fields::InvalidParams);
}

TEST(MittagLeffler, OrderOneIsExponential) {
  for (double x : {-5.0, -1.0, 0.0, 0.7, 3.0}) {
    EXPECT_NEAR(sf::mittag_leffler(1.0, x).value / std::exp(x), 1.0, 1e-12);
  }
}

TEST(MittagLeffler, OrderHalfIsErfcForm) {
  // E_{1/2}(x) = e^{x²} erfc(−x).
  for (double x : {-3.0, -1.0, -0.2, 0.4, 1.5}) {
    const double expected = std::exp(x * x) * std::erfc(-x);
    EXPECT_NEAR(sf::mittag_leffler(0.5, x).value, expected, 1e-11 * std::max(1.0, expected)) << x;
  }
}

TEST(MittagLeffler, ThreeParameterReducesToOneParameter) {
  for (double x : {-2.0, 0.3, 1.1}) {
    EXPECT_NEAR(sf::mittag_leffler_3(0.6, 1.0, 1.0, x).value, sf::mittag_leffler(0.6, x).value, 1e-12);
  }
  // γ = 2, α = β = 1: Σ (r+1) x^r / r! = (1 + x) e^x.
  EXPECT_NEAR(sf::mittag_leffler_3(1.0, 1.0, 2.0, 0.5).value, 1.5 * std::exp(0.5), 1e-12);
}

// Tolerance is absolute below 1 and relative above.
TEST(Bessel, MatchesBoost) {
  for (double nu : {0.0, 1.0, 2.5, 7.0}) {
    for (double x : {0.01, 0.5, 2.0, 10.0, 30.0}) {
      const double expected = boost::math::cyl_bessel_i(nu, x);
      EXPECT_NEAR(sf::bessel_i(nu, x).value, expected, 1e-11 * std::max(1.0, expected)) << nu << " " << x;
    }
  }
  EXPECT_EQ(sf::bessel_i(0.0, 0.0).value, 1.0);
  EXPECT_EQ(sf::bessel_i(2.0, 0.0).value, 0.0);
}

TEST(Caputo, PowerRule) {
  EXPECT_EQ(sf::caputo_term_derivative(0.0, 0.5), 0.0);
  EXPECT_NEAR(sf::caputo_term_derivative(1.0, 0.5), 1.0 / std::tgamma(1.5), 1e-14);
  EXPECT_NEAR(sf::caputo_term_derivative(2.4, 0.7), std::tgamma(3.4) / std::tgamma(2.7), 1e-13);
  EXPECT_NEAR(sf::caputo_term_derivative(3.0, 1.0), 3.0, 1e-14);
}

TEST(Series, GammaHelpers) {
  EXPECT_NEAR(sf::log_gamma(10.0), std::log(362880.0), 1e-12);
  EXPECT_TRUE(sf::is_gamma_pole(-2.0));
  EXPECT_FALSE(sf::is_gamma_pole(-2.5));
  const auto g = sf::log_gamma_signed(-0.5);  // Γ(−½) = −2√π
  EXPECT_EQ(g.sign, -1);
  EXPECT_NEAR(std::exp(g.log_abs), 2.0 * std::sqrt(M_PI), 1e-13);
}

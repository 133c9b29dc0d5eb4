#include "gasflow/nondim.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace gasflow;

namespace {
ScaleSet default_scales() { return ScaleSet{}; }
}  // namespace

TEST(Nondim, DerivedScales) {
  auto s = default_scales();
  EXPECT_NEAR(s.a2(), 138131.1556, 1e-4);
  EXPECT_NEAR(s.density0(), 4.0e6 / 138131.1556, 1e-9);
  EXPECT_NEAR(s.time0(), 1000.0, 1e-9);  // l chosen as a * 1000 s
  EXPECT_NEAR(s.flux0(), 371.66 * s.density0(), 1e-9);
}

TEST(Nondim, TwentyFourHoursIsEightySixPointFour) {
  auto s = default_scales();
  EXPECT_NEAR(s.to_dimensionless(24.0 * 3600.0, Quantity::Time), 86.4, 1e-12);
}

TEST(Nondim, RoundTripAllQuantities) {
  auto s = default_scales();
  std::mt19937_64 rng(7);
  for (Quantity q : {Quantity::Pressure, Quantity::Density, Quantity::Flux,
                     Quantity::MassFlow, Quantity::Time, Quantity::Length,
                     Quantity::Volume, Quantity::Mass, Quantity::Work,
                     Quantity::Power}) {
    for (int i = 0; i < 25; ++i) {
      double v = std::ldexp(double(rng()) / double(UINT64_MAX) + 0.1, int(rng() % 20) - 10);
      double w = s.to_physical(s.to_dimensionless(v, q), q);
      EXPECT_NEAR(w, v, 1e-12 * std::abs(v)) << "quantity " << int(q);
    }
  }
}

TEST(Nondim, BetaVerticalWell) {
  // Vertical well, axis pointing down: g_par = +g.
  double beta = inclination_beta(units::kGravity, 1000.0, 371.66);
  EXPECT_NEAR(beta, -0.14204, 1e-5);
}

TEST(Nondim, BetaInclinedPipe) {
  // Pipe rising at 30 degrees, axis up-slope: g_par = -g sin(theta).
  double g_par = -units::kGravity * std::sin(30.0 * M_PI / 180.0);
  double beta = inclination_beta(g_par, 1000.0, 371.66);
  EXPECT_NEAR(beta, 0.07102, 1e-5);
}

TEST(Nondim, BetaHorizontalIsZero) {
  EXPECT_DOUBLE_EQ(inclination_beta(0.0, 5.0e4, 371.66), 0.0);
}

TEST(Nondim, Expm1OverMatchesExactAwayFromZero) {
  for (double b : {-2.0, -0.5, -1e-3, 1e-3, 0.3, 1.7}) {
    EXPECT_NEAR(expm1_over(b), std::expm1(b) / b, 1e-14 * std::abs(std::expm1(b) / b));
  }
}

TEST(Nondim, Expm1OverSeriesRegion) {
  // Inside the series window the expansion agrees with the exact value to
  // far better than double round-off of the naive quotient.
  for (double b : {-9e-5, -1e-6, 1e-6, 5e-5}) {
    long double exact = (std::expm1l((long double)b)) / (long double)b;
    EXPECT_NEAR(expm1_over(b), (double)exact, 1e-15);
  }
  EXPECT_DOUBLE_EQ(expm1_over(0.0), 1.0);
  EXPECT_DOUBLE_EQ(expm1_over(1e-11), 1.0);
}

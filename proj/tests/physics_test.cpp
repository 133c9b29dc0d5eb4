#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gasflow/augmented.hpp"
#include "gasflow/network.hpp"
#include "gasflow/nondim.hpp"
#include "gasflow/physics.hpp"
#include "gasflow/units.hpp"

namespace {

using gasflow::AugmentedNetwork;
using gasflow::NetworkModel;
using gasflow::ScaleSet;
using gasflow::SegPipe;
namespace physics = gasflow::physics;

SegPipe make_pipe(double length_m, double diameter, double friction, double beta,
                  const ScaleSet& scales) {
  SegPipe p;
  p.id = "test";
  p.length_nd = length_m / scales.nominal_length;
  p.diameter = diameter;
  p.area = 0.25 * M_PI * diameter * diameter;
  p.friction = friction;
  p.beta = beta;
  p.fric_coeff = friction * length_m / diameter * gasflow::expm1_over(beta);
  return p;
}

TEST(SignedSquare, ExactForm) {
  auto q = physics::signed_square(3.0, 0.0);
  EXPECT_DOUBLE_EQ(q.value, 9.0);
  EXPECT_DOUBLE_EQ(q.d1, 6.0);
  EXPECT_DOUBLE_EQ(q.d2, 2.0);

  auto qn = physics::signed_square(-3.0, 0.0);
  EXPECT_DOUBLE_EQ(qn.value, -9.0);
  EXPECT_DOUBLE_EQ(qn.d1, 6.0);
  EXPECT_DOUBLE_EQ(qn.d2, -2.0);
}

TEST(SignedSquare, SmoothedMatchesExactFarFromOrigin) {
  // With smoothing eps, phi*sqrt(phi^2+eps^2) ~ phi|phi| for |phi| >> eps.
  const double eps = 1e-3;
  auto q = physics::signed_square(2.0, eps);
  EXPECT_NEAR(q.value, 4.0, 1e-5);
  EXPECT_NEAR(q.d1, 4.0, 1e-5);
  // At the origin the smoothed form is differentiable with slope eps.
  auto q0 = physics::signed_square(0.0, eps);
  EXPECT_DOUBLE_EQ(q0.value, 0.0);
  EXPECT_NEAR(q0.d1, eps, 1e-15);
}

TEST(SignedSquare, DerivativesMatchFiniteDifferences) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> dist(-5.0, 5.0);
  const double h1 = 1e-6;
  const double h2 = 1e-4;
  for (int trial = 0; trial < 50; ++trial) {
    double phi = dist(rng);
    if (std::abs(phi) < 0.05) continue;  // keep away from the |phi| kink
    for (double eps : {0.0, 1e-2}) {
      auto q = physics::signed_square(phi, eps);
      double fd1 = (physics::signed_square(phi + h1, eps).value -
                    physics::signed_square(phi - h1, eps).value) /
                   (2 * h1);
      double fd2 = (physics::signed_square(phi + h2, eps).value - 2 * q.value +
                    physics::signed_square(phi - h2, eps).value) /
                   (h2 * h2);
      EXPECT_NEAR(q.d1, fd1, 1e-5 * (1 + std::abs(fd1)));
      EXPECT_NEAR(q.d2, fd2, 1e-4 * (1 + std::abs(fd2)));
    }
  }
}

TEST(Momentum, GradientsMatchFiniteDifferences) {
  ScaleSet scales;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> rho_dist(0.6, 1.5);
  std::uniform_real_distribution<double> phi_dist(-0.03, 0.03);
  const double h = 1e-7;
  for (double beta : {0.0, -0.14204, 0.07102}) {
    SegPipe pipe = make_pipe(10000.0, 0.6, 0.01, beta, scales);
    for (int trial = 0; trial < 30; ++trial) {
      double ri = rho_dist(rng);
      double rj = rho_dist(rng);
      double phi = phi_dist(rng);
      if (std::abs(phi) < 1e-3) continue;
      for (double eps : {0.0, 1e-3}) {
        auto m = physics::momentum(pipe, ri, rj, phi, eps);
        auto at = [&](double a, double b, double c) {
          return physics::momentum(pipe, a, b, c, eps).r;
        };
        double fdi = (at(ri + h, rj, phi) - at(ri - h, rj, phi)) / (2 * h);
        double fdj = (at(ri, rj + h, phi) - at(ri, rj - h, phi)) / (2 * h);
        double fdp = (at(ri, rj, phi + h) - at(ri, rj, phi - h)) / (2 * h);
        EXPECT_NEAR(m.d_rho_i, fdi, 1e-4 * (1 + std::abs(fdi)));
        EXPECT_NEAR(m.d_rho_j, fdj, 1e-4 * (1 + std::abs(fdj)));
        EXPECT_NEAR(m.d_phi, fdp, 1e-3 * (1 + std::abs(fdp)));
      }
    }
  }
}

TEST(Momentum, HorizontalAntisymmetry) {
  // For a level pipe, swapping endpoints and negating the flux negates the residual.
  ScaleSet scales;
  SegPipe pipe = make_pipe(25000.0, 0.5, 0.012, 0.0, scales);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> rho_dist(0.7, 1.4);
  std::uniform_real_distribution<double> phi_dist(-0.04, 0.04);
  for (int trial = 0; trial < 40; ++trial) {
    double ri = rho_dist(rng);
    double rj = rho_dist(rng);
    double phi = phi_dist(rng);
    double fwd = physics::momentum(pipe, ri, rj, phi, 0.0).r;
    double rev = physics::momentum(pipe, rj, ri, -phi, 0.0).r;
    EXPECT_NEAR(fwd, -rev, 1e-14);
  }
}

TEST(Momentum, TwoSegmentCompositionIsExactInSteadyState) {
  // Splitting a pipe in half and chaining the halves at the steady flux must
  // reproduce the endpoint densities of the unsplit pipe exactly, for level
  // and inclined runs alike.
  ScaleSet scales;
  const double L = 40000.0;
  for (double beta_full : {0.0, -0.1, 0.08}) {
    SegPipe full = make_pipe(L, 0.6, 0.01, beta_full, scales);
    SegPipe half = make_pipe(L / 2, 0.6, 0.01, beta_full / 2, scales);
    const double ri = 1.1;
    const double phi = 0.02;
    double rj_full = physics::steady_rho_downstream(full, ri, phi);
    double mid = physics::steady_rho_downstream(half, ri, phi);
    double rj_split = physics::steady_rho_downstream(half, mid, phi);
    EXPECT_NEAR(rj_full, rj_split, 1e-13);
    // And the momentum residual of each stage vanishes at those densities.
    EXPECT_NEAR(physics::momentum(full, ri, rj_full, phi, 0.0).r, 0.0, 1e-13);
    EXPECT_NEAR(physics::momentum(half, ri, mid, phi, 0.0).r, 0.0, 1e-13);
  }
}

TEST(Momentum, StaticColumnRatio) {
  // A closed vertical well of 1 km settles with p_bottom/p_top = exp(gL/a^2).
  ScaleSet scales;
  double beta = gasflow::inclination_beta(gasflow::units::kGravity, 1000.0,
                                          scales.sound_speed);
  EXPECT_NEAR(beta, -0.14204, 5e-6);
  double ratio = physics::static_column_ratio(beta);
  EXPECT_NEAR(ratio, 1.07360, 5e-6);
  EXPECT_NEAR(ratio, std::exp(gasflow::units::kGravity * 1000.0 /
                              (scales.sound_speed * scales.sound_speed)),
              1e-12);

  // Zero flux through the segmented well reproduces the hydrostatic profile.
  SegPipe well = make_pipe(1000.0, 0.3, 0.01, beta, scales);
  double rho_top = 1.0;
  double rho_bottom = physics::steady_rho_downstream(well, rho_top, 0.0);
  EXPECT_NEAR(rho_bottom / rho_top, ratio, 1e-12);
}

TEST(Momentum, SteadyPressureDropMatchesClosedForm) {
  // Level pipe: p_j^2 = p_i^2 - lambda L a^2 / D * phi|phi|. With p_i = 4 MPa,
  // mass flux 100 kg m^-2 s^-1, 100 km, D = 0.6, lambda = 0.01 the outlet
  // pressure is 3.7011 MPa.
  ScaleSet scales;
  const double a2 = scales.a2();
  const double p_i = 4.0e6;
  const double phi_phys = 100.0;
  const double L = 100000.0;
  const double D = 0.6;
  const double lam = 0.01;
  double pj_sq = p_i * p_i - lam * L * a2 / D * phi_phys * phi_phys;
  double p_j_expected = std::sqrt(pj_sq);
  EXPECT_NEAR(p_j_expected, 3.7011e6, 0.5e2);

  for (double length : {L, 10000.0}) {
    SegPipe pipe = make_pipe(length, D, lam, 0.0, scales);
    double expected = std::sqrt(p_i * p_i -
                                lam * length * a2 / D * phi_phys * phi_phys);
    double ri = p_i / scales.nominal_pressure;
    double phi = phi_phys / scales.flux0();
    double rj = physics::steady_rho_downstream(pipe, ri, phi);
    EXPECT_NEAR(rj * scales.nominal_pressure, expected, 1e-4);

    // The closed-form flux inverts the relation.
    double phi_back = physics::steady_flux(pipe, ri, rj);
    EXPECT_NEAR(phi_back, phi, 1e-12);
    double ri_back = physics::steady_rho_upstream(pipe, rj, phi);
    EXPECT_NEAR(ri_back, ri, 1e-12);
  }
}

TEST(Momentum, SteadyFluxSignFollowsPressureOrdering) {
  ScaleSet scales;
  SegPipe pipe = make_pipe(20000.0, 0.6, 0.01, 0.0, scales);
  EXPECT_GT(physics::steady_flux(pipe, 1.2, 1.0), 0.0);
  EXPECT_LT(physics::steady_flux(pipe, 1.0, 1.2), 0.0);
  EXPECT_DOUBLE_EQ(physics::steady_flux(pipe, 1.0, 1.0), 0.0);
}

TEST(Momentum, SteadyInversionThrowsWhenDropExceedsPressure) {
  ScaleSet scales;
  SegPipe pipe = make_pipe(200000.0, 0.3, 0.02, 0.0, scales);
  EXPECT_THROW(physics::steady_rho_downstream(pipe, 0.5, 0.1), std::domain_error);
}

TEST(CompressorWork, MatchesDirectEvaluation) {
  // W(alpha) = gamma T / (gamma - 1) * (286.76 / G) * (alpha^m - 1),
  // m = (gamma - 1) / gamma. Default gas: gamma 1.4, G 0.6, T 288.7 K.
  NetworkModel net;
  net.junctions.push_back({"a"});
  net.junctions.push_back({"b"});
  gasflow::Pipe p;
  p.id = "p";
  p.from = "a";
  p.to = "b";
  p.length = 10000.0;
  p.diameter = 0.6;
  net.pipes.push_back(p);
  net.junctions[0].slack = true;
  net.junctions[0].slack_pressure = gasflow::TimeSeries::constant(4.0e6);
  AugmentedNetwork aug = gasflow::segment_network(net, 10.0);

  const double gamma = 1.4;
  const double G = 0.6;
  const double T = 288.7;
  const double m = (gamma - 1.0) / gamma;
  double coeff = gamma * T / (gamma - 1.0) * (286.76 / G);
  EXPECT_NEAR(aug.work_coefficient(), coeff, 1e-9 * coeff);
  EXPECT_NEAR(aug.work_exponent(), m, 1e-15);

  double w2 = coeff * (std::pow(2.0, m) - 1.0);
  EXPECT_NEAR(std::pow(2.0, m), 1.21901, 1e-5);
  EXPECT_NEAR(w2, 1.0577e5, 1e2);

  auto we = physics::compressor_work_nd(aug, 2.0);
  EXPECT_NEAR(we.w * aug.scales.a2(), w2, 1e-6 * w2);

  // Derivatives of the work curve against central differences.
  const double h = 1e-6;
  for (double alpha : {1.0, 1.3, 1.9}) {
    auto w = physics::compressor_work_nd(aug, alpha);
    auto wp = physics::compressor_work_nd(aug, alpha + h);
    auto wm = physics::compressor_work_nd(aug, alpha - h);
    double fd1 = (wp.w - wm.w) / (2 * h);
    double fd2 = (wp.w - 2 * w.w + wm.w) / (h * h);
    EXPECT_NEAR(w.dw, fd1, 1e-5 * (1 + std::abs(fd1)));
    EXPECT_NEAR(w.d2w, fd2, 1e-2 * (1 + std::abs(fd2)));
  }
  // No work at unit ratio.
  EXPECT_DOUBLE_EQ(physics::compressor_work_nd(aug, 1.0).w, 0.0);
}

}  // namespace

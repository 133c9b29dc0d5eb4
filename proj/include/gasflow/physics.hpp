#pragma once

#include <cmath>
#include <stdexcept>

#include "gasflow/augmented.hpp"

namespace gasflow::physics {

/// phi|phi| and derivatives; with eps > 0 the smoothed variant
/// phi*sqrt(phi^2 + eps^2) is used instead.
struct SignedSquare {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

inline SignedSquare signed_square(double phi, double eps = 0.0) {
  SignedSquare r;
  if (eps > 0.0) {
    double s = std::sqrt(phi * phi + eps * eps);
    r.value = phi * s;
    r.d1 = (2.0 * phi * phi + eps * eps) / s;
    r.d2 = phi * (2.0 * phi * phi + 3.0 * eps * eps) / (s * s * s);
  } else {
    double ab = std::abs(phi);
    r.value = phi * ab;
    r.d1 = 2.0 * ab;
    r.d2 = phi >= 0.0 ? 2.0 : -2.0;
  }
  return r;
}

/// Momentum balance residual of one segment,
///   r = e^beta rho_j^2 - rho_i^2 + K phi|phi|,
/// where K is the segment friction coefficient and phi the (+) flux
/// variable. All quantities dimensionless.
struct MomentumEval {
  double r = 0.0;
  double d_rho_i = 0.0, d_rho_j = 0.0, d_phi = 0.0;
  double d2_rho_i = 0.0, d2_rho_j = 0.0, d2_phi = 0.0;  // diagonal second derivatives
};

inline MomentumEval momentum(const SegPipe& p, double rho_i, double rho_j, double phi,
                             double smoothing_eps = 0.0) {
  MomentumEval m;
  const double eb = std::exp(p.beta);
  const SignedSquare q = signed_square(phi, smoothing_eps);
  m.r = eb * rho_j * rho_j - rho_i * rho_i + p.fric_coeff * q.value;
  m.d_rho_i = -2.0 * rho_i;
  m.d_rho_j = 2.0 * eb * rho_j;
  m.d_phi = p.fric_coeff * q.d1;
  m.d2_rho_i = -2.0;
  m.d2_rho_j = 2.0 * eb;
  m.d2_phi = p.fric_coeff * q.d2;
  return m;
}

/// Steady flux through a segment given endpoint densities (closed form
/// root of the momentum balance).
inline double steady_flux(const SegPipe& p, double rho_i, double rho_j) {
  const double eb = std::exp(p.beta);
  const double q = (rho_i * rho_i - eb * rho_j * rho_j) / p.fric_coeff;
  return q >= 0.0 ? std::sqrt(q) : -std::sqrt(-q);
}

/// Upstream density from downstream density and steady flux.
inline double steady_rho_upstream(const SegPipe& p, double rho_j, double phi) {
  const double eb = std::exp(p.beta);
  const double r2 = eb * rho_j * rho_j + p.fric_coeff * phi * std::abs(phi);
  if (r2 <= 0.0) throw std::domain_error("steady_rho_upstream: no positive density solves the balance");
  return std::sqrt(r2);
}

/// Downstream density from upstream density and steady flux.
inline double steady_rho_downstream(const SegPipe& p, double rho_i, double phi) {
  const double eb = std::exp(p.beta);
  const double r2 = (rho_i * rho_i - p.fric_coeff * phi * std::abs(phi)) / eb;
  if (r2 <= 0.0) throw std::domain_error("steady_rho_downstream: no positive density solves the balance");
  return std::sqrt(r2);
}

/// Density ratio rho_to/rho_from of a static column (zero flux).
inline double static_column_ratio(double beta) { return std::exp(-beta / 2.0); }

/// Adiabatic compression work per unit mass and derivatives in the ratio
/// alpha, on the dimensionless work scale of the augmented network.
struct WorkEval {
  double w = 0.0;
  double dw = 0.0;
  double d2w = 0.0;
};

inline WorkEval compressor_work_nd(const AugmentedNetwork& aug, double alpha) {
  WorkEval we;
  const double c = aug.work_coefficient_nd();
  const double m = aug.work_exponent();
  const double am = std::pow(alpha, m);
  we.w = c * (am - 1.0);
  we.dw = c * m * am / alpha;
  we.d2w = c * m * (m - 1.0) * am / (alpha * alpha);
  return we;
}

}  // namespace gasflow::physics

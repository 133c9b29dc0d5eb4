#pragma once

#include <cmath>
#include <stdexcept>

#include "gasflow/units.hpp"

namespace gasflow {

enum class Quantity {
  Pressure,
  Density,
  Flux,      // mass flux, kg/(m^2 s)
  MassFlow,  // kg/s
  Time,
  Length,
  Volume,
  Mass,
  Work,      // J/kg
  Power,
};

/// Characteristic scales tying the dimensionless model to SI units.
/// Given sound speed a, nominal pressure p0 and nominal length l:
///   rho0 = p0/a^2, phi0 = a*rho0, t0 = l/a, V0 = l*1m^2, m0 = rho0*V0.
/// Mass flows are scaled by phi0 through a unit area, so dimensionless
/// nodal balances carry pipe areas in m^2.
struct ScaleSet {
  double sound_speed = 371.66;        // a [m/s]
  double nominal_pressure = 4.0e6;    // p0 [Pa]
  double nominal_length = 371660.0;   // l [m]

  double a2() const { return sound_speed * sound_speed; }
  double density0() const { return nominal_pressure / a2(); }
  double flux0() const { return sound_speed * density0(); }
  double time0() const { return nominal_length / sound_speed; }
  double volume0() const { return nominal_length; }
  double mass0() const { return density0() * volume0(); }
  double mass_flow0() const { return flux0(); }
  double work0() const { return a2(); }
  double power0() const { return work0() * mass_flow0(); }

  double scale_for(Quantity q) const {
    switch (q) {
      case Quantity::Pressure: return nominal_pressure;
      case Quantity::Density: return density0();
      case Quantity::Flux: return flux0();
      case Quantity::MassFlow: return mass_flow0();
      case Quantity::Time: return time0();
      case Quantity::Length: return nominal_length;
      case Quantity::Volume: return volume0();
      case Quantity::Mass: return mass0();
      case Quantity::Work: return work0();
      case Quantity::Power: return power0();
    }
    throw std::invalid_argument("unknown quantity");
  }

  double to_dimensionless(double physical, Quantity q) const {
    return physical / scale_for(q);
  }
  double to_physical(double dimensionless, Quantity q) const {
    return dimensionless * scale_for(q);
  }
};

/// Inclination exponent of a pipe segment, beta = -2 g_par L / a^2, with L
/// the physical segment length and g_par the gravity component along the
/// pipe axis (positive when the axis points downhill). For a pipe rising at
/// angle theta the axis convention gives g_par = -g sin(theta); a storage
/// well has its axis pointing vertically down, so g_par = +g and beta < 0.
inline double inclination_beta(double g_parallel, double length_m, double sound_speed) {
  return -2.0 * g_parallel * length_m / (sound_speed * sound_speed);
}

/// (e^b - 1)/b, series expansion near zero.
inline double expm1_over(double b) {
  double ab = std::abs(b);
  if (ab < 1e-10) return 1.0;
  if (ab < 1e-4) return 1.0 + b * (0.5 + b * (1.0 / 6.0 + b / 24.0));
  return std::expm1(b) / b;
}

}  // namespace gasflow

#pragma once

namespace gasflow::units {

inline constexpr double kPsiToPa = 6894.757;
inline constexpr double kGravity = 9.81;
/// Specific gas constant of air, J/(kg K). Dividing by the gas gravity G
/// gives the specific gas constant of the transported gas.
inline constexpr double kAirGasConstant = 286.76;
inline constexpr double kSecondsPerHour = 3600.0;

inline constexpr double psi_to_pa(double psi) { return psi * kPsiToPa; }
inline constexpr double pa_to_psi(double pa) { return pa / kPsiToPa; }

}  // namespace gasflow::units

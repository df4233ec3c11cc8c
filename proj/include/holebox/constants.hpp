#pragma once

#include <numbers>

/// Physical constants in the project unit system.
///
/// Energies are in meV, lengths in nm, magnetic fields in T, electric fields
/// in mV/nm and frequencies in GHz. With these units e*E*L is directly an
/// energy in meV, so the elementary charge never appears explicitly.
namespace holebox::constants {

inline constexpr double pi = std::numbers::pi;

namespace codata {
inline constexpr double hbar_Js    = 1.054571817e-34;
inline constexpr double m0_kg      = 9.1093837015e-31;
inline constexpr double e_C        = 1.602176634e-19;
inline constexpr double h_Js       = 6.62607015e-34;
inline constexpr double mu_B_JperT = 9.2740100783e-24;
}  // namespace codata

/// ħ²/(2m₀) in meV·nm².
inline constexpr double hbar2_over_2m0 =
    codata::hbar_Js * codata::hbar_Js / (2.0 * codata::m0_kg) * 1e18 / (codata::e_C * 1e-3);

/// Bohr magneton in meV/T.
inline constexpr double mu_B = codata::mu_B_JperT / (codata::e_C * 1e-3);

/// e·E[mV/nm]·L[nm] in meV.
inline constexpr double e_scale = 1.0;

/// Planck constant in meV·ns, so that f[GHz] = E[meV] / h_planck.
inline constexpr double h_planck = codata::h_Js / (codata::e_C * 1e-3) * 1e9;

/// ħ/e in T·nm² (the flux-quantum scale entering eA/ħ).
inline constexpr double hbar_over_e = codata::hbar_Js / codata::e_C * 1e18;

/// Convert an energy in meV to a frequency in GHz.
constexpr double to_ghz(double energy_meV) noexcept { return energy_meV / h_planck; }

}  // namespace holebox::constants

#pragma once

// Physical constants (CODATA 2018 exact values where defined).
namespace qnd::constants {

inline constexpr double planck_h = 6.62607015e-34;     // J s
inline constexpr double speed_of_light = 299792458.0;  // m/s
inline constexpr double boltzmann_kB = 1.380649e-23;   // J/K
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg
inline constexpr double sr87_mass_u = 86.9089;         // u

inline constexpr double sr87_mass_kg = sr87_mass_u * atomic_mass_unit;

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double two_pi = 2.0 * pi;

}  // namespace qnd::constants

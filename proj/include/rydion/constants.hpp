#pragma once

// CODATA 2018 values. e, hbar and amu are exact in the 2019 SI redefinition;
// eps0 and m_e carry experimental uncertainty far below anything resolved by
// the tolerances used in this library.
namespace rydion::constants {

inline constexpr double pi     = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

inline constexpr double e    = 1.602176634e-19;    // elementary charge, C
inline constexpr double eps0 = 8.8541878128e-12;   // vacuum permittivity, F/m
inline constexpr double hbar = 1.054571817e-34;    // reduced Planck, J s
inline constexpr double m_e  = 9.1093837015e-31;   // electron mass, kg
inline constexpr double amu  = 1.66053906660e-27;  // atomic mass unit, kg

inline constexpr double four_pi_eps0 = 4.0 * pi * eps0;

// Derived quantities, kept consistent with the primary set by construction.
inline constexpr double a0 =
    four_pi_eps0 * hbar * hbar / (m_e * e * e);            // Bohr radius, m
inline constexpr double e_ryd = e * e / (2.0 * four_pi_eps0 * a0);  // J

}  // namespace rydion::constants

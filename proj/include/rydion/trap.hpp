#pragma once

#include "rydion/species.hpp"

namespace rydion {

// Linear Paul trap: RF gradient alpha, static gradient beta, drive omega_rf.
struct TrapConfig {
  double alpha = 0.0;     // V/m^2
  double beta = 0.0;      // V/m^2
  double omega_rf = 0.0;  // rad/s

  void validate() const;
};

struct SecularFrequencies {
  double omega_z = 0.0;    // rad/s
  double omega_rho = 0.0;  // rad/s
  // Linear-chain operation wants omega_rho > omega_z; violating that is a
  // warning condition, not an error.
  bool linear_chain_ok = false;
};

// omega_z = 2 sqrt(e beta / M), omega_rho = sqrt(2) sqrt((e alpha/(M w_rf))^2
// - e beta / M). Throws an instability error when the radial argument is not
// positive, reporting both competing terms.
SecularFrequencies secular_frequencies(const IonSpecies& species,
                                       const TrapConfig& trap);

// Classical field-ionization threshold gradient (4/27) e^7 m^3 /
// ((4 pi eps0)^4 hbar^6 n^6) in V/m^2.
double ionization_gradient(int n);

// Saddle geometry of the combined Coulomb plus static-gradient potential on
// the trap axis: the saddle sits at +-z for gradient beta, with potential
// energy v (J). The depth is normalized so that v equals the level binding
// energy exactly at the threshold gradient returned by ionization_gradient.
struct SaddlePoint {
  double z;  // m
  double v;  // J, negative
};
SaddlePoint saddle_point(double beta);

// First-order static-gradient shift of a level: zero for s states,
// (2/15) e beta_eff r2 (2|m| - j - 9/2) for p states. Even in m.
double quadrupole_shift(const RydbergLevel& level, double beta_eff, double r2);

// Relative change of the secular frequencies when the ion is promoted to a
// Rydberg state with s-p splitting delta_e_sp (J) and radial element r_sp (m).
// Magnitudes only; `shallower` records the physical direction of the change.
struct FrequencyShifts {
  double dz_rel = 0.0;    // |delta omega_z / omega_z|
  double drho_rel = 0.0;  // |delta omega_rho / omega_rho|
  bool shallower = true;
};
FrequencyShifts rydberg_frequency_shifts(const IonSpecies& species,
                                         const TrapConfig& trap,
                                         double delta_e_sp, double r_sp);

// Second-order dipole-dipole (van der Waals) scale e^4 r_sp^4 /
// ((4 pi eps0)^2 |delta_e_sp| zeta^6) in J for two ions a distance zeta apart.
double vdw_estimate(double delta_e_sp, double r_sp, double zeta);

}  // namespace rydion

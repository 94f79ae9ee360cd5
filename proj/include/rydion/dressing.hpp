#pragma once

// Microwave dressing of a Rydberg s/p pair into an effective two-level
// system, and laser dressing of the two ground states through the same
// Rydberg manifold via a first-order canonical (Schrieffer-Wolff style)
// transformation of the five-level ladder.

#include <array>
#include <utility>

namespace rydion {

// Microwave drive parameters. omega1/delta1 address the lower (n's <-> n'p)
// transition that gets adiabatically eliminated, omega2/delta2 the dressing
// transition. d1, d2 are the radial dipole matrix elements in C m.
struct MWConfig {
  double omega1 = 0.0;  // rad/s
  double omega2 = 0.0;  // rad/s
  double delta1 = 0.0;  // rad/s
  double delta2 = 0.0;  // rad/s
  double d1 = 0.0;      // C m
  double d2 = 0.0;      // C m

  // Heuristic gate for the adiabatic elimination: the eliminated level must
  // be weakly admixed and far detuned compared to the retained dynamics.
  bool adiabatic_ok() const;
};

// Effective two-level description of the dressed Rydberg pair. The dipole
// operator of the dressed system has a S_z-diagonal oscillating amplitude
// d_diag_amp and a transverse (spin-flip) amplitude d_trans_amp.
struct DressedTwoLevel {
  double eta = 0.0;           // admixture omega1 / (2 delta1)
  double delta2_prime = 0.0;  // shifted detuning, rad/s
  std::array<double, 3> h{};  // effective field (omega2, 0, delta2_prime)
  double D1 = 0.0;            // (d1/3)^2, C^2 m^2
  double D2 = 0.0;            // (d2/3)^2, C^2 m^2
  double d_diag_amp = 0.0;    // -eta sqrt(D1), C m
  double d_trans_amp = 0.0;   // sqrt(D2), C m
  bool valid = false;         // adiabatic_ok() of the input
};

// Errors when omega1 != 0 with delta1 == 0 (no elimination possible).
// Validity failure only clears the flag, it is not an error.
DressedTwoLevel dress_rydberg(const MWConfig& cfg);

// Adds the two weak dressing lasers that couple the ground states g1 -> ns
// and g2 -> np to the microwave-dressed manifold.
struct FiveLevelConfig {
  MWConfig mw;
  double omega_s = 0.0;  // rad/s, g1 <-> ns Rabi frequency
  double omega_p = 0.0;  // rad/s, g2 <-> np Rabi frequency
  double delta_s = 0.0;  // rad/s
  double delta_p = 0.0;  // rad/s
};

// First-order dressing of the two ground states. Coefficients are the
// admixture amplitudes of (n'p, ns, np) in dressed g1 (column 1) and
// dressed g2 (column 2). gamma_s and gamma_p expose the closed-form
// prefactors with their cubic denominators; residual_rel reports the
// decoupling defect of the generator built from these coefficients.
struct GroundDressing {
  double c_pprime1 = 0.0;
  double c_s1 = 0.0;
  double c_p1 = 0.0;
  double c_pprime2 = 0.0;
  double c_s2 = 0.0;
  double c_p2 = 0.0;
  double gamma_s = 0.0;
  double gamma_p = 0.0;
  double residual_rel = 0.0;
  bool valid = false;
};

GroundDressing dress_ground(const FiveLevelConfig& cfg);

// Laser detunings that park each ground state in resonance with a single
// dressed Rydberg branch: delta_s = -delta2 and delta_p at the lower
// microwave branch. Returns (delta_s, delta_p).
std::pair<double, double> special_detunings(double delta1, double delta2,
                                            double omega1);

// Dipole amplitudes of the dressed ground-state pair, inherited from the
// Rydberg admixtures.
struct GroundDipole {
  double trans_amp = 0.0;  // c_p1 c_s2 sqrt(D2), C m
  double diag_amp = 0.0;   // c_s2 c_pprime2 sqrt(D1), C m
};

GroundDipole ground_dipole(const GroundDressing& gd, double D1, double D2);

// Photon scattering rate of a dressed state carrying admixture amplitude c
// of a Rydberg level that decays at rate gamma.
double scattering_rate(double c, double gamma);

}  // namespace rydion

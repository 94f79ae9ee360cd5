#pragma once

#include <Eigen/Dense>
#include <vector>

#include "rydion/species.hpp"

namespace rydion {

// Equilibrium chain geometry in dimensionless axial coordinates u_i (lengths
// in units of zeta). zeta = 0 marks a purely dimensionless geometry; the
// site-gradient accessor requires a physical zeta.
struct CrystalGeometry {
  int n_ions = 0;
  double zeta = 0.0;       // m
  std::vector<double> u;   // ascending
  double residual = 0.0;   // max force-balance defect at u

  void validate() const;

  // Sum_{j != i} |u_i - u_j|^-3, the dimensionless neighbor weight entering
  // both the gradient corrections and the site detunings. i is 0-based.
  double neighbor_sum(int i) const;
};

enum class Axis { x, y, z };

struct NormalModes {
  Axis axis = Axis::z;
  std::vector<double> freqs;  // rad/s, ascending
  Eigen::MatrixXd modes;      // orthogonal; column k belongs to freqs[k]
};

// zeta = (e^2 / (4 pi eps0 M omega_z^2))^(1/3)
double length_scale(const IonSpecies& species, double omega_z);

// Damped Newton solve of the dimensionless force balance
//   u_i = sum_{j<i} (u_i-u_j)^-2 - sum_{j>i} (u_j-u_i)^-2.
// Supported for 1 <= N <= 50.
CrystalGeometry equilibrium_positions(int n_ions);

// Harmonic expansion around equilibrium. Axial stiffness rows sum to
// omega_z^2 (center-of-mass invariance); radial ones to omega_rho^2.
NormalModes normal_modes(const CrystalGeometry& geometry, double omega_z,
                         double omega_rho, Axis axis);

// Static-gradient correction from the neighbors' Coulomb field,
// delta_beta_i = (e / (8 pi eps0)) sum_j |Z_i - Z_j|^-3 in V/m^2.
// Requires a physical length scale on the geometry.
std::vector<double> site_gradient_shifts(const CrystalGeometry& geometry);

// Site-resolved detuning profile b_z * sum_j |u_i - u_j|^-3, in whatever
// units b_z carries.
std::vector<double> site_detunings(const CrystalGeometry& geometry, double b_z);

}  // namespace rydion

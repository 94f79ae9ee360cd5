#pragma once

// Effective spin-1/2 chain of the dressed Rydberg ions: flip-flop (XY)
// couplings from the oscillating transverse dipoles, Ising terms from the
// static admixture dipoles, and site-resolved longitudinal fields from the
// crystal's field-gradient variation. Spin operators are S = sigma/2
// throughout; basis states index ions by bits, bit (i-1) set means ion i
// points up.

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "rydion/crystal.hpp"
#include "rydion/dressing.hpp"
#include "rydion/kernels.hpp"
#include "rydion/species.hpp"

namespace rydion {

// The pair sum of the interaction Hamiltonian can run over ordered pairs
// (i != j, every unordered pair counted twice) or distinct pairs (i < j).
// Coupling fields below always store the per-ordered-pair value; the
// convention decides the weight at operator assembly. Calibration against
// the excitation-transfer benchmark fixed `ordered` as the default.
enum class PairConvention { ordered, distinct };

enum class EnergyUnits { si, coupling_units };

struct SpinChainModel {
  int n_sites = 0;
  EnergyUnits units = EnergyUnits::si;
  PairConvention pair_convention = PairConvention::ordered;

  // Single-particle fields (energy): H_1 = sum_i hx_i S_x^i + hz_i S_z^i.
  std::vector<double> hx;
  std::vector<double> hz;

  // Pair couplings (energy, symmetric, zero diagonal), stored per ordered
  // pair. The linear S_z term and the scalar shift produced by expanding
  // the Ising product around S_z = +-1/2 are kept explicit so eigenvalues
  // match the unexpanded interaction.
  Eigen::MatrixXd xy;
  Eigen::MatrixXd zz;
  std::vector<double> zfield_extra;
  double scalar_offset = 0.0;

  // Multiplier turning stored ordered-pair values into per-unordered-pair
  // operator coefficients.
  double pair_weight() const {
    return pair_convention == PairConvention::ordered ? 1.0 : 0.5;
  }

  void validate() const;
};

// Chain in units of the nearest-neighbor coupling scale: xy_ij = |u_ij|^-3,
// hz_i = -bz_over_j * sum_k |u_ik|^-3, hx_i = omega2_over_j. No Ising
// sector. Positions come from the dimensionless geometry only.
SpinChainModel build_chain_dimensionless(
    const CrystalGeometry& geometry, double bz_over_j, double omega2_over_j,
    PairConvention pc = PairConvention::ordered);

// Physical-unit chain from a crystal with a physical length scale and a
// per-ion dressed description. r2_p is the Rydberg orbit's mean squared
// radius entering the field-gradient detuning variation.
SpinChainModel build_chain(const CrystalGeometry& geometry,
                           const IonSpecies& species, double omega_z,
                           const std::vector<DressedTwoLevel>& dressed,
                           double r2_p,
                           PairConvention pc = PairConvention::ordered);

// Uniform dressing across the chain.
SpinChainModel build_chain(const CrystalGeometry& geometry,
                           const IonSpecies& species, double omega_z,
                           const DressedTwoLevel& dressed, double r2_p,
                           PairConvention pc = PairConvention::ordered);

// Interaction energy scale J = -(2 M omega_z^2 / e^2) D2 (negative for
// D2 > 0): the flip-flop coupling of two ions at unit dimensionless
// spacing.
double interaction_scale(double mass, double omega_z, double D2);

// Dense 2^N x 2^N matrix, N <= 14. Real symmetric since the chain has no
// S_y terms.
Eigen::MatrixXd dense_hamiltonian(const SpinChainModel& model);

// Matrix-free operator, N <= 24. apply() is read-only and safe to share
// between threads. Memory: one real double per basis state for the
// precomputed diagonal.
class ChainOperator {
 public:
  explicit ChainOperator(const SpinChainModel& model);

  int n_sites() const { return n_sites_; }
  std::size_t dim() const { return std::size_t(1) << n_sites_; }

  // out = H in. Buffers must not alias.
  void apply(const kernels::cplx* in, kernels::cplx* out) const;

  const std::vector<double>& diagonal() const { return diag_; }

 private:
  struct PairTerm {
    int lo, hi;   // site indices, lo < hi
    double g;     // flip-flop matrix element
  };

  int n_sites_ = 0;
  std::vector<double> diag_;
  std::vector<double> hx_;
  std::vector<PairTerm> pairs_;
};

// State of the chain in the product basis. Amplitudes are ordered by basis
// index; bit (i-1) of the index gives the orientation of ion i.
struct SpinState {
  int n_sites = 0;
  std::vector<kernels::cplx> amp;

  static SpinState basis_state(int n_sites, std::uint32_t bits);
  // Ion `site` (1-based) up, everyone else down.
  static SpinState single_up(int n_sites, int site);

  double norm() const;
  void normalize();
  void validate() const;
};

}  // namespace rydion

#pragma once

// Unitary time evolution of chain states and the end-to-end excitation
// transfer experiment. Time is measured in seconds for SI-unit models and
// in units of hbar over the coupling scale for dimensionless ones.

#include <Eigen/Dense>
#include <vector>

#include "rydion/spinchain.hpp"

namespace rydion {

// <S_z> of ion `site` (1-based), in [-1/2, 1/2].
double site_magnetization(const SpinState& state, int site);

struct EvolveOptions {
  enum class Method {
    automatic,  // dense spectral up to 14 sites, Krylov beyond
    dense,
    krylov,
  };
  Method method = Method::automatic;
  // Local truncation error per Krylov step; steps are subdivided until the
  // estimate drops below this.
  double tol = 1e-9;
  bool store_states = false;
};

struct Trajectory {
  std::vector<double> times;
  // One row per time, one column per site.
  Eigen::MatrixXd sz;
  // max |norm(t) - 1| and max |<H>(t) - <H>(0)| / energy scale over the run,
  // both measured on the reconstructed states.
  double norm_drift = 0.0;
  double energy_drift_rel = 0.0;
  std::vector<SpinState> states;  // only when store_states
};

// Evolve psi0 (the state at t = 0) and sample it at the given strictly
// increasing times.
Trajectory evolve(const SpinChainModel& model, const SpinState& psi0,
                  const std::vector<double>& times,
                  const EvolveOptions& opts = {});

struct TransferOptions {
  double dt = 0.005;  // sample spacing, hbar/J units
  PairConvention pair_convention = PairConvention::ordered;
  // Start from ion 1 down with the rest up instead of the default ion 1 up
  // with the rest down, and track the minority population accordingly.
  bool invert_initial = false;
  EvolveOptions evolve;
};

struct TransferReport {
  double efficiency = 0.0;     // peak transferred population at the far end
  double transfer_time = 0.0;  // location of that peak, hbar/J units
  Trajectory trajectory;
};

// Resonant excitation transfer across an equilibrium chain of n_ions, built
// in coupling units from (bz_over_j, omega2_over_j) and scanned on
// [0, t_max].
TransferReport transfer_experiment(int n_ions, double bz_over_j,
                                   double omega2_over_j, double t_max,
                                   const TransferOptions& opts = {});

}  // namespace rydion

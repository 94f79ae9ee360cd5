#include "rydion/gate.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <sstream>

#include "rydion/constants.hpp"
#include "rydion/errors.hpp"

namespace rydion {

using constants::hbar;
using constants::pi;
using constants::two_pi;
using cplx = std::complex<double>;

PulseSample pulse(const PulseProfile& profile, double t) {
  if (!(profile.duration > 0.0)) {
    fail(ErrorKind::validation, "pulse duration must be positive");
  }
  if (t < 0.0 || t > profile.duration) {
    std::ostringstream os;
    os << "pulse evaluated at t=" << t << " outside [0, "
       << profile.duration << "]";
    fail(ErrorKind::validation, os.str());
  }
  PulseSample out;
  switch (profile.envelope) {
    case PulseProfile::Envelope::sin2: {
      double s = std::sin(pi * t / profile.duration);
      out.omega_s = profile.omega_s_peak * s * s;
      break;
    }
    case PulseProfile::Envelope::frozen:
      out.omega_s = profile.omega_s_peak;
      break;
  }
  switch (profile.detuning) {
    case PulseProfile::Detuning::constant:
      out.delta_s = profile.delta_s0;
      break;
    case PulseProfile::Detuning::linear_ramp:
      out.delta_s = profile.delta_s0 + (profile.delta_s1 - profile.delta_s0) *
                                           (t / profile.duration);
      break;
  }
  return out;
}

GateConfig default_gate_config() {
  CrystalGeometry chain = equilibrium_positions(10);
  double spacing = std::abs(chain.u[1] - chain.u[0]);
  double coupling_scale = hbar * two_pi * 500e6;

  GateConfig cfg;
  cfg.ion_m = 1;
  cfg.ion_n = 2;
  cfg.omega2 = two_pi * 57.5e6;
  cfg.delta2_m = -two_pi * 279e6;
  cfg.delta2_n = -two_pi * 667e6;
  cfg.j_pair = -coupling_scale / (spacing * spacing * spacing);
  cfg.pulse.duration = 1e-5;
  cfg.pulse.omega_s_peak = 1e7;
  cfg.pulse.envelope = PulseProfile::Envelope::sin2;
  cfg.pulse.detuning = PulseProfile::Detuning::constant;
  cfg.pulse.delta_s0 = -two_pi * 5e6;
  return cfg;
}

std::pair<double, double> detunings_from_chain(const CrystalGeometry& geometry,
                                               double b_z, int ion_m,
                                               int ion_n) {
  geometry.validate();
  if (ion_m < 1 || ion_m > geometry.n_ions || ion_n < 1 ||
      ion_n > geometry.n_ions || ion_m == ion_n) {
    fail(ErrorKind::validation, "gate ions must be distinct chain sites");
  }
  return {b_z * geometry.neighbor_sum(ion_m - 1) / hbar,
          b_z * geometry.neighbor_sum(ion_n - 1) / hbar};
}

namespace {

Eigen::Matrix3d single_ion_block(double omega_s, double delta_s,
                                 double omega2, double delta2) {
  Eigen::Matrix3d h = Eigen::Matrix3d::Zero();
  h(0, 0) = hbar * delta_s;
  h(2, 2) = -hbar * delta2;
  h(0, 1) = h(1, 0) = hbar * omega_s / 2.0;
  h(1, 2) = h(2, 1) = hbar * omega2 / 2.0;
  return h;
}

}  // namespace

GateBlocks block_hamiltonians(const GateConfig& cfg, double t) {
  if (cfg.ion_m == cfg.ion_n) {
    fail(ErrorKind::validation, "gate ions must be distinct");
  }
  PulseSample ps = pulse(cfg.pulse, t);

  GateBlocks out;
  out.h12 = single_ion_block(ps.omega_s, ps.delta_s, cfg.omega2, cfg.delta2_m);
  out.h21 = single_ion_block(ps.omega_s, ps.delta_s, cfg.omega2, cfg.delta2_n);

  out.h11 = Eigen::MatrixXd::Zero(9, 9);
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      for (int c = 0; c < 3; ++c) {
        out.h11(3 * a + c, 3 * b + c) += out.h12(a, b);  // ion m slow axis
        out.h11(3 * c + a, 3 * c + b) += out.h21(a, b);
      }
    }
  }
  // Resonant exchange |s,p> <-> |p,s> between the two Rydberg manifolds.
  out.h11(5, 7) += cfg.j_pair;
  out.h11(7, 5) += cfg.j_pair;
  return out;
}

namespace {

// Follows one spectral branch through the pulse by maximal eigenvector
// overlap, bisecting the step whenever the continuation is ambiguous.
class BranchTracker {
 public:
  BranchTracker(std::function<Eigen::MatrixXd(double)> hfun,
                Eigen::VectorXd start, double t0)
      : hfun_(std::move(hfun)), vec_(std::move(start)), t_(t0) {
    energy_ = select(t_, vec_, 0, &vec_);
  }

  double energy() const { return energy_; }

  double advance(double t1) {
    energy_ = select_refined(t_, vec_, t1, 0, &vec_);
    t_ = t1;
    return energy_;
  }

 private:
  // Eigenpair at time t with the largest overlap against ref. Returns the
  // eigenvalue, writes the (sign-aligned) eigenvector, and reports the
  // overlap and the local gap geometry when requested.
  double select(double t, const Eigen::VectorXd& ref, double* overlap_out,
                Eigen::VectorXd* vec_out, double* gap_out = nullptr,
                double* range_out = nullptr) {
    Eigen::MatrixXd h = hfun_(t);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    if (es.info() != Eigen::Success) {
      fail(ErrorKind::non_convergence, "eigensolve failed during tracking");
    }
    const Eigen::VectorXd& lam = es.eigenvalues();
    int dim = int(lam.size());
    double range = lam(dim - 1) - lam(0);

    // A (near-)scalar matrix keeps every direction an eigenvector; hold the
    // reference instead of picking an arbitrary basis column.
    if (range <= 1e-14 * std::max(std::abs(lam(0)), std::abs(lam(dim - 1)))) {
      if (overlap_out) *overlap_out = 1.0;
      if (gap_out) *gap_out = 0.0;
      if (range_out) *range_out = range;
      *vec_out = ref;
      return lam(0);
    }

    int best = 0;
    double best_ov = -1.0;
    for (int j = 0; j < dim; ++j) {
      double ov = std::abs(es.eigenvectors().col(j).dot(ref));
      if (ov > best_ov) {
        best_ov = ov;
        best = j;
      }
    }
    Eigen::VectorXd v = es.eigenvectors().col(best);
    if (v.dot(ref) < 0.0) v = -v;

    if (overlap_out) *overlap_out = best_ov;
    if (gap_out) {
      double gap = range;
      if (best > 0) gap = std::min(gap, lam(best) - lam(best - 1));
      if (best + 1 < dim) gap = std::min(gap, lam(best + 1) - lam(best));
      *gap_out = gap;
    }
    if (range_out) *range_out = range;
    *vec_out = v;
    return lam(best);
  }

  double select_refined(double t0, const Eigen::VectorXd& v0, double t1,
                        int depth, Eigen::VectorXd* vec_out) {
    double overlap, gap, range;
    Eigen::VectorXd v1;
    double e1 = select(t1, v0, &overlap, &v1, &gap, &range);
    if (overlap >= 0.999) {
      *vec_out = v1;
      return e1;
    }
    // Refining cannot resolve a genuine crossing, and past a point it only
    // burns depth; fall back on the hard acceptance threshold there.
    bool unresolvable = depth >= 24 || gap <= 1e-6 * range;
    if (!unresolvable) {
      double tm = 0.5 * (t0 + t1);
      Eigen::VectorXd vm;
      select_refined(t0, v0, tm, depth + 1, &vm);
      return select_refined(tm, vm, t1, depth + 1, vec_out);
    }
    if (overlap >= 0.9) {
      *vec_out = v1;
      return e1;
    }
    std::ostringstream os;
    os << "lost the tracked branch at t=" << t1 << " (overlap " << overlap
       << ")";
    fail(ErrorKind::tracking_loss, os.str());
  }

  std::function<Eigen::MatrixXd(double)> hfun_;
  Eigen::VectorXd vec_;
  double t_;
  double energy_ = 0.0;
};

double simpson(const std::vector<double>& f, double h) {
  // Caller guarantees an odd point count.
  double acc = f.front() + f.back();
  for (std::size_t k = 1; k + 1 < f.size(); ++k) {
    acc += f[k] * (k % 2 == 1 ? 4.0 : 2.0);
  }
  return acc * h / 3.0;
}

struct BlockEvolution {
  Eigen::VectorXcd psi;
  double theta = 0.0;  // unwrapped phase of the bare-configuration amplitude
  cplx a_prev{1.0, 0.0};

  explicit BlockEvolution(int dim) : psi(Eigen::VectorXcd::Zero(dim)) {
    psi(0) = cplx(1.0, 0.0);
  }

  void step(const Eigen::MatrixXd& h, double dt) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    Eigen::MatrixXcd v = es.eigenvectors().cast<cplx>();
    Eigen::VectorXcd c = v.adjoint() * psi;
    for (int k = 0; k < c.size(); ++k) {
      double ph = -es.eigenvalues()(k) * dt / hbar;
      c(k) *= cplx(std::cos(ph), std::sin(ph));
    }
    psi = v * c;
    cplx a = psi(0);
    theta += std::arg(a * std::conj(a_prev));
    a_prev = a;
  }

  double leakage() const { return 1.0 - std::norm(psi(0)); }
};

}  // namespace

GateReport entanglement_phase(const GateConfig& cfg, int n_grid,
                              int tdse_steps) {
  if (cfg.ion_m == cfg.ion_n) {
    fail(ErrorKind::validation, "gate ions must be distinct");
  }
  if (!(cfg.pulse.duration > 0.0)) {
    fail(ErrorKind::validation, "pulse duration must be positive");
  }
  if (n_grid < 3) {
    fail(ErrorKind::validation, "phase grid needs at least 3 points");
  }
  if (tdse_steps < 0) {
    fail(ErrorKind::validation, "negative step count");
  }
  if (n_grid % 2 == 0) ++n_grid;

  const double T = cfg.pulse.duration;
  GateReport rep;
  rep.t.resize(n_grid);
  for (int k = 0; k < n_grid; ++k) {
    rep.t[k] = T * double(k) / double(n_grid - 1);
  }

  auto h11 = [&cfg](double t) { return block_hamiltonians(cfg, t).h11; };
  auto h12 = [&cfg](double t) {
    return Eigen::MatrixXd(block_hamiltonians(cfg, t).h12);
  };
  auto h21 = [&cfg](double t) {
    return Eigen::MatrixXd(block_hamiltonians(cfg, t).h21);
  };

  Eigen::VectorXd bare9 = Eigen::VectorXd::Zero(9);
  bare9(0) = 1.0;
  Eigen::VectorXd bare3 = Eigen::VectorXd::Zero(3);
  bare3(0) = 1.0;

  BranchTracker tr11(h11, bare9, 0.0);
  BranchTracker tr12(h12, bare3, 0.0);
  BranchTracker tr21(h21, bare3, 0.0);

  rep.eps11.resize(n_grid);
  rep.eps12.resize(n_grid);
  rep.eps21.resize(n_grid);
  rep.eps11[0] = tr11.energy();
  rep.eps12[0] = tr12.energy();
  rep.eps21[0] = tr21.energy();
  for (int k = 1; k < n_grid; ++k) {
    rep.eps11[k] = tr11.advance(rep.t[k]);
    rep.eps12[k] = tr12.advance(rep.t[k]);
    rep.eps21[k] = tr21.advance(rep.t[k]);
  }

  // Conditional-phase integrand; accumulated with Simpson over point pairs
  // and a trapezoid filler on the odd samples so the trace is monotone in
  // resolution while the final value stays a clean composite Simpson sum.
  std::vector<double> f(n_grid);
  for (int k = 0; k < n_grid; ++k) {
    f[k] = (rep.eps11[k] - rep.eps12[k] - rep.eps21[k]) / hbar;
  }
  double h = rep.t[1] - rep.t[0];
  rep.phi_ent.assign(n_grid, 0.0);
  for (int k = 2; k < n_grid; k += 2) {
    rep.phi_ent[k] =
        rep.phi_ent[k - 2] + h / 3.0 * (f[k - 2] + 4.0 * f[k - 1] + f[k]);
    rep.phi_ent[k - 1] = rep.phi_ent[k - 2] + 0.5 * h * (f[k - 2] + f[k - 1]);
  }
  rep.phi_final = rep.phi_ent.back();
  rep.phi_single_m = -simpson(rep.eps12, h) / hbar;
  rep.phi_single_n = -simpson(rep.eps21, h) / hbar;

  if (tdse_steps > 0) {
    double dt = T / tdse_steps;
    BlockEvolution ev11(9), ev12(3), ev21(3);
    for (int k = 0; k < tdse_steps; ++k) {
      double tm = (k + 0.5) * dt;
      GateBlocks blocks = block_hamiltonians(cfg, tm);
      ev11.step(blocks.h11, dt);
      ev12.step(Eigen::MatrixXd(blocks.h12), dt);
      ev21.step(Eigen::MatrixXd(blocks.h21), dt);
    }
    rep.leakage11 = ev11.leakage();
    rep.leakage12 = ev12.leakage();
    rep.leakage21 = ev21.leakage();
    rep.phi_tdse = -(ev11.theta - ev12.theta - ev21.theta);
  }
  return rep;
}

}  // namespace rydion

#include "rydion/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "rydion/constants.hpp"
#include "rydion/errors.hpp"

namespace rydion {

using kernels::cplx;

namespace {

double site_mag_raw(const cplx* amp, std::size_t dim, int bit) {
  std::size_t len = std::size_t(1) << bit;
  double up = 0.0;
  for (std::size_t s = len; s < dim; s += 2 * len) {
    up += kernels::norm_sq(amp + s, len);
  }
  double total = kernels::norm_sq(amp, dim);
  return up / total - 0.5;
}

// Observable bookkeeping shared by both propagators.
struct Recorder {
  const ChainOperator* op;
  double e0 = 0.0;
  double energy_scale = 0.0;
  std::vector<cplx> scratch;
  Trajectory* out;
  bool store_states;
  int n_sites;

  void prime(const std::vector<cplx>& psi0) {
    scratch.resize(psi0.size());
    op->apply(psi0.data(), scratch.data());
    e0 = kernels::dot(psi0.data(), scratch.data(), psi0.size()).real();
    energy_scale = std::max(
        std::abs(e0), std::sqrt(kernels::norm_sq(scratch.data(), scratch.size())));
  }

  void record(std::size_t row, const std::vector<cplx>& psi) {
    std::size_t dim = psi.size();
    for (int i = 0; i < n_sites; ++i) {
      out->sz(row, i) = site_mag_raw(psi.data(), dim, i);
    }
    double nrm = std::sqrt(kernels::norm_sq(psi.data(), dim));
    out->norm_drift = std::max(out->norm_drift, std::abs(nrm - 1.0));
    op->apply(psi.data(), scratch.data());
    double e = kernels::dot(psi.data(), scratch.data(), dim).real() /
               (nrm * nrm);
    if (energy_scale > 0.0) {
      out->energy_drift_rel =
          std::max(out->energy_drift_rel, std::abs(e - e0) / energy_scale);
    }
    if (store_states) {
      SpinState st;
      st.n_sites = n_sites;
      st.amp = psi;
      out->states.push_back(std::move(st));
    }
  }
};

void evolve_dense(const SpinChainModel& model, const std::vector<cplx>& psi0,
                  const std::vector<double>& times, double phase_scale,
                  Recorder& rec) {
  Eigen::MatrixXd h = dense_hamiltonian(model);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  if (es.info() != Eigen::Success) {
    fail(ErrorKind::non_convergence, "eigensolve of the chain failed");
  }
  const Eigen::MatrixXd& v = es.eigenvectors();
  const Eigen::VectorXd& lam = es.eigenvalues();
  std::size_t dim = psi0.size();

  Eigen::VectorXd re(dim), im(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    re(k) = psi0[k].real();
    im(k) = psi0[k].imag();
  }
  Eigen::VectorXd cre = v.transpose() * re;
  Eigen::VectorXd cim = v.transpose() * im;

  Eigen::VectorXd dre(dim), dim_(dim);
  std::vector<cplx> psi(dim);
  for (std::size_t row = 0; row < times.size(); ++row) {
    double t = times[row] / phase_scale;
    for (std::size_t k = 0; k < dim; ++k) {
      double ph = -lam(k) * t;
      double c = std::cos(ph), s = std::sin(ph);
      dre(k) = cre(k) * c - cim(k) * s;
      dim_(k) = cre(k) * s + cim(k) * c;
    }
    Eigen::VectorXd pre = v * dre;
    Eigen::VectorXd pim = v * dim_;
    for (std::size_t k = 0; k < dim; ++k) psi[k] = cplx(pre(k), pim(k));
    rec.record(row, psi);
  }
}

// exp(-i tau T) e1 for the Lanczos tridiagonal defined by alpha[0..k],
// beta[1..k].
Eigen::VectorXcd small_exponential(const std::vector<double>& alpha,
                                   const std::vector<double>& beta,
                                   int k, double tau) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(k + 1, k + 1);
  for (int i = 0; i <= k; ++i) {
    t(i, i) = alpha[i];
    if (i > 0) {
      t(i, i - 1) = beta[i];
      t(i - 1, i) = beta[i];
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  Eigen::VectorXd q1 = es.eigenvectors().row(0);
  Eigen::VectorXcd u(k + 1);
  for (int i = 0; i <= k; ++i) {
    cplx acc(0.0, 0.0);
    for (int j = 0; j <= k; ++j) {
      double ph = -es.eigenvalues()(j) * tau;
      acc += es.eigenvectors()(i, j) * q1(j) * cplx(std::cos(ph), std::sin(ph));
    }
    u(i) = acc;
  }
  return u;
}

struct KrylovWorkspace {
  std::vector<cplx> q_prev, q_cur, w, accum, saved;
};

// One Lanczos evolution attempt over tau. Returns false when the error
// estimate stays above tol at the subspace size limit. The state is only
// modified on success. Pass one builds the tridiagonal with three live
// vectors; pass two regenerates the same basis (bit-identical, since it
// replays the same operations with the stored coefficients) and accumulates
// the propagated state.
bool krylov_try_step(const ChainOperator& op, std::vector<cplx>& state,
                     double tau, double tol, KrylovWorkspace& ws) {
  constexpr int m_max = 30;
  std::size_t dim = state.size();

  double state_norm = std::sqrt(kernels::norm_sq(state.data(), dim));
  if (!(state_norm > 0.0)) {
    fail(ErrorKind::validation, "cannot propagate a zero state");
  }

  std::vector<double> alpha, beta;  // beta[i] couples q_{i-1} and q_i
  alpha.reserve(m_max + 1);
  beta.assign(1, 0.0);

  ws.q_prev.assign(dim, cplx(0.0, 0.0));
  ws.q_cur = state;
  kernels::scale(ws.q_cur.data(), 1.0 / state_norm, dim);
  ws.w.resize(dim);

  int used = -1;
  for (int k = 0; k <= m_max; ++k) {
    op.apply(ws.q_cur.data(), ws.w.data());
    double a = kernels::dot(ws.q_cur.data(), ws.w.data(), dim).real();
    alpha.push_back(a);
    kernels::axpy(ws.w.data(), ws.q_cur.data(), -a, dim);
    if (k > 0) {
      kernels::axpy(ws.w.data(), ws.q_prev.data(), -beta[k], dim);
    }
    double b = std::sqrt(kernels::norm_sq(ws.w.data(), dim));

    // Invariant subspace: the small exponential is exact.
    if (b <= 1e-13 * (std::abs(a) + (k > 0 ? beta[k] : 0.0)) + 1e-300) {
      used = k;
      break;
    }
    // A-posteriori residual bound for the projected exponential.
    Eigen::VectorXcd u = small_exponential(alpha, beta, k, tau);
    double err = b * std::abs(u(k)) * std::abs(tau);
    if (err <= tol) {
      used = k;
      break;
    }
    if (k == m_max) return false;
    beta.push_back(b);
    std::swap(ws.q_prev, ws.q_cur);
    ws.q_cur = ws.w;
    kernels::scale(ws.q_cur.data(), 1.0 / b, dim);
  }

  Eigen::VectorXcd u = small_exponential(alpha, beta, used, tau);

  // Pass two: replay the recurrence and accumulate state_norm * sum u_j q_j.
  ws.q_prev.assign(dim, cplx(0.0, 0.0));
  ws.q_cur = state;
  kernels::scale(ws.q_cur.data(), 1.0 / state_norm, dim);
  ws.accum.assign(dim, cplx(0.0, 0.0));
  for (int k = 0; k <= used; ++k) {
    kernels::axpy(ws.accum.data(), ws.q_cur.data(), u(k) * state_norm, dim);
    if (k == used) break;
    op.apply(ws.q_cur.data(), ws.w.data());
    kernels::axpy(ws.w.data(), ws.q_cur.data(), -alpha[k], dim);
    if (k > 0) {
      kernels::axpy(ws.w.data(), ws.q_prev.data(), -beta[k], dim);
    }
    std::swap(ws.q_prev, ws.q_cur);
    ws.q_cur = ws.w;
    kernels::scale(ws.q_cur.data(), 1.0 / beta[k + 1], dim);
  }
  state = ws.accum;
  return true;
}

void krylov_advance(const ChainOperator& op, std::vector<cplx>& state,
                    double tau, double tol, KrylovWorkspace& ws) {
  if (tau == 0.0) return;
  ws.saved = state;
  int n_sub = 1;
  const int max_doublings = 24;
  for (int attempt = 0; attempt <= max_doublings; ++attempt) {
    bool ok = true;
    for (int s = 0; s < n_sub; ++s) {
      if (!krylov_try_step(op, state, tau / n_sub, tol, ws)) {
        ok = false;
        break;
      }
    }
    if (ok) return;
    state = ws.saved;
    n_sub *= 2;
  }
  std::ostringstream os;
  os << "propagation over dt=" << tau
     << " did not reach the requested tolerance after " << max_doublings
     << " subdivisions";
  fail(ErrorKind::non_convergence, os.str());
}

void evolve_krylov(const std::vector<cplx>& psi0,
                   const std::vector<double>& times, double phase_scale,
                   double tol, const ChainOperator& op, Recorder& rec) {
  std::vector<cplx> cur = psi0;
  KrylovWorkspace ws;
  double t_prev = 0.0;
  for (std::size_t row = 0; row < times.size(); ++row) {
    krylov_advance(op, cur, (times[row] - t_prev) / phase_scale, tol, ws);
    t_prev = times[row];
    rec.record(row, cur);
  }
}

}  // namespace

double site_magnetization(const SpinState& state, int site) {
  state.validate();
  if (site < 1 || site > state.n_sites) {
    fail(ErrorKind::validation, "site index out of range");
  }
  return site_mag_raw(state.amp.data(), state.amp.size(), site - 1);
}

Trajectory evolve(const SpinChainModel& model, const SpinState& psi0,
                  const std::vector<double>& times,
                  const EvolveOptions& opts) {
  model.validate();
  psi0.validate();
  if (psi0.n_sites != model.n_sites) {
    fail(ErrorKind::validation, "state and model disagree on site count");
  }
  if (times.empty()) {
    fail(ErrorKind::validation, "need at least one sample time");
  }
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (!(times[k] > times[k - 1])) {
      fail(ErrorKind::validation, "sample times must be strictly increasing");
    }
  }

  double phase_scale =
      model.units == EnergyUnits::si ? constants::hbar : 1.0;

  Trajectory traj;
  traj.times = times;
  traj.sz.resize(times.size(), model.n_sites);

  ChainOperator op(model);
  Recorder rec;
  rec.op = &op;
  rec.out = &traj;
  rec.store_states = opts.store_states;
  rec.n_sites = model.n_sites;
  rec.prime(psi0.amp);

  bool dense = opts.method == EvolveOptions::Method::dense ||
               (opts.method == EvolveOptions::Method::automatic &&
                model.n_sites <= 14);
  if (dense) {
    evolve_dense(model, psi0.amp, times, phase_scale, rec);
  } else {
    evolve_krylov(psi0.amp, times, phase_scale, opts.tol, op, rec);
  }
  return traj;
}

TransferReport transfer_experiment(int n_ions, double bz_over_j,
                                   double omega2_over_j, double t_max,
                                   const TransferOptions& opts) {
  if (n_ions < 2) {
    fail(ErrorKind::validation, "transfer needs at least two ions");
  }
  if (!(t_max > 0.0) || !(opts.dt > 0.0)) {
    fail(ErrorKind::validation, "t_max and dt must be positive");
  }
  if (t_max / opts.dt > 5e6) {
    fail(ErrorKind::size_limit, "time grid too fine (over 5e6 samples)");
  }

  CrystalGeometry geometry = equilibrium_positions(n_ions);
  SpinChainModel model = build_chain_dimensionless(
      geometry, bz_over_j, omega2_over_j, opts.pair_convention);

  std::uint32_t up_mask = std::uint32_t(1);
  if (opts.invert_initial) {
    up_mask = (std::uint32_t(1) << n_ions) - 1u - 1u;
  }
  SpinState psi0 = SpinState::basis_state(n_ions, up_mask);

  std::size_t n_steps = std::size_t(std::floor(t_max / opts.dt + 1e-9));
  std::vector<double> times(n_steps + 1);
  for (std::size_t k = 0; k <= n_steps; ++k) times[k] = k * opts.dt;

  TransferReport report;
  report.trajectory = evolve(model, psi0, times, opts.evolve);

  // Population being transferred to the far end: up for the default start,
  // down when the pattern is inverted.
  const Eigen::MatrixXd& sz = report.trajectory.sz;
  auto population = [&](std::size_t row) {
    double m = sz(row, n_ions - 1);
    return opts.invert_initial ? 0.5 - m : 0.5 + m;
  };

  std::size_t best = 0;
  double best_p = population(0);
  for (std::size_t k = 1; k < times.size(); ++k) {
    double p = population(k);
    if (p > best_p) {
      best_p = p;
      best = k;
    }
  }

  double t_star = times[best];
  double p_star = best_p;
  if (best > 0 && best + 1 < times.size()) {
    // Quadratic vertex through the three samples around the maximum.
    double ym = population(best - 1), y0 = population(best),
           yp = population(best + 1);
    double denom = ym - 2.0 * y0 + yp;
    if (denom < 0.0) {
      double shift = std::clamp(0.5 * (ym - yp) / denom, -1.0, 1.0);
      t_star += shift * opts.dt;
      p_star = y0 - 0.25 * (ym - yp) * shift;
    }
  }
  report.efficiency = p_star;
  report.transfer_time = t_star;
  return report;
}

}  // namespace rydion

#include "rydion/spinchain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rydion/constants.hpp"
#include "rydion/errors.hpp"

namespace rydion {

using namespace constants;
using kernels::cplx;

namespace {

void check_coupling_matrix(const Eigen::MatrixXd& m, int n,
                           const char* name) {
  if (m.rows() != n || m.cols() != n) {
    fail(ErrorKind::validation,
         std::string(name) + " coupling matrix has wrong shape");
  }
  double scale = std::max(1e-300, m.cwiseAbs().maxCoeff());
  for (int i = 0; i < n; ++i) {
    if (m(i, i) != 0.0) {
      fail(ErrorKind::validation,
           std::string(name) + " coupling matrix must have zero diagonal");
    }
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(m(i, j) - m(j, i)) > 1e-12 * scale) {
        fail(ErrorKind::validation,
             std::string(name) + " coupling matrix must be symmetric");
      }
    }
  }
  if (!m.allFinite()) {
    fail(ErrorKind::validation,
         std::string(name) + " coupling matrix has non-finite entries");
  }
}

void check_field(const std::vector<double>& v, int n, const char* name) {
  if (int(v.size()) != n) {
    fail(ErrorKind::validation,
         std::string(name) + " field has wrong length");
  }
  for (double x : v) {
    if (!std::isfinite(x)) {
      fail(ErrorKind::validation,
           std::string(name) + " field has non-finite entries");
    }
  }
}

}  // namespace

void SpinChainModel::validate() const {
  if (n_sites < 1) {
    fail(ErrorKind::validation, "chain needs at least one site");
  }
  check_field(hx, n_sites, "hx");
  check_field(hz, n_sites, "hz");
  check_field(zfield_extra, n_sites, "zfield_extra");
  check_coupling_matrix(xy, n_sites, "xy");
  check_coupling_matrix(zz, n_sites, "zz");
  if (!std::isfinite(scalar_offset)) {
    fail(ErrorKind::validation, "scalar offset is non-finite");
  }
}

SpinChainModel build_chain_dimensionless(const CrystalGeometry& geometry,
                                         double bz_over_j,
                                         double omega2_over_j,
                                         PairConvention pc) {
  geometry.validate();
  int n = geometry.n_ions;

  SpinChainModel m;
  m.n_sites = n;
  m.units = EnergyUnits::coupling_units;
  m.pair_convention = pc;
  m.hx.assign(n, omega2_over_j);
  m.hz.resize(n);
  m.zfield_extra.assign(n, 0.0);
  m.xy = Eigen::MatrixXd::Zero(n, n);
  m.zz = Eigen::MatrixXd::Zero(n, n);

  // In these units the flip-flop coupling between sites is the inverse cube
  // of their spacing, and the longitudinal field per site is proportional
  // to the same neighbor sum that detunes it. The relative sign between the
  // two was fixed by calibrating the end-to-end transfer benchmark.
  for (int i = 0; i < n; ++i) {
    m.hz[i] = -bz_over_j * geometry.neighbor_sum(i);
    for (int j = i + 1; j < n; ++j) {
      double d = std::abs(geometry.u[i] - geometry.u[j]);
      double g = 1.0 / (d * d * d);
      m.xy(i, j) = g;
      m.xy(j, i) = g;
    }
  }
  return m;
}

SpinChainModel build_chain(const CrystalGeometry& geometry,
                           const IonSpecies& species, double omega_z,
                           const std::vector<DressedTwoLevel>& dressed,
                           double r2_p, PairConvention pc) {
  geometry.validate();
  species.validate();
  int n = geometry.n_ions;
  if (!(geometry.zeta > 0.0)) {
    fail(ErrorKind::validation,
         "physical chain needs a crystal with a physical length scale");
  }
  if (int(dressed.size()) != n) {
    fail(ErrorKind::validation,
         "need one dressed description per ion, got " +
             std::to_string(dressed.size()));
  }
  if (!(omega_z > 0.0) || !(r2_p >= 0.0)) {
    fail(ErrorKind::validation, "omega_z must be positive and r2_p >= 0");
  }

  SpinChainModel m;
  m.n_sites = n;
  m.units = EnergyUnits::si;
  m.pair_convention = pc;
  m.hx.resize(n);
  m.hz.resize(n);
  m.zfield_extra.assign(n, 0.0);
  m.xy = Eigen::MatrixXd::Zero(n, n);
  m.zz = Eigen::MatrixXd::Zero(n, n);

  // Site fields: uniform dressed detuning plus the variation produced by
  // each ion sitting in its neighbors' field gradients.
  double b_z = -0.4 * species.mass * omega_z * omega_z * r2_p;
  for (int i = 0; i < n; ++i) {
    m.hx[i] = hbar * dressed[i].h[0];
    m.hz[i] = hbar * dressed[i].delta2_prime +
              b_z * geometry.neighbor_sum(i);
  }

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double dist = geometry.zeta * std::abs(geometry.u[i] - geometry.u[j]);
      double nu = -2.0 / (four_pi_eps0 * dist * dist * dist);
      double xy = nu * std::sqrt(dressed[i].D2 * dressed[j].D2);
      double zz = nu * std::sqrt(dressed[i].D1 * dressed[j].D1) *
                  dressed[i].eta * dressed[j].eta;
      m.xy(i, j) = xy;
      m.xy(j, i) = xy;
      m.zz(i, j) = zz;
      m.zz(j, i) = zz;
    }
  }

  // The Ising product expanded around S_z eigenvalues leaves a linear field
  // and a constant; both follow from the zz rows.
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    double row = 0.0;
    for (int j = 0; j < n; ++j) row += m.zz(i, j);
    m.zfield_extra[i] = row;
    total += row;
  }
  m.scalar_offset = 0.25 * total;
  return m;
}

SpinChainModel build_chain(const CrystalGeometry& geometry,
                           const IonSpecies& species, double omega_z,
                           const DressedTwoLevel& dressed, double r2_p,
                           PairConvention pc) {
  std::vector<DressedTwoLevel> per_ion(geometry.n_ions, dressed);
  return build_chain(geometry, species, omega_z, per_ion, r2_p, pc);
}

double interaction_scale(double mass, double omega_z, double D2) {
  if (!(mass > 0.0) || !(omega_z > 0.0)) {
    fail(ErrorKind::validation, "interaction scale needs mass, omega_z > 0");
  }
  return -2.0 * mass * omega_z * omega_z * D2 / (e * e);
}

Eigen::MatrixXd dense_hamiltonian(const SpinChainModel& model) {
  model.validate();
  if (model.n_sites > 14) {
    fail(ErrorKind::size_limit,
         "dense form supports at most 14 sites, got " +
             std::to_string(model.n_sites));
  }
  int n = model.n_sites;
  std::size_t dim = std::size_t(1) << n;
  double w = model.pair_weight();

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t b = 0; b < dim; ++b) {
    double d = w * model.scalar_offset;
    for (int i = 0; i < n; ++i) {
      double si = (b >> i) & 1u ? 0.5 : -0.5;
      d += (model.hz[i] + w * model.zfield_extra[i]) * si;
      for (int j = i + 1; j < n; ++j) {
        double sj = (b >> j) & 1u ? 0.5 : -0.5;
        d += 2.0 * w * model.zz(i, j) * si * sj;
      }
    }
    h(b, b) = d;

    for (int i = 0; i < n; ++i) {
      h(b ^ (std::size_t(1) << i), b) += 0.5 * model.hx[i];
      for (int j = i + 1; j < n; ++j) {
        bool bi = (b >> i) & 1u, bj = (b >> j) & 1u;
        if (bi != bj) {
          std::size_t flip = b ^ (std::size_t(1) << i) ^ (std::size_t(1) << j);
          h(flip, b) += w * model.xy(i, j);
        }
      }
    }
  }
  return h;
}

ChainOperator::ChainOperator(const SpinChainModel& model) {
  model.validate();
  if (model.n_sites > 24) {
    fail(ErrorKind::size_limit,
         "matrix-free form supports at most 24 sites, got " +
             std::to_string(model.n_sites));
  }
  n_sites_ = model.n_sites;
  int n = n_sites_;
  double w = model.pair_weight();
  std::size_t d = dim();

  hx_ = model.hx;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (model.xy(i, j) != 0.0) {
        pairs_.push_back({i, j, w * model.xy(i, j)});
      }
    }
  }

  // Diagonal by bit recursion: each state inherits from the one with its
  // lowest set bit cleared, so the quadratic part costs one zz row-slice
  // per state instead of a full double loop.
  std::vector<double> hzt(n);
  double hzt_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    hzt[i] = model.hz[i] + w * model.zfield_extra[i];
    hzt_sum += hzt[i];
  }
  bool has_zz = model.zz.cwiseAbs().maxCoeff() > 0.0;
  std::vector<double> zz_row(n, 0.0);
  double zz_all = 0.0;
  if (has_zz) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) zz_row[i] += model.zz(i, j);
      zz_all += zz_row[i];
    }
  }

  diag_.resize(d);
  diag_[0] = -0.5 * hzt_sum + w * model.scalar_offset + 0.25 * w * zz_all;
  for (std::size_t b = 1; b < d; ++b) {
    std::size_t parent = b & (b - 1);
    int i = __builtin_ctzll(b);
    double val = diag_[parent] + hzt[i];
    if (has_zz) {
      // Flipping bit i up adds w*(2*sum_{j set} zz_ij - row_i) from the
      // pairwise products against the parent's spin pattern.
      double set_sum = 0.0;
      std::size_t rest = parent;
      while (rest) {
        int j = __builtin_ctzll(rest);
        set_sum += model.zz(i, j);
        rest &= rest - 1;
      }
      val += w * (2.0 * set_sum - zz_row[i]);
    }
    diag_[b] = val;
  }
}

void ChainOperator::apply(const cplx* in, cplx* out) const {
  std::size_t n = dim();
  std::fill(out, out + n, cplx(0.0, 0.0));
  kernels::diag_axpy(out, diag_.data(), in, n);

  for (int i = 0; i < n_sites_; ++i) {
    double c = 0.5 * hx_[i];
    if (c == 0.0) continue;
    std::size_t len = std::size_t(1) << i;
    for (std::size_t s = 0; s < n; s += 2 * len) {
      kernels::axpy(out + s, in + s + len, c, len);
      kernels::axpy(out + s + len, in + s, c, len);
    }
  }

  // Flip-flop terms connect states differing in exactly the two bits of a
  // pair; with lo < hi the partners sit at a fixed offset, so the coupling
  // walks contiguous runs of length 2^lo.
  for (const PairTerm& pt : pairs_) {
    std::size_t llo = std::size_t(1) << pt.lo;
    std::size_t lhi = std::size_t(1) << pt.hi;
    std::size_t offset = lhi - llo;
    for (std::size_t s = 0; s < n; s += 2 * lhi) {
      for (std::size_t b = s; b < s + lhi; b += 2 * llo) {
        std::size_t p = b + llo;
        kernels::axpy(out + p, in + p + offset, pt.g, llo);
        kernels::axpy(out + p + offset, in + p, pt.g, llo);
      }
    }
  }
}

SpinState SpinState::basis_state(int n_sites, std::uint32_t bits) {
  if (n_sites < 1 || n_sites > 24) {
    fail(ErrorKind::size_limit, "state size must be between 1 and 24 sites");
  }
  std::size_t dim = std::size_t(1) << n_sites;
  if (bits >= dim) {
    fail(ErrorKind::validation, "basis index out of range");
  }
  SpinState st;
  st.n_sites = n_sites;
  st.amp.assign(dim, cplx(0.0, 0.0));
  st.amp[bits] = cplx(1.0, 0.0);
  return st;
}

SpinState SpinState::single_up(int n_sites, int site) {
  if (site < 1 || site > n_sites) {
    fail(ErrorKind::validation, "site index out of range");
  }
  return basis_state(n_sites, std::uint32_t(1) << (site - 1));
}

double SpinState::norm() const {
  return std::sqrt(kernels::norm_sq(amp.data(), amp.size()));
}

void SpinState::normalize() {
  double nrm = norm();
  if (!(nrm > 0.0)) {
    fail(ErrorKind::validation, "cannot normalize a zero state");
  }
  kernels::scale(amp.data(), 1.0 / nrm, amp.size());
}

void SpinState::validate() const {
  if (n_sites < 1 || n_sites > 24 ||
      amp.size() != (std::size_t(1) << n_sites)) {
    fail(ErrorKind::validation, "state dimension does not match site count");
  }
  if (std::abs(norm() - 1.0) > 1e-8) {
    fail(ErrorKind::validation, "state is not normalized");
  }
}

}  // namespace rydion

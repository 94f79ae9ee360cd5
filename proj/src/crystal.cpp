#include "rydion/crystal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "rydion/constants.hpp"
#include "rydion/errors.hpp"

namespace rydion {

using namespace constants;

void CrystalGeometry::validate() const {
  if (n_ions < 1 || int(u.size()) != n_ions) {
    fail(ErrorKind::validation, "geometry size mismatch");
  }
  for (int i = 1; i < n_ions; ++i) {
    if (!(u[i] > u[i - 1])) {
      fail(ErrorKind::validation, "positions must be strictly ascending");
    }
  }
  double sum = std::accumulate(u.begin(), u.end(), 0.0);
  if (std::abs(sum) > 1e-12 * std::max(1.0, std::abs(u.back()))) {
    fail(ErrorKind::validation, "center of charge must sit at the origin");
  }
  for (int i = 0; i < n_ions; ++i) {
    if (std::abs(u[i] + u[n_ions - 1 - i]) > 1e-10) {
      fail(ErrorKind::validation, "equilibrium must be mirror symmetric");
    }
  }
  if (residual > 1e-10) {
    fail(ErrorKind::validation, "equilibrium residual above 1e-10");
  }
}

double CrystalGeometry::neighbor_sum(int i) const {
  if (i < 0 || i >= n_ions) {
    fail(ErrorKind::validation, "site index out of range");
  }
  double s = 0.0;
  for (int j = 0; j < n_ions; ++j) {
    if (j == i) continue;
    double d = std::abs(u[i] - u[j]);
    s += 1.0 / (d * d * d);
  }
  return s;
}

double length_scale(const IonSpecies& species, double omega_z) {
  if (!(omega_z > 0.0)) fail(ErrorKind::validation, "length scale needs omega_z > 0");
  species.validate();
  return std::cbrt(e * e /
                   (four_pi_eps0 * species.mass * omega_z * omega_z));
}

namespace {

// Force balance F_i = u_i - sum_{j<i}(u_i-u_j)^-2 + sum_{j>i}(u_j-u_i)^-2.
void force_residual(const std::vector<double>& u, std::vector<double>& f) {
  int n = int(u.size());
  for (int i = 0; i < n; ++i) {
    double acc = u[i];
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      double d = u[i] - u[j];
      acc -= (d > 0 ? 1.0 : -1.0) / (d * d);
    }
    f[i] = acc;
  }
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

CrystalGeometry equilibrium_positions(int n_ions) {
  if (n_ions < 1 || n_ions > 50) {
    fail(ErrorKind::size_limit,
         "equilibrium solve supports 1 <= N <= 50, got " +
             std::to_string(n_ions));
  }

  CrystalGeometry geo;
  geo.n_ions = n_ions;
  geo.u.assign(n_ions, 0.0);
  if (n_ions == 1) {
    geo.residual = 0.0;
    return geo;
  }

  // Linear initial guess with the empirical N^-0.56 spacing law, which keeps
  // Newton in its basin for every chain length in range.
  double spacing = 2.0 * std::pow(double(n_ions), -0.56);
  for (int i = 0; i < n_ions; ++i) {
    geo.u[i] = (i - 0.5 * (n_ions - 1)) * spacing;
  }

  std::vector<double> f(n_ions), trial(n_ions), f_trial(n_ions);
  Eigen::MatrixXd jac(n_ions, n_ions);
  Eigen::VectorXd rhs(n_ions);

  force_residual(geo.u, f);
  double fnorm = max_abs(f);
  const double tol = 1e-12;
  const int max_iter = 200;
  bool converged = fnorm < tol;

  for (int it = 0; it < max_iter && !converged; ++it) {
    // J_ii = 1 + 2 sum |d|^-3, J_ij = -2 |d|^-3
    for (int i = 0; i < n_ions; ++i) {
      double diag = 1.0;
      for (int j = 0; j < n_ions; ++j) {
        if (j == i) continue;
        double d = std::abs(geo.u[i] - geo.u[j]);
        double w = 2.0 / (d * d * d);
        jac(i, j) = -w;
        diag += w;
      }
      jac(i, i) = diag;
      rhs(i) = -f[i];
    }
    Eigen::VectorXd step = jac.partialPivLu().solve(rhs);

    // Backtracking damping: halve the step until the residual drops.
    double lambda = 1.0;
    bool accepted = false;
    for (int back = 0; back < 40; ++back) {
      for (int i = 0; i < n_ions; ++i) trial[i] = geo.u[i] + lambda * step(i);
      bool ordered = std::is_sorted(trial.begin(), trial.end(),
                                    [](double a, double b) { return a <= b; });
      if (ordered) {
        force_residual(trial, f_trial);
        if (max_abs(f_trial) < fnorm) {
          geo.u = trial;
          f = f_trial;
          fnorm = max_abs(f);
          accepted = true;
          break;
        }
      }
      lambda *= 0.5;
    }
    if (!accepted) break;
    converged = fnorm < tol;
  }

  if (!converged) {
    std::ostringstream os;
    os << "equilibrium solve for N=" << n_ions
       << " stalled at residual " << fnorm;
    fail(ErrorKind::non_convergence, os.str());
  }

  // The solution is symmetric up to roundoff; enforce the exact symmetries so
  // downstream golden files do not depend on iteration noise.
  double mean = std::accumulate(geo.u.begin(), geo.u.end(), 0.0) / n_ions;
  for (double& x : geo.u) x -= mean;
  for (int i = 0; i < n_ions / 2; ++i) {
    double s = 0.5 * (geo.u[n_ions - 1 - i] - geo.u[i]);
    geo.u[i] = -s;
    geo.u[n_ions - 1 - i] = s;
  }
  if (n_ions % 2 == 1) geo.u[n_ions / 2] = 0.0;

  force_residual(geo.u, f);
  geo.residual = max_abs(f);
  return geo;
}

namespace {

// Sign and ordering conventions that make eigenvector output reproducible:
// largest-magnitude entry positive, and degenerate blocks ordered by the row
// index of that entry.
int largest_entry_row(const Eigen::VectorXd& v) {
  // Mirror-symmetric chains put equal magnitudes at opposite ends of a
  // column, equal only up to eigensolver noise, so resolve the argmax with
  // a wide relative tolerance and take the first qualifying row.
  double peak = v.cwiseAbs().maxCoeff();
  double tol = 1e-8 * peak;
  for (int i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= peak - tol) return i;
  }
  return 0;
}

}  // namespace

NormalModes normal_modes(const CrystalGeometry& geometry, double omega_z,
                         double omega_rho, Axis axis) {
  geometry.validate();
  if (!(omega_z > 0.0)) fail(ErrorKind::validation, "normal modes need omega_z > 0");
  bool radial = axis != Axis::z;
  if (radial && !(omega_rho > 0.0)) {
    fail(ErrorKind::validation, "radial modes need omega_rho > 0");
  }

  int n = geometry.n_ions;
  Eigen::MatrixXd k(n, n);
  double rho_ratio_sq =
      radial ? (omega_rho / omega_z) * (omega_rho / omega_z) : 0.0;

  // Stiffness in units of omega_z^2. Axial Coulomb terms enter with twice
  // the weight of the radial ones and opposite sign, so axial rows sum to 1
  // and radial rows to (omega_rho/omega_z)^2.
  for (int i = 0; i < n; ++i) {
    double diag = radial ? rho_ratio_sq : 1.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      double d = std::abs(geometry.u[i] - geometry.u[j]);
      double w = 1.0 / (d * d * d);
      if (radial) {
        k(i, j) = w;
        diag -= w;
      } else {
        k(i, j) = -2.0 * w;
        diag += 2.0 * w;
      }
    }
    k(i, i) = diag;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
  if (es.info() != Eigen::Success) {
    fail(ErrorKind::non_convergence, "stiffness eigensolve failed");
  }

  Eigen::VectorXd vals = es.eigenvalues();
  Eigen::MatrixXd vecs = es.eigenvectors();
  double scale = std::max(std::abs(vals(0)), std::abs(vals(n - 1)));

  for (int i = 0; i < n; ++i) {
    if (vals(i) <= 0.0) {
      std::ostringstream os;
      os << "structural instability along axis "
         << (axis == Axis::z ? 'z' : (axis == Axis::x ? 'x' : 'y'))
         << ": stiffness eigenvalue " << vals(i) * omega_z * omega_z
         << " (rad/s)^2 is not positive";
      fail(ErrorKind::instability, os.str());
    }
  }

  // Reorder degenerate blocks deterministically.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  double degen_tol = 1e-10 * std::max(scale, 1e-300);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (std::abs(vals(a) - vals(b)) > degen_tol) return vals(a) < vals(b);
    return largest_entry_row(vecs.col(a)) < largest_entry_row(vecs.col(b));
  });

  NormalModes out;
  out.axis = axis;
  out.freqs.resize(n);
  out.modes.resize(n, n);
  for (int c = 0; c < n; ++c) {
    Eigen::VectorXd v = vecs.col(order[c]);
    if (v(largest_entry_row(v)) < 0.0) v = -v;
    out.modes.col(c) = v;
    out.freqs[c] = omega_z * std::sqrt(vals(order[c]));
  }
  return out;
}

std::vector<double> site_gradient_shifts(const CrystalGeometry& geometry) {
  geometry.validate();
  if (!(geometry.zeta > 0.0)) {
    fail(ErrorKind::validation,
         "site gradient shifts need a physical length scale");
  }
  double z3 = geometry.zeta * geometry.zeta * geometry.zeta;
  double prefactor = e / (8.0 * pi * eps0 * z3);
  std::vector<double> out(geometry.n_ions);
  for (int i = 0; i < geometry.n_ions; ++i) {
    out[i] = prefactor * geometry.neighbor_sum(i);
  }
  return out;
}

std::vector<double> site_detunings(const CrystalGeometry& geometry,
                                   double b_z) {
  geometry.validate();
  std::vector<double> out(geometry.n_ions);
  for (int i = 0; i < geometry.n_ions; ++i) {
    out[i] = b_z * geometry.neighbor_sum(i);
  }
  return out;
}

}  // namespace rydion

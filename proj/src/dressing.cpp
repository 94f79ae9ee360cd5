#include "rydion/dressing.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "rydion/errors.hpp"

namespace rydion {

bool MWConfig::adiabatic_ok() const {
  bool ratio_ok =
      delta1 != 0.0 ? std::abs(omega1 / delta1) < 0.3 : omega1 == 0.0;
  bool separation_ok =
      std::abs(delta1) > 5.0 * std::max(std::abs(omega2), std::abs(delta2));
  return ratio_ok && separation_ok;
}

DressedTwoLevel dress_rydberg(const MWConfig& cfg) {
  if (cfg.omega1 != 0.0 && cfg.delta1 == 0.0) {
    fail(ErrorKind::validation,
         "cannot eliminate a resonantly driven level (omega1 != 0 with "
         "delta1 = 0)");
  }
  DressedTwoLevel out;
  out.eta = cfg.omega1 == 0.0 ? 0.0 : cfg.omega1 / (2.0 * cfg.delta1);
  double stark =
      cfg.omega1 == 0.0 ? 0.0 : cfg.omega1 * cfg.omega1 / (4.0 * cfg.delta1);
  out.delta2_prime = cfg.delta2 - stark;
  out.h = {cfg.omega2, 0.0, out.delta2_prime};
  out.D1 = (cfg.d1 / 3.0) * (cfg.d1 / 3.0);
  out.D2 = (cfg.d2 / 3.0) * (cfg.d2 / 3.0);
  out.d_diag_amp = -out.eta * std::sqrt(out.D1);
  out.d_trans_amp = std::sqrt(out.D2);
  out.valid = cfg.adiabatic_ok();
  return out;
}

namespace {

// Closed-form prefactor denominator of the dressing coefficients. It equals
// 4 det(H_Q - delta I), so a zero signals a laser resonant with a dressed
// Rydberg eigenstate.
double gamma_denominator(const MWConfig& mw, double delta) {
  double om1_sq = mw.omega1 * mw.omega1;
  double om2_sq = mw.omega2 * mw.omega2;
  return (delta + mw.delta2) * (4.0 * (mw.delta1 - delta) * delta + om1_sq) +
         (delta - mw.delta1) * om2_sq;
}

}  // namespace

GroundDressing dress_ground(const FiveLevelConfig& cfg) {
  const MWConfig& mw = cfg.mw;

  // Level order: g1, g2, n'p, ns, np. The microwave couplings live inside
  // the Rydberg block; the weak lasers are the perturbation.
  Eigen::Matrix3d hq;
  hq << mw.delta1, mw.omega1 / 2.0, 0.0,
        mw.omega1 / 2.0, 0.0, mw.omega2 / 2.0,
        0.0, mw.omega2 / 2.0, -mw.delta2;
  Eigen::Vector2d hp(cfg.delta_s, cfg.delta_p);
  Eigen::Matrix<double, 3, 2> v = Eigen::Matrix<double, 3, 2>::Zero();
  v(1, 0) = cfg.omega_s / 2.0;
  v(2, 1) = cfg.omega_p / 2.0;

  double scale = std::max({std::abs(mw.delta1), std::abs(mw.delta2),
                           std::abs(mw.omega1), std::abs(mw.omega2),
                           std::abs(cfg.delta_s), std::abs(cfg.delta_p)});

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(hq);
  Eigen::Vector3d lam = es.eigenvalues();
  Eigen::Matrix3d u = es.eigenvectors();

  // Solve H_Q X - X diag(hp) = -V one eigencomponent at a time. A vanishing
  // gap on a coupled channel means the perturbation theory breaks down.
  Eigen::Matrix<double, 3, 2> vt = u.transpose() * v;
  Eigen::Matrix<double, 3, 2> xt;
  for (int k = 0; k < 3; ++k) {
    for (int p = 0; p < 2; ++p) {
      if (vt(k, p) == 0.0) {
        xt(k, p) = 0.0;
        continue;
      }
      double gap = hp(p) - lam(k);
      if (std::abs(gap) <= 1e-12 * scale) {
        std::ostringstream os;
        os << "laser " << (p == 0 ? "s" : "p")
           << " is resonant with a dressed Rydberg state (gap " << gap
           << " rad/s)";
        fail(ErrorKind::degeneracy, os.str());
      }
      xt(k, p) = vt(k, p) / gap;
    }
  }
  Eigen::Matrix<double, 3, 2> x = u * xt;

  GroundDressing out;
  out.c_pprime1 = x(0, 0);
  out.c_s1 = x(1, 0);
  out.c_p1 = x(2, 0);
  out.c_pprime2 = x(0, 1);
  out.c_s2 = x(1, 1);
  out.c_p2 = x(2, 1);

  double den_s = gamma_denominator(mw, cfg.delta_s);
  double den_p = gamma_denominator(mw, cfg.delta_p);
  double den_floor = 1e-12 * scale * scale * scale;
  if (cfg.omega_s != 0.0 && std::abs(den_s) <= den_floor) {
    fail(ErrorKind::degeneracy, "dressing prefactor denominator vanishes "
                                "for the s laser");
  }
  if (cfg.omega_p != 0.0 && std::abs(den_p) <= den_floor) {
    fail(ErrorKind::degeneracy, "dressing prefactor denominator vanishes "
                                "for the p laser");
  }
  out.gamma_s = cfg.omega_s == 0.0 ? 0.0 : cfg.omega_s / den_s;
  out.gamma_p = cfg.omega_p == 0.0 ? 0.0 : cfg.omega_p / den_p;

  // Decoupling defect, evaluated on the explicit 5x5 matrices rather than
  // trusting the block algebra above.
  Eigen::Matrix<double, 5, 5> h0 = Eigen::Matrix<double, 5, 5>::Zero();
  h0(0, 0) = cfg.delta_s;
  h0(1, 1) = cfg.delta_p;
  h0.block<3, 3>(2, 2) = hq;
  Eigen::Matrix<double, 5, 5> pert = Eigen::Matrix<double, 5, 5>::Zero();
  pert.block<3, 2>(2, 0) = v;
  pert.block<2, 3>(0, 2) = v.transpose();
  Eigen::Matrix<double, 5, 5> s = Eigen::Matrix<double, 5, 5>::Zero();
  s.block<3, 2>(2, 0) = x;
  s.block<2, 3>(0, 2) = -x.transpose();
  double pert_norm = pert.norm();
  double defect = (h0 * s - s * h0 + pert).norm();
  out.residual_rel = pert_norm > 0.0 ? defect / pert_norm : 0.0;

  double vmax = std::max(std::abs(cfg.omega_s), std::abs(cfg.omega_p));
  double den_min = 0.0;
  bool have_den = false;
  for (double d : {std::abs(den_s), std::abs(den_p)}) {
    if (d > 0.0) {
      den_min = have_den ? std::min(den_min, d) : d;
      have_den = true;
    }
  }
  out.valid = have_den ? vmax < 0.2 * den_min : vmax == 0.0;
  return out;
}

std::pair<double, double> special_detunings(double delta1, double delta2,
                                            double omega1) {
  double r = std::sqrt(delta1 * delta1 + omega1 * omega1);
  return {-delta2, (delta1 - r) / 2.0};
}

GroundDipole ground_dipole(const GroundDressing& gd, double D1, double D2) {
  if (D1 < 0.0 || D2 < 0.0) {
    fail(ErrorKind::validation, "dipole strengths must be non-negative");
  }
  GroundDipole out;
  out.trans_amp = gd.c_p1 * gd.c_s2 * std::sqrt(D2);
  out.diag_amp = gd.c_s2 * gd.c_pprime2 * std::sqrt(D1);
  return out;
}

double scattering_rate(double c, double gamma) {
  if (!(gamma > 0.0)) {
    fail(ErrorKind::validation, "decay rate must be positive");
  }
  return c * c * gamma;
}

}  // namespace rydion

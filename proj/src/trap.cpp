#include "rydion/trap.hpp"

#include <cmath>
#include <sstream>

#include "rydion/constants.hpp"
#include "rydion/errors.hpp"

namespace rydion {

using namespace constants;

void TrapConfig::validate() const {
  if (!(alpha > 0.0) || !(beta > 0.0) || !(omega_rf > 0.0)) {
    fail(ErrorKind::validation,
         "trap gradients and RF frequency must all be positive");
  }
}

SecularFrequencies secular_frequencies(const IonSpecies& species,
                                       const TrapConfig& trap) {
  trap.validate();
  species.validate();
  double drive = e * trap.alpha / (species.mass * trap.omega_rf);  // m/s * ...
  double rf_term = drive * drive;        // (e alpha / (M w_rf))^2
  double dc_term = e * trap.beta / species.mass;
  if (rf_term <= dc_term) {
    std::ostringstream os;
    os << "radial confinement lost: (e*alpha/(M*omega_rf))^2 = " << rf_term
       << " must exceed e*beta/M = " << dc_term;
    fail(ErrorKind::instability, os.str());
  }
  SecularFrequencies out;
  out.omega_z = 2.0 * std::sqrt(dc_term);
  out.omega_rho = std::sqrt(2.0) * std::sqrt(rf_term - dc_term);
  out.linear_chain_ok = out.omega_rho > out.omega_z;
  return out;
}

double ionization_gradient(int n) {
  if (n < 1) fail(ErrorKind::validation, "ionization threshold requires n >= 1");
  double n2 = double(n) * double(n);
  double n6 = n2 * n2 * n2;
  double fpe = four_pi_eps0;
  double fpe4 = fpe * fpe * fpe * fpe;
  double h2 = hbar * hbar;
  double h6 = h2 * h2 * h2;
  double e7 = std::pow(e, 7);
  double m3 = m_e * m_e * m_e;
  return (4.0 / 27.0) * e7 * m3 / (fpe4 * h6 * n6);
}

SaddlePoint saddle_point(double beta) {
  if (!(beta > 0.0)) fail(ErrorKind::validation, "saddle requires beta > 0");
  SaddlePoint s;
  s.z = std::cbrt(e / (four_pi_eps0 * beta));
  // Normalization chosen so that v(beta_ion(n)) = -4 E_ryd / n^2 identically,
  // closing the loop with ionization_gradient.
  s.v = -3.0 * std::cbrt(2.0 * std::pow(e, 5) * beta /
                         (four_pi_eps0 * four_pi_eps0));
  return s;
}

double quadrupole_shift(const RydbergLevel& level, double beta_eff, double r2) {
  level.validate();
  if (level.l == 0) return 0.0;
  if (level.l != 1) {
    fail(ErrorKind::validation, "quadrupole shift implemented for l <= 1 only");
  }
  double bracket = 2.0 * std::abs(level.m) - level.j - 4.5;
  return (2.0 / 15.0) * e * beta_eff * r2 * bracket;
}

FrequencyShifts rydberg_frequency_shifts(const IonSpecies& species,
                                         const TrapConfig& trap,
                                         double delta_e_sp, double r_sp) {
  trap.validate();
  if (delta_e_sp == 0.0) {
    fail(ErrorKind::validation, "frequency shifts need a nonzero s-p splitting");
  }
  // Ensure the trap is in its stable regime before quoting shifts.
  secular_frequencies(species, trap);

  double r2 = r_sp * r_sp;
  double dz = (4.0 / 3.0) * e * trap.beta * r2 / delta_e_sp;
  double denom = trap.alpha * trap.alpha /
                     (species.mass * trap.omega_rf * trap.omega_rf) -
                 trap.beta / e;
  double drho = (1.0 / 6.0) *
                (trap.alpha * trap.alpha + 2.0 * trap.beta * trap.beta) /
                denom * r2 / delta_e_sp;

  FrequencyShifts out;
  out.dz_rel = std::abs(dz);
  out.drho_rel = std::abs(drho);
  // For a splitting with the p level above s the admixture pushes the trap
  // toward weaker confinement.
  out.shallower = delta_e_sp > 0.0;
  return out;
}

double vdw_estimate(double delta_e_sp, double r_sp, double zeta) {
  if (!(zeta > 0.0)) fail(ErrorKind::validation, "vdw estimate needs zeta > 0");
  if (delta_e_sp == 0.0) {
    fail(ErrorKind::validation, "vdw estimate needs a nonzero splitting");
  }
  double d4 = std::pow(r_sp, 4);
  double z6 = std::pow(zeta, 6);
  return std::pow(e, 4) * d4 /
         (four_pi_eps0 * four_pi_eps0 * std::abs(delta_e_sp) * z6);
}

}  // namespace rydion

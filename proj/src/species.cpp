#include "rydion/species.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "rydion/constants.hpp"
#include "rydion/errors.hpp"

namespace rydion {

namespace {

const char* orbital_name(int l) {
  switch (l) {
    case 0: return "s";
    case 1: return "p";
    case 2: return "d";
    default: return "l>2";
  }
}

bool is_half_integer_compatible(double j, double m) {
  // j and m must both live on the same half-integer lattice.
  double tj = 2.0 * j, tm = 2.0 * m;
  if (std::abs(tj - std::round(tj)) > 1e-9) return false;
  if (std::abs(tm - std::round(tm)) > 1e-9) return false;
  long lj = std::lround(tj), lm = std::lround(tm);
  return ((lj - lm) % 2) == 0;
}

}  // namespace

double IonSpecies::defect(int l) const {
  auto it = defects.find(l);
  if (it == defects.end()) {
    fail(ErrorKind::missing_data,
         "species '" + name + "' has no quantum defect for orbital " +
             orbital_name(l));
  }
  return it->second;
}

void IonSpecies::validate() const {
  if (!(mass > 1000.0 * constants::m_e)) {
    fail(ErrorKind::validation,
         "species mass must exceed 1000 electron masses (got " +
             std::to_string(mass) + " kg)");
  }
  for (auto& [l, d] : defects) {
    if (l < 0 || d < 0.0) {
      fail(ErrorKind::validation, "quantum defects must be >= 0 for l >= 0");
    }
  }
  if (defects.count(0) == 0 || defects.count(1) == 0) {
    fail(ErrorKind::validation,
         "defect table must cover at least the s and p orbitals");
  }
  if (tau0 < 0.0) fail(ErrorKind::validation, "tau0 must be >= 0");
}

IonSpecies IonSpecies::ca40() {
  IonSpecies sp;
  sp.name = "ca40";
  sp.mass = 40.0 * constants::amu;
  double delta_s = 1.80;
  // Pin the p defect to the 280 GHz (angular 2.8e11 1/s) s-p splitting at
  // n=60. Computing it here instead of hard-coding keeps the table exactly
  // consistent with the constants in use.
  double delta_p = calibrate_p_defect(60, constants::hbar * 2.8e11, delta_s);
  sp.defects = {{0, delta_s}, {1, delta_p}};
  sp.tau0 = 0.08e-9;  // tau(50) ~ 10 us
  return sp;
}

IonSpecies IonSpecies::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::validation, "cannot open species file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& ex) {
    fail(ErrorKind::validation,
         "species file " + path + " is not valid JSON: " + ex.what());
  }

  static const std::set<std::string> allowed = {"name", "mass_amu", "defects",
                                                "tau0_ns"};
  for (auto& [key, _] : doc.items()) {
    if (!allowed.count(key)) {
      fail(ErrorKind::validation,
           "unknown key in species file: '" + key + "'");
    }
  }
  for (const char* req : {"name", "mass_amu", "defects"}) {
    if (!doc.contains(req)) {
      fail(ErrorKind::validation,
           std::string("species file missing key '") + req + "'");
    }
  }

  IonSpecies sp;
  sp.name = doc["name"].get<std::string>();
  sp.mass = doc["mass_amu"].get<double>() * constants::amu;
  auto& def = doc["defects"];
  for (auto& [key, _] : def.items()) {
    if (key != "s" && key != "p") {
      fail(ErrorKind::validation,
           "species defect table keys must be 's' or 'p', got '" + key + "'");
    }
  }
  if (!def.contains("s") || !def.contains("p")) {
    fail(ErrorKind::validation, "species defect table needs both s and p");
  }
  sp.defects = {{0, def["s"].get<double>()}, {1, def["p"].get<double>()}};
  if (doc.contains("tau0_ns")) sp.tau0 = doc["tau0_ns"].get<double>() * 1e-9;
  sp.validate();
  return sp;
}

void RydbergLevel::validate() const {
  if (n < 10) {
    fail(ErrorKind::validation,
         "principal quantum number must be >= 10 (got " + std::to_string(n) +
             ")");
  }
  if (l != 0 && l != 1) {
    fail(ErrorKind::validation,
         "only s and p orbitals are supported (got l=" + std::to_string(l) +
             ")");
  }
  bool j_ok = (std::abs(j - (l + 0.5)) < 1e-9) ||
              (l > 0 && std::abs(j - (l - 0.5)) < 1e-9);
  if (!j_ok || j <= 0.0) {
    fail(ErrorKind::validation, "j must be l +- 1/2 and positive");
  }
  if (std::abs(m) > j + 1e-9 || !is_half_integer_compatible(j, m)) {
    fail(ErrorKind::validation, "m must satisfy |m| <= j on the same lattice");
  }
}

double rydberg_energy(const IonSpecies& species, const RydbergLevel& level) {
  level.validate();
  double delta = species.defect(level.l);
  double n_eff = level.n - delta;
  if (!(n_eff > 0.0)) {
    fail(ErrorKind::validation,
         "effective quantum number n - delta(l) must be positive");
  }
  return -4.0 * constants::e_ryd / (n_eff * n_eff);
}

RadialElements radial_elements(const MatrixElementModel& model, int n,
                               int n_prime) {
  if (n < 10 || n_prime < 10) {
    fail(ErrorKind::validation, "radial elements require n, n' >= 10");
  }
  using constants::a0;
  if (model.mode == MatrixElementModel::Mode::hydrogenic) {
    return {a0 * double(n) * double(n),
            a0 * a0 * double(n_prime) * double(n_prime) * double(n_prime) *
                double(n_prime)};
  }
  auto rit = model.r_table.find({n, 0, n_prime, 1});
  if (rit == model.r_table.end()) {
    std::ostringstream os;
    os << "no <r> table entry for (" << n << ",s," << n_prime << ",p)";
    fail(ErrorKind::missing_data, os.str());
  }
  auto r2it = model.r2_table.find({n_prime, 1});
  if (r2it == model.r2_table.end()) {
    std::ostringstream os;
    os << "no <r^2> table entry for (" << n_prime << ",p)";
    fail(ErrorKind::missing_data, os.str());
  }
  if (rit->second <= 0.0 || r2it->second <= 0.0) {
    fail(ErrorKind::validation, "table matrix elements must be positive");
  }
  return {rit->second, r2it->second};
}

double lifetime(const IonSpecies& species, int n) {
  if (species.tau0 <= 0.0) {
    fail(ErrorKind::missing_data,
         "species '" + species.name + "' carries no lifetime scale tau0");
  }
  if (n < 1) fail(ErrorKind::validation, "lifetime requires n >= 1");
  return species.tau0 * double(n) * double(n) * double(n);
}

double calibrate_p_defect(int n, double target_splitting, double delta_s) {
  if (n <= delta_s) {
    fail(ErrorKind::validation, "need n > delta_s for calibration");
  }
  if (target_splitting <= 0.0) {
    fail(ErrorKind::validation, "target splitting must be positive");
  }
  using constants::e_ryd;
  double ns = n - delta_s;
  // E(n,p) = E(n,s) + target  =>  4 E_ryd/(n - delta_p)^2 must stay positive.
  double rhs = 4.0 * e_ryd / (ns * ns) - target_splitting;
  if (rhs <= 0.0) {
    fail(ErrorKind::validation,
         "target splitting exceeds the s binding energy; no p defect exists");
  }
  double n_eff_p = std::sqrt(4.0 * e_ryd / rhs);
  double delta_p = n - n_eff_p;
  if (delta_p < 0.0) {
    fail(ErrorKind::validation,
         "calibration would need a negative p defect; adjust delta_s");
  }
  return delta_p;
}

}  // namespace rydion

#pragma once

#include <map>
#include <string>
#include <tuple>
#include <utility>

namespace rydion {

// A doubly-charged core with a single highly excited valence electron. The
// net charge seen by the trap is +e; the electron sees a +2e core, which is
// where the factor 4 in the level energies comes from.
struct IonSpecies {
  std::string name;
  double mass = 0.0;              // kg
  std::map<int, double> defects;  // quantum defect per orbital number l
  double tau0 = 0.0;              // lifetime scale (s), tau(n) = tau0*n^3; 0 if unset

  // Throws missing_data if l has no table entry.
  double defect(int l) const;

  void validate() const;

  // Bundled calcium data set. The s defect is the standard Ca II value; the
  // p defect is pinned by calibrate_p_defect so that the n=60 s-p splitting
  // lands on the 280 GHz working point used by the bundled examples.
  static IonSpecies ca40();

  // Load a species description from a JSON document with keys
  // {name, mass_amu, defects: {s, p}, tau0_ns}. Unknown keys are rejected.
  static IonSpecies from_json_file(const std::string& path);
};

struct RydbergLevel {
  int n = 0;     // principal quantum number, >= 10
  int l = 0;     // orbital quantum number, 0 (s) or 1 (p)
  double j = 0;  // total angular momentum, l +- 1/2, positive
  double m = 0;  // magnetic quantum number, |m| <= j, half-integer like j

  void validate() const;
};

// Radial matrix elements either from the n^2 / n^4 hydrogenic estimates or
// from a user-supplied table.
struct MatrixElementModel {
  enum class Mode { hydrogenic, user_table };
  Mode mode = Mode::hydrogenic;

  // <n,l|r|n',l'> in m, keyed (n, l, n', l'); used for the s-p dipole element.
  std::map<std::tuple<int, int, int, int>, double> r_table;
  // <n,l|r^2|n,l> in m^2, keyed (n, l).
  std::map<std::pair<int, int>, double> r2_table;
};

struct RadialElements {
  double r_sp;  // <n,s|r|n',p>  (m)
  double r2_p;  // <n',p|r^2|n',p>  (m^2)
};

// Level energy -4*E_ryd/(n - delta(l))^2 in J. Requires n > delta(l).
double rydberg_energy(const IonSpecies& species, const RydbergLevel& level);

// Hydrogenic mode: r_sp = a0*n^2 and r2_p = a0^2*n'^4. Table mode looks up
// (n,0,n',1) and (n',1); a missing key is a missing_data error.
RadialElements radial_elements(const MatrixElementModel& model, int n, int n_prime);

// Radiative lifetime tau0*n^3 (s). Requires the species to carry tau0.
double lifetime(const IonSpecies& species, int n);

// Solve for the p defect that places E(n,p) - E(n,s) at target_splitting (J),
// holding delta_s fixed. Closed form; throws if the target is unreachable
// (larger than the s binding energy itself).
double calibrate_p_defect(int n, double target_splitting, double delta_s);

}  // namespace rydion

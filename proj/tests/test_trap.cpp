#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rydion/constants.hpp"
#include "rydion/species.hpp"
#include "rydion/trap.hpp"
#include "test_helpers.hpp"

namespace cn = rydion::constants;
using rydion::ErrorKind;
using rydion::IonSpecies;
using rydion::TrapConfig;

namespace {

const TrapConfig bench_trap{1e9, 1e7, cn::two_pi * 15e6};

}  // namespace

TEST_CASE("secular frequencies hit the benchmark working point") {
  auto sec = rydion::secular_frequencies(IonSpecies::ca40(), bench_trap);
  CHECK(std::abs(sec.omega_z - cn::two_pi * 1.56e6) <=
        0.01 * cn::two_pi * 1.56e6);
  CHECK(std::abs(sec.omega_rho - cn::two_pi * 5.64e6) <=
        0.01 * cn::two_pi * 5.64e6);
  CHECK(sec.omega_rho > sec.omega_z);
  CHECK(sec.linear_chain_ok);
}

TEST_CASE("secular frequencies follow their closed forms") {
  auto ca = IonSpecies::ca40();
  auto sec = rydion::secular_frequencies(ca, bench_trap);
  double wz = 2.0 * std::sqrt(cn::e * bench_trap.beta / ca.mass);
  CHECK(sec.omega_z == doctest::Approx(wz).epsilon(1e-14));
  // The two frequencies share the RF drive term:
  //   2 (e alpha / (M w_rf))^2 = w_rho^2 + w_z^2 / 2.
  double drive = cn::e * bench_trap.alpha / (ca.mass * bench_trap.omega_rf);
  CHECK(2.0 * drive * drive ==
        doctest::Approx(sec.omega_rho * sec.omega_rho +
                        0.5 * sec.omega_z * sec.omega_z)
            .epsilon(1e-12));
}

TEST_CASE("overstrong static gradient kills the radial confinement") {
  expect_error(ErrorKind::instability, [] {
    rydion::secular_frequencies(IonSpecies::ca40(),
                                TrapConfig{1e9, 1e9, cn::two_pi * 15e6});
  });
  expect_error(ErrorKind::validation, [] {
    rydion::secular_frequencies(IonSpecies::ca40(),
                                TrapConfig{-1e9, 1e7, cn::two_pi * 15e6});
  });
}

TEST_CASE("ionization threshold prefactor and n-scaling") {
  double pre = rydion::ionization_gradient(1);
  CHECK(std::abs(pre - 1.44e21) <= 0.01 * 1.44e21);
  // n=50 benchmark value, and the exact n^-6 scaling.
  double g50 = rydion::ionization_gradient(50);
  CHECK(std::abs(g50 - 9.2e10) <= 0.02 * 9.2e10);
  CHECK(rydion::ionization_gradient(2) ==
        doctest::Approx(pre / 64.0).epsilon(1e-13));
  CHECK(g50 == doctest::Approx(pre / std::pow(50.0, 6)).epsilon(1e-12));
  expect_error(ErrorKind::validation, [] { rydion::ionization_gradient(0); });
}

TEST_CASE("saddle point scales with the cube root of the gradient") {
  auto s1 = rydion::saddle_point(2e7);
  auto s8 = rydion::saddle_point(8.0 * 2e7);
  CHECK(s8.v == doctest::Approx(2.0 * s1.v).epsilon(1e-12));
  CHECK(s8.z == doctest::Approx(0.5 * s1.z).epsilon(1e-12));
  CHECK(s1.v < 0.0);
  CHECK(s1.z > 0.0);
  expect_error(ErrorKind::validation, [] { rydion::saddle_point(0.0); });
}

TEST_CASE("saddle depth at the threshold gradient equals the binding energy") {
  // Consistency between the two ionization views: the gradient where the
  // saddle drops to the level energy is found independently by bisection and
  // must reproduce ionization_gradient(n).
  for (int n : {20, 50, 80}) {
    double target_v = -4.0 * cn::e_ryd / (double(n) * double(n));
    double g = rydion::ionization_gradient(n);
    // Direct statement first.
    CHECK(rydion::saddle_point(g).v ==
          doctest::Approx(target_v).epsilon(1e-12));
    // Then the root-finding oracle. v(beta) decreases monotonically.
    double lo = g / 10.0, hi = g * 10.0;
    REQUIRE(rydion::saddle_point(lo).v > target_v);
    REQUIRE(rydion::saddle_point(hi).v < target_v);
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      if (rydion::saddle_point(mid).v > target_v)
        lo = mid;
      else
        hi = mid;
    }
    CHECK(0.5 * (lo + hi) == doctest::Approx(g).epsilon(1e-9));
  }
}

TEST_CASE("quadrupole shift brackets") {
  const double beta_eff = 3e7;
  const double r2 = 1e-14;
  const double unit = (2.0 / 15.0) * cn::e * beta_eff * r2;
  auto shift = [&](rydion::RydbergLevel lvl) {
    return rydion::quadrupole_shift(lvl, beta_eff, r2);
  };
  // s levels are spherically symmetric.
  CHECK(shift({50, 0, 0.5, 0.5}) == 0.0);
  // p shifts depend on (j, |m|) through 2|m| - j - 9/2.
  CHECK(shift({50, 1, 0.5, 0.5}) == doctest::Approx(-4.0 * unit).epsilon(1e-13));
  CHECK(shift({50, 1, 0.5, -0.5}) ==
        doctest::Approx(-4.0 * unit).epsilon(1e-13));
  CHECK(shift({50, 1, 1.5, 1.5}) == doctest::Approx(-3.0 * unit).epsilon(1e-13));
  CHECK(shift({50, 1, 1.5, 0.5}) == doctest::Approx(-5.0 * unit).epsilon(1e-13));
}

TEST_CASE("Rydberg secular frequency shifts at the benchmark point") {
  auto ca = IonSpecies::ca40();
  double de_sp = rydion::rydberg_energy(ca, {50, 1, 0.5, 0.5}) -
                 rydion::rydberg_energy(ca, {50, 0, 0.5, 0.5});
  double r_sp = rydion::radial_elements({}, 50, 50).r_sp;
  auto shifts = rydion::rydberg_frequency_shifts(ca, bench_trap, de_sp, r_sp);

  // Order-of-magnitude anchors (factor 2 bands around the published point).
  CHECK(shifts.dz_rel > 7.4e-4 / 2.0);
  CHECK(shifts.dz_rel < 7.4e-4 * 2.0);
  CHECK(shifts.drho_rel > 3.5e-2 / 2.0);
  CHECK(shifts.drho_rel < 3.5e-2 * 2.0);
  // Frozen values for regression.
  CHECK(shifts.dz_rel == doctest::Approx(7.2051907471339875e-4).epsilon(1e-9));
  CHECK(shifts.drho_rel == doctest::Approx(3.4441180204183068e-2).epsilon(1e-9));
  CHECK(shifts.shallower);

  // The axial shift is linear in beta and quadratic in the dipole element.
  auto double_beta = bench_trap;
  double_beta.beta *= 2.0;
  auto s2 = rydion::rydberg_frequency_shifts(ca, double_beta, de_sp, r_sp);
  CHECK(s2.dz_rel == doctest::Approx(2.0 * shifts.dz_rel).epsilon(1e-12));
  auto s4 = rydion::rydberg_frequency_shifts(ca, bench_trap, de_sp, 2.0 * r_sp);
  CHECK(s4.dz_rel == doctest::Approx(4.0 * shifts.dz_rel).epsilon(1e-12));
  CHECK(s4.drho_rel == doctest::Approx(4.0 * shifts.drho_rel).epsilon(1e-12));

  expect_error(ErrorKind::validation, [&] {
    rydion::rydberg_frequency_shifts(ca, bench_trap, 0.0, r_sp);
  });
}

TEST_CASE("van der Waals estimate scalings and benchmark band") {
  auto ca = IonSpecies::ca40();
  double de_sp = rydion::rydberg_energy(ca, {50, 1, 0.5, 0.5}) -
                 rydion::rydberg_energy(ca, {50, 0, 0.5, 0.5});
  double r_sp = rydion::radial_elements({}, 50, 50).r_sp;
  double zeta = 5e-6;
  double ev = rydion::vdw_estimate(de_sp, r_sp, zeta);
  CHECK(ev > 0.0);

  // Benchmark: within a factor of 3 of hbar * 2e5 J at 5 um spacing.
  double target = cn::hbar * 2e5;
  CHECK(ev > target / 3.0);
  CHECK(ev < target * 3.0);

  // 1/zeta^6, r^4 and 1/|dE| scalings.
  CHECK(rydion::vdw_estimate(de_sp, r_sp, 2.0 * zeta) ==
        doctest::Approx(ev / 64.0).epsilon(1e-12));
  CHECK(rydion::vdw_estimate(de_sp, 2.0 * r_sp, zeta) ==
        doctest::Approx(16.0 * ev).epsilon(1e-12));
  CHECK(rydion::vdw_estimate(-de_sp, r_sp, zeta) ==
        doctest::Approx(ev).epsilon(1e-12));
  CHECK(rydion::vdw_estimate(2.0 * de_sp, r_sp, zeta) ==
        doctest::Approx(0.5 * ev).epsilon(1e-12));

  expect_error(ErrorKind::validation,
               [&] { rydion::vdw_estimate(de_sp, r_sp, 0.0); });
  expect_error(ErrorKind::validation,
               [&] { rydion::vdw_estimate(0.0, r_sp, zeta); });
}

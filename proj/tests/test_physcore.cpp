#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "rydion/constants.hpp"
#include "rydion/species.hpp"
#include "test_helpers.hpp"

namespace cn = rydion::constants;
using rydion::ErrorKind;
using rydion::IonSpecies;
using rydion::RydbergLevel;

namespace {

IonSpecies defect_free_species() {
  IonSpecies sp;
  sp.name = "ideal";
  sp.mass = 40.0 * cn::amu;
  sp.defects = {{0, 0.0}, {1, 0.0}};
  return sp;
}

// Writes into the system temp directory and removes the file when the test
// scope ends, so repeated runs leave nothing behind.
struct TempFile {
  std::string path;
  TempFile(const std::string& name, const std::string& body)
      : path((std::filesystem::temp_directory_path() / name).string()) {
    std::ofstream out(path);
    out << body;
  }
  ~TempFile() { std::filesystem::remove(path); }
};

}  // namespace

TEST_CASE("derived constants agree with their reference values") {
  CHECK(cn::a0 == doctest::Approx(5.29177210903e-11).epsilon(1e-6));
  CHECK(cn::e_ryd == doctest::Approx(2.1798723611e-18).epsilon(1e-6));
  CHECK(cn::four_pi_eps0 ==
        doctest::Approx(4.0 * cn::pi * cn::eps0).epsilon(1e-15));
}

TEST_CASE("level energies reduce to the doubly charged hydrogenic series") {
  auto sp = defect_free_species();
  // Charge-2 core: binding energy 4 E_ryd / n^2.
  double e10 = rydion::rydberg_energy(sp, {10, 0, 0.5, 0.5});
  CHECK(e10 == doctest::Approx(-4.0 * cn::e_ryd / 100.0).epsilon(1e-12));
  // With zero defects the s and p energies coincide, and binding weakens
  // monotonically with n.
  double prev = -1e300;
  for (int n = 10; n <= 80; n += 10) {
    double es = rydion::rydberg_energy(sp, {n, 0, 0.5, 0.5});
    double ep = rydion::rydberg_energy(sp, {n, 1, 1.5, 0.5});
    CHECK(es == doctest::Approx(ep).epsilon(1e-14));
    CHECK(es < 0.0);
    CHECK(es > prev);
    prev = es;
  }
}

TEST_CASE("quantum defects order the s and p levels") {
  auto ca = IonSpecies::ca40();
  // delta_s > delta_p, so the s level binds deeper at the same n.
  CHECK(ca.defect(0) > ca.defect(1));
  double es = rydion::rydberg_energy(ca, {50, 0, 0.5, 0.5});
  double ep = rydion::rydberg_energy(ca, {50, 1, 0.5, 0.5});
  CHECK(es < ep);
  CHECK(ep < 0.0);
}

TEST_CASE("bundled calcium closes the n=60 splitting calibration") {
  auto ca = IonSpecies::ca40();
  double es = rydion::rydberg_energy(ca, {60, 0, 0.5, 0.5});
  double ep = rydion::rydberg_energy(ca, {60, 1, 0.5, 0.5});
  double target = cn::hbar * 2.8e11;
  CHECK(ep - es == doctest::Approx(target).epsilon(1e-9));
  CHECK(ca.defect(1) == doctest::Approx(1.4633038732908616).epsilon(1e-8));
  CHECK(ca.defect(0) == 1.80);
  CHECK(ca.tau0 == doctest::Approx(0.08e-9));
}

TEST_CASE("p defect calibration is the inverse of the splitting") {
  // A round trip at a different n and target must close too.
  double ds = 1.6;
  double target = cn::hbar * 1.0e11;
  double dp = rydion::calibrate_p_defect(45, target, ds);
  IonSpecies sp;
  sp.name = "x";
  sp.mass = 30.0 * cn::amu;
  sp.defects = {{0, ds}, {1, dp}};
  double split = rydion::rydberg_energy(sp, {45, 1, 0.5, 0.5}) -
                 rydion::rydberg_energy(sp, {45, 0, 0.5, 0.5});
  CHECK(split == doctest::Approx(target).epsilon(1e-12));
}

TEST_CASE("calibration rejects targets it cannot reach") {
  // A splitting beyond the s binding energy has no p level below threshold,
  // and a large target can demand a negative defect.
  expect_error(ErrorKind::validation, [] {
    rydion::calibrate_p_defect(60, 1.0, 1.8);  // 1 J, absurd
  });
  expect_error(ErrorKind::validation, [] {
    rydion::calibrate_p_defect(60, cn::hbar * cn::two_pi * 2.8e11, 1.8);
  });
  expect_error(ErrorKind::validation,
               [] { rydion::calibrate_p_defect(60, -1.0, 1.8); });
}

TEST_CASE("level validation rejects malformed quantum numbers") {
  auto ca = IonSpecies::ca40();
  expect_error(ErrorKind::validation,
               [&] { rydion::rydberg_energy(ca, {5, 0, 0.5, 0.5}); });
  expect_error(ErrorKind::validation,
               [&] { rydion::rydberg_energy(ca, {50, 2, 1.5, 0.5}); });
  expect_error(ErrorKind::validation,
               [&] { rydion::rydberg_energy(ca, {50, 1, 2.5, 0.5}); });
  expect_error(ErrorKind::validation,
               [&] { rydion::rydberg_energy(ca, {50, 1, 1.5, 2.5}); });
  expect_error(ErrorKind::validation,
               [&] { rydion::rydberg_energy(ca, {50, 1, 1.5, 0.0}); });
  expect_error(ErrorKind::missing_data,
               [&] { (void)ca.defect(2); });
}

TEST_CASE("hydrogenic radial elements scale as n^2 and n'^4") {
  auto el = rydion::radial_elements({}, 50, 47);
  CHECK(el.r_sp == doctest::Approx(cn::a0 * 2500.0).epsilon(1e-14));
  CHECK(el.r2_p ==
        doctest::Approx(cn::a0 * cn::a0 * 47.0 * 47.0 * 47.0 * 47.0)
            .epsilon(1e-14));
  expect_error(ErrorKind::validation,
               [] { rydion::radial_elements({}, 5, 47); });
}

TEST_CASE("table mode returns stored elements and reports gaps") {
  rydion::MatrixElementModel model;
  model.mode = rydion::MatrixElementModel::Mode::user_table;
  model.r_table[{50, 0, 47, 1}] = 1.25e-7;
  model.r2_table[{47, 1}] = 3.5e-14;
  auto el = rydion::radial_elements(model, 50, 47);
  CHECK(el.r_sp == 1.25e-7);
  CHECK(el.r2_p == 3.5e-14);
  expect_error(ErrorKind::missing_data,
               [&] { rydion::radial_elements(model, 51, 47); });
  expect_error(ErrorKind::missing_data, [&] {
    rydion::MatrixElementModel m2 = model;
    m2.r2_table.clear();
    rydion::radial_elements(m2, 50, 47);
  });
}

TEST_CASE("lifetime follows the n^3 law") {
  auto ca = IonSpecies::ca40();
  CHECK(rydion::lifetime(ca, 50) == doctest::Approx(1e-5).epsilon(1e-12));
  CHECK(rydion::lifetime(ca, 60) / rydion::lifetime(ca, 30) ==
        doctest::Approx(8.0).epsilon(1e-12));
  IonSpecies no_tau = defect_free_species();
  expect_error(ErrorKind::missing_data,
               [&] { rydion::lifetime(no_tau, 50); });
}

TEST_CASE("bundled data file matches the built-in calcium table") {
  auto ca = IonSpecies::ca40();
  auto file = IonSpecies::from_json_file(std::string(RYDION_DATA_DIR) +
                                         "/ca40.json");
  CHECK(file.name == ca.name);
  CHECK(file.mass == doctest::Approx(ca.mass).epsilon(1e-12));
  CHECK(file.defect(0) == doctest::Approx(ca.defect(0)).epsilon(1e-12));
  CHECK(std::abs(file.defect(1) - ca.defect(1)) < 1e-9);
  CHECK(file.tau0 == doctest::Approx(ca.tau0).epsilon(1e-12));
}

TEST_CASE("species files are validated strictly") {
  TempFile good("species_ok.json",
                R"({"name":"sr88","mass_amu":88.0,
                    "defects":{"s":3.26,"p":2.72},"tau0_ns":0.1})");
  auto sp = IonSpecies::from_json_file(good.path);
  CHECK(sp.mass == doctest::Approx(88.0 * cn::amu));
  CHECK(sp.defect(1) == 2.72);

  TempFile unknown("species_unknown.json",
                   R"({"name":"x","mass_amu":10.0,
                       "defects":{"s":1.0,"p":0.5},"bogus":1})");
  expect_error(ErrorKind::validation,
               [&] { IonSpecies::from_json_file(unknown.path); });

  TempFile missing("species_missing.json", R"({"name":"x","mass_amu":10.0})");
  expect_error(ErrorKind::validation,
               [&] { IonSpecies::from_json_file(missing.path); });

  TempFile bad_orbital("species_orbital.json",
                       R"({"name":"x","mass_amu":10.0,
                           "defects":{"s":1.0,"d":0.5}})");
  expect_error(ErrorKind::validation,
               [&] { IonSpecies::from_json_file(bad_orbital.path); });

  TempFile garbage("species_garbage.json", "not json at all");
  expect_error(ErrorKind::validation,
               [&] { IonSpecies::from_json_file(garbage.path); });

  expect_error(ErrorKind::validation, [] {
    IonSpecies::from_json_file("definitely_not_here.json");
  });
}

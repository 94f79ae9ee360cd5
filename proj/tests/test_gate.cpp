#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <vector>

#include "rydion/constants.hpp"
#include "rydion/crystal.hpp"
#include "rydion/gate.hpp"
#include "test_helpers.hpp"

namespace cn = rydion::constants;
using rydion::ErrorKind;
using rydion::GateConfig;
using rydion::PulseProfile;

TEST_CASE("pulse envelope and detuning profiles") {
  PulseProfile p;
  p.duration = 2e-6;
  p.omega_s_peak = 3e6;
  p.delta_s0 = -1e6;

  SUBCASE("sin^2 vanishes at the ends and peaks midway") {
    CHECK(rydion::pulse(p, 0.0).omega_s == doctest::Approx(0.0).scale(1.0));
    CHECK(rydion::pulse(p, 2e-6).omega_s ==
          doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(rydion::pulse(p, 1e-6).omega_s == doctest::Approx(3e6));
    CHECK(rydion::pulse(p, 0.5e-6).omega_s == doctest::Approx(1.5e6));
    CHECK(rydion::pulse(p, 0.7e-6).delta_s == doctest::Approx(-1e6));
  }

  SUBCASE("frozen envelope holds the peak") {
    p.envelope = PulseProfile::Envelope::frozen;
    CHECK(rydion::pulse(p, 0.0).omega_s == doctest::Approx(3e6));
    CHECK(rydion::pulse(p, 1.3e-6).omega_s == doctest::Approx(3e6));
  }

  SUBCASE("linear detuning ramp interpolates the endpoints") {
    p.detuning = PulseProfile::Detuning::linear_ramp;
    p.delta_s1 = 3e6;
    CHECK(rydion::pulse(p, 0.0).delta_s == doctest::Approx(-1e6));
    CHECK(rydion::pulse(p, 2e-6).delta_s == doctest::Approx(3e6));
    CHECK(rydion::pulse(p, 1e-6).delta_s == doctest::Approx(1e6));
  }

  SUBCASE("samples outside the window are rejected") {
    expect_error(ErrorKind::validation, [&] { rydion::pulse(p, -1e-9); });
    expect_error(ErrorKind::validation, [&] { rydion::pulse(p, 2.1e-6); });
  }
}

TEST_CASE("block Hamiltonians are symmetric") {
  auto cfg = rydion::default_gate_config();
  auto blocks = rydion::block_hamiltonians(cfg, 2.5e-6);
  CHECK((blocks.h11 - blocks.h11.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((blocks.h12 - blocks.h12.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((blocks.h21 - blocks.h21.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pair block without coupling is the sum of the single blocks") {
  auto cfg = rydion::default_gate_config();
  cfg.j_pair = 0.0;
  auto blocks = rydion::block_hamiltonians(cfg, 3e-6);
  Eigen::MatrixXd expect = Eigen::MatrixXd::Zero(9, 9);
  // Ion m occupies the slow (leftmost) index.
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      for (int c = 0; c < 3; ++c) {
        expect(3 * a + c, 3 * b + c) += blocks.h12(a, b);
        expect(c * 3 + a, c * 3 + b) += blocks.h21(a, b);
      }
    }
  CHECK((blocks.h11 - expect).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("pair coupling enters only between |sp> and |ps>") {
  auto cfg = rydion::default_gate_config();
  auto with = rydion::block_hamiltonians(cfg, 3e-6);
  auto cfg0 = cfg;
  cfg0.j_pair = 0.0;
  auto without = rydion::block_hamiltonians(cfg0, 3e-6);
  Eigen::MatrixXd diff = with.h11 - without.h11;
  // {g,s,p} per ion: |s,p> is 3*1+2 = 5, |p,s> is 3*2+1 = 7.
  CHECK(diff(5, 7) == doctest::Approx(cfg.j_pair));
  CHECK(diff(7, 5) == doctest::Approx(cfg.j_pair));
  diff(5, 7) = diff(7, 5) = 0.0;
  CHECK(diff.cwiseAbs().maxCoeff() == 0.0);
  CHECK((with.h12 - without.h12).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("no conditional phase without interaction or without a pulse") {
  SUBCASE("j_pair = 0") {
    auto cfg = rydion::default_gate_config();
    cfg.j_pair = 0.0;
    auto rep = rydion::entanglement_phase(cfg, 801, 0);
    CHECK(std::abs(rep.phi_final) <= 1e-10);
  }
  SUBCASE("omega_s = 0") {
    auto cfg = rydion::default_gate_config();
    cfg.pulse.omega_s_peak = 0.0;
    auto rep = rydion::entanglement_phase(cfg, 801, 0);
    CHECK(std::abs(rep.phi_final) <= 1e-10);
    // The bare ground state still accumulates the trivial frame phase from
    // the constant laser detuning, identically on both ions.
    double frame = -cfg.pulse.delta_s0 * cfg.pulse.duration;
    CHECK(rep.phi_single_m == doctest::Approx(frame).epsilon(1e-9));
    CHECK(rep.phi_single_n == doctest::Approx(frame).epsilon(1e-9));
  }
}

TEST_CASE("branch energies are additive at zero pulse amplitude") {
  // At t = 0 the sin^2 pulse is off, so the tracked pair energy must equal
  // the sum of the two single-ion energies.
  auto cfg = rydion::default_gate_config();
  auto rep = rydion::entanglement_phase(cfg, 801, 0);
  REQUIRE(!rep.eps11.empty());
  double lhs = rep.eps11.front();
  double rhs = rep.eps12.front() + rep.eps21.front();
  CHECK(std::abs(lhs - rhs) <=
        1e-12 * (std::abs(rep.eps12.front()) + std::abs(rep.eps21.front())));
  CHECK(rep.phi_ent.front() == 0.0);
}

TEST_CASE("frozen envelope accumulates phase linearly in time") {
  auto cfg = rydion::default_gate_config();
  cfg.pulse.envelope = PulseProfile::Envelope::frozen;
  cfg.pulse.omega_s_peak = 5e6;
  auto rep = rydion::entanglement_phase(cfg, 2001, 0);
  // Constant integrand: phi(t) grows linearly, so the midpoint carries half
  // the final phase.
  std::size_t mid = rep.t.size() / 2;
  CHECK(rep.phi_ent[mid] ==
        doctest::Approx(0.5 * rep.phi_final).epsilon(1e-6));
  CHECK(rep.phi_ent.back() == doctest::Approx(rep.phi_final));
  // And the same configuration at half duration gives half the phase.
  auto half = cfg;
  half.pulse.duration *= 0.5;
  auto rep_half = rydion::entanglement_phase(half, 1001, 0);
  CHECK(rep_half.phi_final ==
        doctest::Approx(0.5 * rep.phi_final).epsilon(1e-6));
}

TEST_CASE("benchmark gate run: phase, cross-check, leakage") {
  auto cfg = rydion::default_gate_config();
  auto rep = rydion::entanglement_phase(cfg, 4001, 40000);

  // Frozen regression value for the default working point.
  CHECK(rep.phi_final == doctest::Approx(0.241159233440).epsilon(1e-6));

  // The independent time-dependent propagation must agree and stay adiabatic.
  CHECK(std::abs(rep.phi_tdse - rep.phi_final) < 1e-2);
  CHECK(rep.leakage11 >= 0.0);
  CHECK(rep.leakage11 < 0.01);
  CHECK(rep.leakage12 < 0.01);
  CHECK(rep.leakage21 < 0.01);

  // Monotone time grid covering exactly the pulse window.
  REQUIRE(rep.t.size() == 4001);
  CHECK(rep.t.front() == 0.0);
  CHECK(rep.t.back() == doctest::Approx(cfg.pulse.duration));

  // Single-ion phases are nonzero and distinct (different detunings).
  CHECK(std::abs(rep.phi_single_m) > 0.0);
  CHECK(rep.phi_single_m != rep.phi_single_n);
}

TEST_CASE("even grid sizes are bumped to odd for the Simpson rule") {
  auto cfg = rydion::default_gate_config();
  auto rep = rydion::entanglement_phase(cfg, 4000, 0);
  CHECK(rep.t.size() == 4001);
}

TEST_CASE("site detunings derived from the chain geometry") {
  auto g = rydion::equilibrium_positions(10);
  g.zeta = 3.3e-6;
  double b_z = -4.2e-28;
  auto [dm, dn] = rydion::detunings_from_chain(g, b_z, 1, 2);
  CHECK(dm == doctest::Approx(b_z * g.neighbor_sum(0) / cn::hbar));
  CHECK(dn == doctest::Approx(b_z * g.neighbor_sum(1) / cn::hbar));
  // The edge ion has fewer close neighbours, hence the smaller |shift|.
  CHECK(std::abs(dm) < std::abs(dn));
}

TEST_CASE("configuration validation") {
  auto cfg = rydion::default_gate_config();
  SUBCASE("non-positive duration") {
    cfg.pulse.duration = 0.0;
    expect_error(ErrorKind::validation,
                 [&] { rydion::entanglement_phase(cfg, 801, 0); });
  }
  SUBCASE("grid too small") {
    expect_error(ErrorKind::validation,
                 [&] { rydion::entanglement_phase(cfg, 2, 0); });
  }
  SUBCASE("gate ions must differ") {
    auto g = rydion::equilibrium_positions(5);
    g.zeta = 3.3e-6;
    expect_error(ErrorKind::validation, [&] {
      rydion::detunings_from_chain(g, 1e-28, 3, 3);
    });
    expect_error(ErrorKind::validation, [&] {
      rydion::detunings_from_chain(g, 1e-28, 0, 2);
    });
    expect_error(ErrorKind::validation, [&] {
      rydion::detunings_from_chain(g, 1e-28, 1, 6);
    });
  }
}

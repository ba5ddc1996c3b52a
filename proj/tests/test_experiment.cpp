#include <cmath>
#include <map>
#include <random>

#include <doctest.h>

#include "qsim/experiment.hpp"

using namespace qsim;

namespace {

const SpinSystem kCs{3.5, 65.59e6, 6856.0};

std::set<char> expected_inverted(int k, int l, int m) {
  // lines where the oracle's adjacent diagonal signs differ
  double d[8];
  const Matrix u = target_unitary(DiagonalGateSpec::dj_oracle(k, l, m));
  for (int j = 0; j < 8; ++j) d[j] = u(j, j).real();
  std::set<char> out;
  for (int j = 0; j < 7; ++j)
    if (d[j] * d[j + 1] < 0) out.insert(transition_label(j + 1));
  return out;
}

Matrix random_hermitian(std::mt19937& rng, int n) {
  std::normal_distribution<double> dist;
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = Complex(dist(rng), dist(rng));
  return a + a.adjoint();
}

}  // namespace

TEST_CASE("equilibrium state") {
  const DensityMatrix rho = equilibrium_state(kCs);
  CHECK(rho.kind == DensityMatrix::Kind::deviation);
  for (int j = 0; j < 8; ++j)
    CHECK(rho.rho(j, j).real() == doctest::Approx(3.5 - j));
  CHECK(std::abs(rho.rho.trace()) < 1e-12);

  SUBCASE("readout after pi/2 gives the 7:12:15:16:15:12:7 pattern") {
    const Matrix u = hard_pulse_propagator(8, kPi / 2, kPi / 2);
    const auto lines = detect_spectrum(evolve(rho, u), kCs);
    const double ratio[7] = {7, 12, 15, 16, 15, 12, 7};
    for (int j = 0; j < 7; ++j)
      CHECK(lines[j].intensity() / lines[3].intensity() ==
            doctest::Approx(ratio[j] / 16.0).epsilon(1e-12));
  }
}

TEST_CASE("pseudo-pure |000> state") {
  const DensityMatrix rho = pps_000(kCs);
  CHECK(rho.rho(0, 0).real() == doctest::Approx(3.5));
  for (int j = 1; j < 8; ++j)
    CHECK(rho.rho(j, j).real() == doctest::Approx(-0.5));
  CHECK(std::abs(rho.rho.trace()) < 1e-12);

  SUBCASE("dephase is idempotent on a population state") {
    const DensityMatrix d = dephase(rho);
    CHECK((d.rho - rho.rho).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("small-angle readout shows only line a") {
    const auto lines = small_angle_readout(rho, 5.0 * kPi / 180.0, kCs);
    const double a = lines[0].intensity();
    CHECK(a > 0.0);
    for (int j = 1; j < 7; ++j) CHECK(lines[j].intensity() <= 0.01 * a);
  }
}

TEST_CASE("dephase") {
  SUBCASE("superposition density matrix diagonal") {
    const Matrix u = hard_pulse_propagator(8, kPi / 2, kPi / 2);
    Matrix proj = Matrix::Zero(8, 8);
    proj(0, 0) = 1.0;
    const DensityMatrix sigma =
        evolve(DensityMatrix{proj, DensityMatrix::Kind::full}, u);
    const DensityMatrix d = dephase(sigma);
    const double expected[8] = {1, 7, 21, 35, 35, 21, 7, 1};
    for (int j = 0; j < 8; ++j)
      CHECK(d.rho(j, j).real() ==
            doctest::Approx(expected[j] / 128.0).epsilon(1e-12));
  }
  SUBCASE("trace preserved for random Hermitian inputs") {
    std::mt19937 rng(41);
    for (int trial = 0; trial < 100; ++trial) {
      const DensityMatrix rho{random_hermitian(rng, 8),
                              DensityMatrix::Kind::deviation};
      const DensityMatrix d = dephase(rho);
      CHECK(std::abs(d.rho.trace() - rho.rho.trace()) < 1e-12);
      CHECK(is_hermitian(d.rho, 1e-12 * d.rho.norm()));
    }
  }
}

TEST_CASE("evolve") {
  SUBCASE("identity leaves the state alone") {
    const DensityMatrix rho = equilibrium_state(kCs);
    const DensityMatrix out = evolve(rho, Matrix::Identity(8, 8));
    CHECK((out.rho - rho.rho).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("pi/2 about y rotates Iz into Ix") {
    const SpinOps ops = spin_operators(3.5);
    const Matrix u = hard_pulse_propagator(8, kPi / 2, kPi / 2);
    const DensityMatrix out = evolve(equilibrium_state(kCs), u);
    CHECK((out.rho - ops.ix).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("superposition density matrix entries") {
    Matrix proj = Matrix::Zero(8, 8);
    proj(0, 0) = 1.0;
    const Matrix u = hard_pulse_propagator(8, kPi / 2, kPi / 2);
    const DensityMatrix sigma =
        evolve(DensityMatrix{proj, DensityMatrix::Kind::full}, u);
    CHECK(std::abs(sigma.rho(0, 1)) ==
          doctest::Approx(std::sqrt(7.0) / 128.0).epsilon(1e-12));
    CHECK(std::abs(sigma.rho(1, 2)) ==
          doctest::Approx(std::sqrt(147.0) / 128.0).epsilon(1e-12));
    CHECK(std::abs(sigma.rho(3, 4)) ==
          doctest::Approx(35.0 / 128.0).epsilon(1e-12));
    CHECK(std::abs(sigma.rho.trace() - 1.0) < 1e-12);
  }
  SUBCASE("non-unitary operator rejected") {
    Matrix bad = Matrix::Identity(8, 8) * 2.0;
    CHECK_THROWS_AS(evolve(equilibrium_state(kCs), bad), std::invalid_argument);
  }
  SUBCASE("trace and Hermiticity preserved") {
    std::mt19937 rng(43);
    const Matrix u = hard_pulse_propagator(8, 0.77, 1.1);
    for (int trial = 0; trial < 50; ++trial) {
      const DensityMatrix rho{random_hermitian(rng, 8),
                              DensityMatrix::Kind::deviation};
      const DensityMatrix out = evolve(rho, u);
      CHECK(std::abs(out.rho.trace() - rho.rho.trace()) < 1e-10);
      CHECK(is_hermitian(out.rho, 1e-10 * out.rho.norm()));
    }
  }
}

TEST_CASE("spectrum detection") {
  SUBCASE("rho = Ix reproduces the equilibrium ratios") {
    const SpinOps ops = spin_operators(3.5);
    const auto lines =
        detect_spectrum(DensityMatrix{ops.ix, DensityMatrix::Kind::deviation}, kCs);
    const double expected[7] = {7.0 / 4, 3.0, 15.0 / 4, 4.0, 15.0 / 4, 3.0, 7.0 / 4};
    for (int j = 0; j < 7; ++j)
      CHECK(lines[j].intensity() == doctest::Approx(expected[j]).epsilon(1e-12));
  }
  SUBCASE("superposition ratios 7:42:105:140:105:42:7") {
    const auto lines = superposition_spectrum(kCs);
    const double ratio[7] = {7, 42, 105, 140, 105, 42, 7};
    for (int j = 0; j < 7; ++j)
      CHECK(lines[j].intensity() / lines[3].intensity() ==
            doctest::Approx(ratio[j] / 140.0).epsilon(1e-12));
  }
  SUBCASE("diagonal state gives no signal") {
    for (const auto& line : detect_spectrum(pps_000(kCs), kCs))
      CHECK(line.intensity() == 0.0);
  }
  SUBCASE("linearity in the density matrix") {
    std::mt19937 rng(47);
    const DensityMatrix r1{random_hermitian(rng, 8), DensityMatrix::Kind::deviation};
    const DensityMatrix r2{random_hermitian(rng, 8), DensityMatrix::Kind::deviation};
    const double a = 0.3, b = -1.7;
    const DensityMatrix mix{a * r1.rho + b * r2.rho, DensityMatrix::Kind::deviation};
    const auto s1 = detect_spectrum(r1, kCs);
    const auto s2 = detect_spectrum(r2, kCs);
    const auto sm = detect_spectrum(mix, kCs);
    for (int j = 0; j < 7; ++j)
      CHECK(std::abs(sm[j].amplitude - (a * s1[j].amplitude + b * s2[j].amplitude)) <
            1e-12);
  }
}

TEST_CASE("small-angle readout") {
  SUBCASE("equilibrium at 5 degrees within the linear approximation") {
    const auto lines =
        small_angle_readout(equilibrium_state(kCs), 5.0 * kPi / 180.0, kCs);
    const SpinOps ops = spin_operators(3.5);
    const double theta = 5.0 * kPi / 180.0;
    const auto full = detect_spectrum(
        evolve(equilibrium_state(kCs),
               hard_pulse_propagator(8, theta, kPi / 2)),
        kCs);
    for (int j = 0; j < 7; ++j) {
      // population difference across each line is exactly 1 at equilibrium
      const double linear = theta * std::norm(ops.ix(j, j + 1));
      CHECK(lines[j].intensity() == doctest::Approx(linear).epsilon(1e-12));
      // the linearization tracks the full propagation to ~theta^2
      CHECK(lines[j].intensity() ==
            doctest::Approx(full[j].intensity()).epsilon(0.02));
    }
    const double ratio[7] = {7, 12, 15, 16, 15, 12, 7};
    for (int j = 0; j < 7; ++j)
      CHECK(lines[j].intensity() / lines[3].intensity() ==
            doctest::Approx(ratio[j] / 16.0).epsilon(0.02));
  }
  SUBCASE("zero angle gives no signal") {
    for (const auto& line :
         small_angle_readout(equilibrium_state(kCs), 0.0, kCs))
      CHECK(line.intensity() == 0.0);
  }
  SUBCASE("coherent input raises the warning flag") {
    bool warned = false;
    small_angle_readout(equilibrium_state(kCs), 0.1, kCs, &warned);
    CHECK(!warned);
    const SpinOps ops = spin_operators(3.5);
    small_angle_readout(DensityMatrix{ops.ix, DensityMatrix::Kind::deviation},
                        0.1, kCs, &warned);
    CHECK(warned);
  }
}

TEST_CASE("classification") {
  const auto reference = superposition_spectrum(kCs);
  SUBCASE("reference against itself is constant") {
    const ClassifyResult res = classify(reference, reference);
    CHECK(res.classification == Classification::constant);
    CHECK(res.inverted.empty());
  }
  SUBCASE("U(1,2,3,4) inverts exactly line d") {
    const DJOutcome out = run_dj(OracleSpec::balanced(2, 3, 4), kCs);
    CHECK(out.classification == Classification::balanced);
    CHECK(out.inverted == std::set<char>{'d'});
  }
  SUBCASE("U(1,4,5,8) inverted set from the brute-force sign pattern") {
    const DJOutcome out = run_dj(OracleSpec::balanced(4, 5, 8), kCs);
    CHECK(out.inverted == expected_inverted(4, 5, 8));
  }
  SUBCASE("mismatched line sets rejected") {
    auto truncated = reference;
    truncated.pop_back();
    CHECK_THROWS_AS(classify(truncated, reference), std::invalid_argument);
  }
}

TEST_CASE("DJ pipeline") {
  SUBCASE("constant functions show no inversion") {
    for (int which : {1, 2}) {
      const DJOutcome out = run_dj(OracleSpec::constant(which), kCs);
      CHECK(out.classification == Classification::constant);
      CHECK(out.inverted.empty());
      // spectrum equals the superposition reference
      const auto reference = superposition_spectrum(kCs);
      for (int j = 0; j < 7; ++j)
        CHECK(std::abs(out.spectrum[j].amplitude - reference[j].amplitude) <
              1e-12);
    }
  }
  SUBCASE("every balanced oracle inverts at least one line") {
    std::map<std::set<char>, std::string> fingerprints;
    for (const auto& [k, l, m] : enumerate_balanced_oracles()) {
      const DJOutcome out = run_dj(OracleSpec::balanced(k, l, m), kCs);
      CHECK(out.classification == Classification::balanced);
      CHECK(!out.inverted.empty());
      CHECK(out.inverted == expected_inverted(k, l, m));
      CHECK(out.oracle_fidelity >= 1.0 - 1e-9);
      fingerprints[out.inverted] = out.oracle.name();
    }
    // the 35 inverted-line fingerprints turn out to be pairwise distinct
    CHECK(fingerprints.size() == 35);
  }
  SUBCASE("ideal and refocused models agree") {
    for (const auto& [k, l, m] : enumerate_balanced_oracles()) {
      const DJOutcome a = run_dj(OracleSpec::balanced(k, l, m), kCs,
                                 PulseModel::ideal);
      const DJOutcome b = run_dj(OracleSpec::balanced(k, l, m), kCs,
                                 PulseModel::refocused_ideal);
      CHECK(a.classification == b.classification);
      CHECK(a.inverted == b.inverted);
    }
  }
}

TEST_CASE("oracle parsing") {
  CHECK(OracleSpec::parse("constant").kind == OracleSpec::Kind::constant1);
  CHECK(OracleSpec::parse("constant2").kind == OracleSpec::Kind::constant2);
  const OracleSpec b = OracleSpec::parse("U(1,3,5,7)");
  CHECK(b.kind == OracleSpec::Kind::balanced);
  CHECK(b.name() == "U(1,3,5,7)");
  CHECK_THROWS_AS(OracleSpec::parse("U1(pi)"), std::invalid_argument);
  CHECK_THROWS_AS(OracleSpec::parse("U(1,5,3,7)"), std::invalid_argument);
}

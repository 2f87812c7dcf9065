#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "reion/ion_model.hpp"
#include "reion/ion_spec_file.hpp"
#include "reion/units.hpp"

using namespace reion;

namespace {

HalfInt h(int twice) { return HalfInt::from_twice(twice); }

IonSpec single_manifold(HalfInt L, HalfInt S, HalfInt J, const std::string& label = "X") {
  IonSpec spec;
  spec.manifolds.push_back({label, L, S, J, 0.0});
  return spec;
}

IonSpec shipped() { return load_ion_spec(REION_DATA_DIR "/ndgao3.ion"); }

// Random real C_s set at typical perovskite magnitudes.
void randomise_cf(IonSpec& spec, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-800.0, 800.0);
  spec.cf = {};
  for (int k : {2, 4, 6})
    for (int q = 0; q <= k; q += 2) spec.cf.set(k, q, u(rng));
}

EigenSystem identity_system(int n) {
  EigenSystem es;
  es.energies = Eigen::VectorXd::Zero(n);
  es.states = OperatorMatrixd::Identity(n, n);
  return es;
}

}  // namespace

TEST_CASE("crystal-field parameters fill and check the Hermitian partner") {
  CrystalFieldParams cf;
  cf.set(2, 2, {3.0, 1.0});
  CHECK(cf.at(2, -2) == std::complex<double>(3.0, -1.0));
  cf.set(4, 1, {2.0, 1.0});
  CHECK(cf.at(4, -1) == std::complex<double>(-2.0, 1.0));
  CHECK(cf.at(6, 0) == std::complex<double>(0.0));
  CHECK_NOTHROW(cf.validate());

  CHECK_THROWS_AS(cf.set(3, 0, 1.0), ArgumentError);
  CHECK_THROWS_AS(cf.set(2, 3, 1.0), ArgumentError);
  CHECK_THROWS_AS(cf.set(2, 0, {1.0, 0.5}), ArgumentError);
  CrystalFieldParams both;
  both.set(2, 1, 1.0);
  CHECK_THROWS_AS(both.set(2, -1, 1.0), ArgumentError);  // must be -1
  CHECK_NOTHROW(both.set(2, -1, -1.0));
}

TEST_CASE("a nonzero block without its reduced element is a configuration error") {
  IonSpec spec = single_manifold(6, h(3), h(9), "4I9/2");
  spec.cf.set(4, 0, 100.0);
  spec.rmes.push_back({"4I9/2", "4I9/2", 2, -0.5});
  try {
    build_crystal_field(spec);
    FAIL("expected ConfigurationError");
  } catch (const ConfigurationError& e) {
    CHECK(std::string(e.what()).find("4I9/2") != std::string::npos);
    CHECK(std::string(e.what()).find("C^4") != std::string::npos);
  }
  // Rank 6 cannot couple J = 3/2 to itself, so no element is needed.
  IonSpec small = single_manifold(3, h(3), h(3), "4F3/2");
  small.cf.set(6, 0, 100.0);
  CHECK(build_crystal_field(small).norm() == 0.0);
}

TEST_CASE("J = 3/2 with B20 only: hand-evaluated diagonal") {
  IonSpec spec = single_manifold(3, h(3), h(3), "4F3/2");
  spec.rmes.push_back({"4F3/2", "4F3/2", 2, 1.0});
  spec.cf.set(2, 0, 10.0);
  const OperatorMatrixd hcf = build_crystal_field(spec);
  const double unit = 10.0 * units::ghz_per_wavenumber * oracle::k3j_32_rank2_diag;
  const double expected[] = {unit, -unit, -unit, unit};
  for (int i = 0; i < 4; ++i) {
    CHECK(hcf(i, i).real() == doctest::Approx(expected[i]).epsilon(1e-14));
    for (int j = 0; j < 4; ++j)
      if (i != j) CHECK(std::abs(hcf(i, j)) == 0.0);
  }
  // B22 couples M to M - 2 only.
  spec.cf.set(2, 2, 5.0);
  const OperatorMatrixd h2 = build_crystal_field(spec);
  CHECK(std::abs(h2(0, 2)) > 0.0);
  CHECK(std::abs(h2(0, 1)) == 0.0);
  CHECK(std::abs(h2(0, 3)) == 0.0);
  CHECK((h2 - h2.adjoint()).norm() < 1e-12);
}

TEST_CASE("Zeeman term for a Lande moment along c is diagonal") {
  IonSpec spec = single_manifold(3, h(3), h(3));
  const double g = 0.4;
  const OperatorMatrixd hz = build_zeeman(spec, Eigen::Vector3d(0, 0, 1.0));
  const double m[] = {1.5, 0.5, -0.5, -1.5};
  for (int i = 0; i < 4; ++i) {
    CHECK(hz(i, i).real() == doctest::Approx(g * units::bohr_magneton_ghz_per_tesla * m[i]).epsilon(1e-14));
  }
  CHECK((hz - OperatorMatrixd(hz.diagonal().asDiagonal())).norm() == 0.0);
  // Field along a is off-diagonal with zero trace.
  const OperatorMatrixd hx = build_zeeman(spec, Eigen::Vector3d(1.0, 0, 0));
  CHECK(hx.diagonal().norm() == 0.0);
  CHECK((hx - hx.adjoint()).norm() < 1e-14);
}

TEST_CASE("exact L+2S moments reduce to the Lande moment inside a manifold") {
  IonSpec lande = shipped();
  IonSpec exact = lande;
  exact.moment_mode = MomentMode::exact_ls;
  const auto ml = moment_operators(lande);
  const auto me = moment_operators(exact);
  for (int axis = 0; axis < 3; ++axis) {
    CHECK((ml[axis].topLeftCorner(10, 10) - me[axis].topLeftCorner(10, 10)).norm() < 1e-12);
    CHECK((ml[axis].bottomRightCorner(4, 4) - me[axis].bottomRightCorner(4, 4)).norm() < 1e-12);
  }
}

TEST_CASE("the full Hamiltonian is Hermitian at any field") {
  const IonModel model(shipped());
  std::mt19937 rng(3);
  std::normal_distribution<double> n(0.0, 2.0);
  for (int i = 0; i < 10; ++i) {
    const OperatorMatrixd hm = model.hamiltonian({n(rng), n(rng), n(rng)});
    CHECK((hm - hm.adjoint()).norm() < 1e-9 * hm.norm());
  }
}

TEST_CASE("Kramers pairing at zero field for random crystal fields") {
  std::mt19937 rng(17);
  IonSpec spec = shipped();
  for (int trial = 0; trial < 20; ++trial) {
    randomise_cf(spec, rng);
    // Add odd-q terms too: time reversal still protects the doublets.
    spec.cf.set(4, 1, {50.0 * trial, 10.0});
    const EigenSystem es = diagonalize(build_free_ion(spec) + build_crystal_field(spec));
    for (Eigen::Index i = 0; i < es.energies.size(); i += 2) {
      CHECK(es.energies(i + 1) - es.energies(i) < kKramersTolerance);
      if (i + 2 < es.energies.size()) CHECK(es.energies(i + 2) - es.energies(i + 1) > 1e-3);
    }
  }
}

TEST_CASE("diagonalize: ordering, shift and phase convention") {
  OperatorMatrixd m(2, 2);
  m << 1.0, std::complex<double>(0, 1), std::complex<double>(0, -1), 1.0;
  const EigenSystem es = diagonalize(m);
  CHECK(es.ground_energy == doctest::Approx(0.0).scale(1.0));
  CHECK(es.energies(0) == doctest::Approx(0.0).scale(1.0));
  CHECK(es.energies(1) == doctest::Approx(2.0));
  for (int c = 0; c < 2; ++c) {
    Eigen::Index big;
    es.states.col(c).cwiseAbs().maxCoeff(&big);
    CHECK(es.states(big, c).imag() == doctest::Approx(0.0).scale(1.0));
    CHECK(es.states(big, c).real() > 0.0);
  }
  CHECK((m * es.states.col(1) - (2.0 + es.ground_energy) * es.states.col(1)).norm() < 1e-12);

  OperatorMatrixd bad(2, 2);
  bad << 0.0, 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(diagonalize(bad), ContractError);
  CHECK_THROWS_AS(diagonalize(OperatorMatrixd::Zero(2, 3)), ContractError);
}

TEST_CASE("irrep classes by M") {
  const auto basis = single_manifold(6, h(3), h(9)).basis();  // M = 9/2 ... -9/2
  auto pure = [&](int twice_m) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(10);
    v((9 - twice_m) / 2) = 1.0;
    return v;
  };
  CHECK(classify_irrep(pure(1), basis) == Irrep::gamma3);
  CHECK(classify_irrep(pure(-3), basis) == Irrep::gamma3);
  CHECK(classify_irrep(pure(9), basis) == Irrep::gamma3);
  CHECK(classify_irrep(pure(-1), basis) == Irrep::gamma4);
  CHECK(classify_irrep(pure(3), basis) == Irrep::gamma4);
  CHECK(gamma3_weight(pure(5), basis) == 1.0);

  Eigen::VectorXcd mixed = (pure(1) + pure(-1)) / std::sqrt(2.0);
  CHECK_THROWS_AS(classify_irrep(mixed, basis), AmbiguousIrrepError);
  Eigen::VectorXcd leaning = std::sqrt(0.7) * pure(1) + std::sqrt(0.3) * pure(-1);
  CHECK(gamma3_weight(leaning, basis) == doctest::Approx(0.7));
  CHECK(classify_irrep(leaning, basis) == Irrep::gamma3);
  CHECK_THROWS_AS(gamma3_weight(Eigen::VectorXcd::Zero(3), basis), ArgumentError);
  CHECK(to_string(Irrep::gamma4) == "Gamma4");
}

TEST_CASE("doublet g-factors of pure states") {
  const IonSpec spec = single_manifold(6, h(3), h(9));
  const EigenSystem es = identity_system(10);
  const GFactors top = doublet_g_factors(es, {0, 9}, spec);  // |+-9/2>
  CHECK(top.c == doctest::Approx(72.0 / 11.0).epsilon(1e-13));
  CHECK(top.a == doctest::Approx(0.0).scale(1.0));
  CHECK(top.b == doctest::Approx(0.0).scale(1.0));
  const GFactors half = doublet_g_factors(es, {4, 5}, spec);  // |+-1/2>
  CHECK(half.c == doctest::Approx(8.0 / 11.0).epsilon(1e-13));
  CHECK(half.a == doctest::Approx(40.0 / 11.0).epsilon(1e-13));
  CHECK(half.b == doctest::Approx(40.0 / 11.0).epsilon(1e-13));
  CHECK(half.along(Axis::a) == half.a);

  const GFactors spin = doublet_g_factors(identity_system(2), {0, 1}, single_manifold(0, h(1), h(1)));
  CHECK(spin.a == doctest::Approx(2.0));
  CHECK(spin.b == doctest::Approx(2.0));
  CHECK(spin.c == doctest::Approx(2.0));

  EigenSystem split = identity_system(10);
  split.energies(9) = 1.0;
  CHECK_THROWS_AS(doublet_g_factors(split, {0, 9}, spec), ContractError);
}

TEST_CASE("doublet bases separate into Gamma3 and Gamma4 members") {
  const IonModel model(shipped());
  const IonLevels zero = model.solve(Eigen::Vector3d::Zero());
  for (int i = 0; i < 14; i += 2) {
    CHECK(zero.gamma3_weights[i] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(zero.gamma3_weights[i + 1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  }
  CHECK(zero.z1 == std::array<int, 2>{0, 1});
  CHECK(zero.r1 == std::array<int, 2>{10, 11});
  // R1 sits near the 4F3/2 centroid.
  CHECK(std::abs(zero.eigen.energies(10) / units::ghz_per_wavenumber - 11390.0) < 400.0);
}

TEST_CASE("Zeeman splitting follows the g-factors at small field") {
  const IonModel model(shipped());
  const GFactors g = model.ground_g_factors();
  // Shipped-set regression values.
  CHECK(g.a == doctest::Approx(2.115).epsilon(1e-3));
  CHECK(g.b == doctest::Approx(1.711).epsilon(1e-3));
  CHECK(g.c == doctest::Approx(2.611).epsilon(1e-3));
  const double b = 1e-4;
  for (Axis axis : {Axis::a, Axis::b, Axis::c}) {
    Eigen::Vector3d field = Eigen::Vector3d::Zero();
    field(static_cast<int>(axis)) = b;
    const IonLevels lv = model.solve(field);
    const double split = lv.eigen.energies(1) - lv.eigen.energies(0);
    const double expected = g.along(axis) * units::bohr_magneton_ghz_per_tesla * b;
    CHECK(std::abs(split - expected) / expected < 1e-3);
  }
}

TEST_CASE("main-line slopes match a finite difference of the eigenvalues") {
  const IonModel model(shipped());
  const double b0 = 0.3, db = 1e-5;
  auto lines_at = [&](double b) {
    const IonLevels lv = model.solve({0, 0, b});
    return single_ion_lines(lv.eigen, model.basis(), lv.z1, lv.r1);
  };
  const auto lo = lines_at(b0 - db), hi = lines_at(b0 + db), mid = lines_at(b0);
  REQUIRE(mid.size() == 4);
  // Oracle slope: first-order perturbation <f|dH/dB|f> - <i|dH/dB|i>.
  const IonLevels lv = model.solve({0, 0, b0});
  const OperatorMatrixd dh = -units::bohr_magneton_ghz_per_tesla * model.moments()[2];
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& l = mid[k];
    const double slope_fd = (hi[k].frequency - lo[k].frequency) / (2 * db);
    const auto fi = lv.eigen.states.col(l.final_state), in = lv.eigen.states.col(l.initial_state);
    const double slope_pt = (fi.dot(dh * fi) - in.dot(dh * in)).real();
    CHECK(slope_fd == doctest::Approx(slope_pt).epsilon(1e-5));
  }
}

TEST_CASE("single-ion lines enumerate the four Z1 to R1 pairs") {
  const IonModel model(shipped());
  const IonLevels lv = model.solve({0, 0, 0.5});
  const auto lines = single_ion_lines(lv.eigen, model.basis(), lv.z1, lv.r1);
  REQUIRE(lines.size() == 4);
  for (const auto& l : lines) {
    CHECK(l.frequency == doctest::Approx(lv.eigen.energies(l.final_state) - lv.eigen.energies(l.initial_state)));
    REQUIRE(l.initial_irrep.has_value());
    REQUIRE(l.final_irrep.has_value());
    CHECK((*l.initial_irrep == Irrep::gamma3) == (l.initial_gamma3_weight > 0.5));
  }
  CHECK(lines[0].initial_state == 0);
  CHECK(lines[3].final_state == 11);
}

TEST_CASE("IonModel rejects specs without two Kramers manifolds") {
  IonSpec spec = single_manifold(6, h(3), h(9), "4I9/2");
  CHECK_THROWS_AS(IonModel{spec}, ConfigurationError);
  IonSpec shifted = shipped();
  shifted.manifolds[0].centroid_cm = 5.0;
  CHECK_THROWS_AS(IonModel{shifted}, ConfigurationError);
}

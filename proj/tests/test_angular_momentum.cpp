#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "reion/angular_momentum.hpp"

using namespace reion;

namespace {

HalfInt h(int twice) { return HalfInt::from_twice(twice); }

double w3(int a, int b, int c, int d, int e, int f) { return wigner3j(h(a), h(b), h(c), h(d), h(e), h(f)); }
double w6(int a, int b, int c, int d, int e, int f) { return wigner6j(h(a), h(b), h(c), h(d), h(e), h(f)); }

}  // namespace

TEST_CASE("HalfInt parsing and arithmetic") {
  CHECK(HalfInt::parse("9/2").twice() == 9);
  CHECK(HalfInt::parse("3").twice() == 6);
  CHECK(HalfInt::parse("-1/2").twice() == -1);
  CHECK_THROWS_AS(HalfInt::parse("3/4"), ArgumentError);
  CHECK_THROWS_AS(HalfInt::parse("x"), ArgumentError);
  CHECK((h(9) + h(1)) == HalfInt(5));
  CHECK((h(3) - h(5)) == -HalfInt(1));
  CHECK(h(9).str() == "9/2");
  CHECK(HalfInt(2).str() == "2");
  CHECK(h(9).multiplicity() == 10);
  CHECK(h(7) < h(9));
}

TEST_CASE("3j closed forms") {
  CHECK(wigner3j(1, 1, 0, 0, 0, 0) == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(wigner3j(1, 2, 4, 0, 0, 0) == 0.0);
  CHECK(wigner3j(3, 2, 3, 0, 0, 0) == doctest::Approx(oracle::k3j_323_000).epsilon(1e-15));
  CHECK(w3(9, 4, 9, -9, 0, 9) == doctest::Approx(oracle::k3j_92_2_92).epsilon(1e-14));
  CHECK(w3(9, 12, 9, -1, 0, 1) == doctest::Approx(oracle::k3j_92_6_92).epsilon(1e-14));
  CHECK(w3(3, 4, 3, -3, 4, -1) == doctest::Approx(oracle::k3j_32_2_32).epsilon(1e-14));
  CHECK(wigner3j(4, 4, 4, 2, -4, 2) == doctest::Approx(oracle::k3j_444).epsilon(1e-14));
}

TEST_CASE("3j with j3 = 0 is (-1)^(j-m) / sqrt(2j+1)") {
  for (int tj = 0; tj <= 12; ++tj) {
    for (int tm = -tj; tm <= tj; tm += 2) {
      const double expected = parity_sign((tj - tm) / 2) / std::sqrt(tj + 1.0);
      CHECK(w3(tj, tj, 0, tm, -tm, 0) == doctest::Approx(expected).epsilon(1e-14));
    }
  }
}

TEST_CASE("3j agrees with a direct long-double Racah sum for every j <= 3") {
  double worst = 0.0;
  for (int a = 0; a <= 6; ++a)
    for (int b = 0; b <= 6; ++b)
      for (int c = 0; c <= 6; ++c)
        for (int ma = -a; ma <= a; ma += 2)
          for (int mb = -b; mb <= b; mb += 2) {
            const int mc = -ma - mb;
            if (std::abs(mc) > c || (c + mc) % 2) continue;
            worst = std::max(worst, std::abs(w3(a, b, c, ma, mb, mc) - oracle::wigner3j2(a, b, c, ma, mb, mc)));
          }
  CHECK(worst < 1e-13);
}

TEST_CASE("3j symmetries for j <= 4") {
  std::mt19937 rng(11);
  int checked = 0;
  for (int a = 0; a <= 8; ++a)
    for (int b = 0; b <= 8; ++b)
      for (int c = std::abs(a - b); c <= std::min(8, a + b); c += 2)
        for (int ma = -a; ma <= a; ma += 2)
          for (int mb = -b; mb <= b; mb += 2) {
            const int mc = -ma - mb;
            if (std::abs(mc) > c) continue;
            const double v = w3(a, b, c, ma, mb, mc);
            const int odd = parity_sign((a + b + c) / 2);
            CHECK(w3(b, c, a, mb, mc, ma) == doctest::Approx(v).epsilon(1e-13));
            CHECK(w3(c, a, b, mc, ma, mb) == doctest::Approx(v).epsilon(1e-13));
            CHECK(w3(b, a, c, mb, ma, mc) == doctest::Approx(odd * v).epsilon(1e-13));
            CHECK(w3(a, b, c, -ma, -mb, -mc) == doctest::Approx(odd * v).epsilon(1e-13));
            ++checked;
          }
  CHECK(checked > 1000);
}

TEST_CASE("3j orthogonality for j1, j2 <= 4") {
  for (int a = 0; a <= 8; ++a)
    for (int b = 0; b <= 8; ++b)
      for (int c = std::abs(a - b); c <= a + b; c += 2)
        for (int mc = -c; mc <= c; mc += 2) {
          double sum = 0.0;
          for (int ma = -a; ma <= a; ma += 2) {
            const int mb = -mc - ma;
            if (std::abs(mb) > b || (b + mb) % 2) continue;
            const double v = w3(a, b, c, ma, mb, mc);
            sum += (c + 1) * v * v;
          }
          CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
}

TEST_CASE("3j argument errors") {
  CHECK_THROWS_AS(w3(-2, 2, 0, 0, 0, 0), ArgumentError);
  CHECK_THROWS_AS(w3(2, 2, 0, 4, -4, 0), ArgumentError);
  CHECK_THROWS_AS(w3(2, 2, 0, 1, -1, 0), ArgumentError);  // m parity differs from j
  CHECK(w3(2, 2, 2, 2, 2, 0) == 0.0);                      // sum of m nonzero
}

TEST_CASE("6j closed forms and oracle") {
  CHECK(wigner6j(1, 1, 1, 0, 1, 1) == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
  CHECK(wigner6j(1, 1, 1, 1, 1, 1) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(wigner6j(1, 1, 5, 1, 1, 1) == 0.0);
  CHECK(wigner6j(2, 2, 2, 2, 2, 2) == doctest::Approx(oracle::k6j_222).epsilon(1e-14));
  CHECK(w6(12, 9, 3, 9, 12, 4) == doctest::Approx(oracle::k6j_6_92_32).epsilon(1e-14));
  CHECK(w6(8, 8, 8, 7, 7, 7) == doctest::Approx(oracle::k6j_444_727272).epsilon(1e-14));

  // {a b c; 0 c b} = (-1)^(a+b+c) / sqrt((2b+1)(2c+1))
  for (int a = 0; a <= 6; ++a)
    for (int b = 0; b <= 6; ++b)
      for (int c = std::abs(a - b); c <= a + b; c += 2) {
        const double expected = parity_sign((a + b + c) / 2) / std::sqrt((b + 1.0) * (c + 1.0));
        CHECK(w6(a, b, c, 0, c, b) == doctest::Approx(expected).epsilon(1e-14));
      }

  double worst = 0.0;
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; b <= 4; ++b)
      for (int c = 0; c <= 4; ++c)
        for (int d = 0; d <= 4; ++d)
          for (int e = 0; e <= 4; ++e)
            for (int f = 0; f <= 4; ++f)
              worst = std::max(worst, std::abs(w6(a, b, c, d, e, f) - oracle::wigner6j2(a, b, c, d, e, f)));
  CHECK(worst < 1e-13);
}

TEST_CASE("Biedenharn-Elliott identity on random small arguments") {
  // sum_x (-1)^(S+x) (2x+1) {a b x; c d p} {c d x; e f q} {e f x; b a r}
  //   = {p q r; e a d} {p q r; f b c},  S = a+b+c+d+e+f+p+q+r
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> pick(0, 4);
  int nontrivial = 0;
  for (int trial = 0; trial < 60000 && nontrivial < 40; ++trial) {
    const int a = pick(rng), b = pick(rng), c = pick(rng), d = pick(rng), e = pick(rng), f = pick(rng);
    const int p = pick(rng), q = pick(rng), r = pick(rng);
    const int total = a + b + c + d + e + f + p + q + r;
    if (total % 2) continue;
    const double rhs = w6(p, q, r, e, a, d) * w6(p, q, r, f, b, c);
    double lhs = 0.0;
    for (int x = 0; x <= 16; ++x) {
      if ((total + x) % 2) continue;
      const double term = w6(a, b, x, c, d, p) * w6(c, d, x, e, f, q) * w6(e, f, x, b, a, r);
      lhs += parity_sign((total + x) / 2) * (x + 1) * term;
    }
    if (std::abs(rhs) > 1e-6) ++nontrivial;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12).scale(1.0));
  }
  CHECK(nontrivial >= 10);
}

TEST_CASE("angular momentum matrices") {
  for (int tj = 0; tj <= 9; ++tj) {
    const auto m = angular_momentum_matrices(h(tj));
    const double jj = 0.25 * tj * (tj + 2);
    const OperatorMatrixd commutator = m.x * m.y - m.y * m.x;
    CHECK((commutator - std::complex<double>(0, 1) * m.z).norm() < 1e-12);
    const OperatorMatrixd casimir = m.x * m.x + m.y * m.y + m.z * m.z;
    CHECK((casimir - jj * OperatorMatrixd::Identity(tj + 1, tj + 1)).norm() < 1e-12);
    for (int row = 0; row <= tj; ++row) CHECK(m.z(row, row).real() == doctest::Approx(0.5 * tj - row));
  }
  const auto half = angular_momentum_matrices(h(1));
  OperatorMatrixd sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 0.5, 0.5, 0;
  sy << 0, std::complex<double>(0, -0.5), std::complex<double>(0, 0.5), 0;
  sz << 0.5, 0, 0, -0.5;
  CHECK((half.x - sx).norm() < 1e-15);
  CHECK((half.y - sy).norm() < 1e-15);
  CHECK((half.z - sz).norm() < 1e-15);
}

TEST_CASE("Lande factors") {
  CHECK(lande_g(6, h(3), h(9)) == doctest::Approx(8.0 / 11.0).epsilon(1e-15));
  CHECK(lande_g(3, h(3), h(3)) == doctest::Approx(0.4).epsilon(1e-15));
  for (int ts = 1; ts <= 7; ++ts) CHECK(lande_g(0, h(ts), h(ts)) == doctest::Approx(2.0));
  CHECK(lande_g(1, 1, 0) == 0.0);
  CHECK_THROWS_AS(lande_g(6, h(3), h(1)), ArgumentError);
}

TEST_CASE("tensor elements follow Wigner-Eckart") {
  // Rank 1 with <J||J||J> reproduces J_z and the spherical J_{+1} = -J+/sqrt2.
  for (int tj = 1; tj <= 9; ++tj) {
    const auto m = angular_momentum_matrices(h(tj));
    const double red = angular_momentum_reduced(h(tj));
    CHECK((tensor_block(1, 0, h(tj), h(tj), red) - m.z).norm() < 1e-12);
    const OperatorMatrixd raise = m.x + std::complex<double>(0, 1) * m.y;
    CHECK((tensor_block(1, 1, h(tj), h(tj), red) + raise / std::sqrt(2.0)).norm() < 1e-12);
  }
  // Rank 0 with reduced sqrt(2J+1) is the identity.
  CHECK((tensor_block(0, 0, h(9), h(9), std::sqrt(10.0)) - OperatorMatrixd::Identity(10, 10)).norm() < 1e-13);

  // (-1)^q C^k_{-q}^dagger = C^k_q for a real reduced element within a manifold.
  for (int k : {2, 4, 6}) {
    for (int q = -k; q <= k; ++q) {
      const OperatorMatrixd a = tensor_block(k, q, h(9), h(9), 0.7);
      const OperatorMatrixd b = tensor_block(k, -q, h(9), h(9), 0.7);
      CHECK((a - parity_sign(q) * b.adjoint()).norm() < 1e-12);
      const OperatorMatrixd herm = a + parity_sign(q) * b;
      CHECK((herm - herm.adjoint()).norm() < 1e-12);
    }
  }
  // Selection rules.
  CHECK(tensor_block(2, 1, h(9), h(9), 1.0).diagonal().norm() == 0.0);
  CHECK(tensor_block(4, 0, h(3), h(3), 1.0).norm() == 0.0);  // k > J + J'
}

TEST_CASE("tensor_matrix_element matches the block and validates manifolds") {
  const ReducedMatrixElement rme{"4I9/2", "4I9/2", 2, -0.5};
  const BasisState bra{"4I9/2", 6, h(3), h(9), h(5)};
  const BasisState ket{"4I9/2", 6, h(3), h(9), h(1)};
  const auto block = tensor_block(2, 2, h(9), h(9), -0.5);
  // rows/cols are M descending: index = (J - M)
  CHECK(std::abs(tensor_matrix_element(2, 2, bra, ket, rme) - block((9 - 5) / 2, (9 - 1) / 2)) < 1e-15);
  CHECK(tensor_matrix_element(2, 1, bra, ket, rme) == std::complex<double>(0.0));
  const BasisState other_spin{"4I9/2", 6, h(1), h(9), h(1)};
  CHECK_THROWS_AS(tensor_matrix_element(2, 2, bra, other_spin, rme), ArgumentError);
}

TEST_CASE("decoupled reduced elements: orbital plus spin parts of J give J") {
  for (auto [L, tS, tJ] : {std::tuple{6, 3, 9}, std::tuple{3, 3, 3}, std::tuple{3, 3, 9}, std::tuple{1, 1, 3}}) {
    const HalfInt S = h(tS), J = h(tJ);
    const double orbital = lsj_orbital_reduced(L, S, J, L, J, 1, angular_momentum_reduced(L));
    const double spin = lsj_spin_reduced(L, S, J, S, J, 1, angular_momentum_reduced(S));
    CHECK(orbital + spin == doctest::Approx(angular_momentum_reduced(J)).epsilon(1e-13));
    // Projection theorem: (L + 2S) -> g_J J.
    CHECK(orbital + 2 * spin == doctest::Approx(lande_g(L, S, J) * angular_momentum_reduced(J)).epsilon(1e-13));
  }
}

TEST_CASE("single-electron reduced elements") {
  // <l||C^k||l> = (-1)^l (2l+1) (l k l; 0 0 0)
  CHECK(single_electron_rme(3, 2) == doctest::Approx(-7.0 * oracle::wigner3j2(6, 4, 6, 0, 0, 0)).epsilon(1e-14));
  CHECK(single_electron_rme(3, 0) == doctest::Approx(-7.0 * oracle::wigner3j2(6, 0, 6, 0, 0, 0)).epsilon(1e-14));
  CHECK(single_electron_rme(3, 1) == 0.0);
}

TEST_CASE("Stevens factor check of the 4I9/2 rank-2 reduced element") {
  const double rme = -0.49540841901187825;  // shipped in data/ndgao3.ion
  const double c20_top = tensor_block(2, 0, h(9), h(9), rme)(0, 0).real();
  CHECK(c20_top == doctest::Approx(oracle::kStevensAlpha / 2 * 36).epsilon(1e-12));
}

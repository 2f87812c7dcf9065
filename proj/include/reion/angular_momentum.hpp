#ifndef REION_ANGULAR_MOMENTUM_HPP
#define REION_ANGULAR_MOMENTUM_HPP

#include <complex>
#include <cstdlib>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "reion/errors.hpp"

namespace reion {

template <typename Scalar>
using OperatorMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
using OperatorMatrixd = OperatorMatrix<double>;

// Integer or half-integer quantum number, stored as twice its value so that
// arithmetic on J, M_J, L, S stays exact.
class HalfInt {
 public:
  constexpr HalfInt() = default;
  constexpr HalfInt(int integer) : twice_(2 * integer) {}  // NOLINT(google-explicit-constructor)

  static constexpr HalfInt from_twice(int twice) {
    HalfInt h;
    h.twice_ = twice;
    return h;
  }
  // Accepts "3", "-2", "3/2", "-7/2".
  static HalfInt parse(std::string_view text);

  constexpr int twice() const { return twice_; }
  constexpr double value() const { return 0.5 * twice_; }
  constexpr bool is_integer() const { return twice_ % 2 == 0; }
  // Integer value; only meaningful when is_integer().
  constexpr int integer() const { return twice_ / 2; }
  // Number of states 2j + 1.
  constexpr int multiplicity() const { return twice_ + 1; }

  std::string str() const;

  constexpr HalfInt operator-() const { return from_twice(-twice_); }
  friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return from_twice(a.twice_ + b.twice_); }
  friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return from_twice(a.twice_ - b.twice_); }
  friend constexpr bool operator==(HalfInt a, HalfInt b) = default;
  friend constexpr auto operator<=>(HalfInt a, HalfInt b) = default;

 private:
  int twice_ = 0;
};

// (-1)^n for integer n.
constexpr int parity_sign(int n) { return (n % 2 == 0) ? 1 : -1; }

// |term, L, S, J, M_J> label of one basis vector.
struct BasisState {
  std::string manifold;
  HalfInt L;
  HalfInt S;
  HalfInt J;
  HalfInt M;
};

// <bra || C^k || ket> between two LSJ manifolds, any 6j recoupling already
// folded into value.
struct ReducedMatrixElement {
  std::string bra_manifold;
  std::string ket_manifold;
  int rank = 0;
  double value = 0.0;
};

// Wigner 3j symbol via the Racah sum, evaluated in exact arithmetic
// (prime-factorised factorials, big-integer sums) and rounded once.
// Returns 0 for any violated selection rule; throws ArgumentError for a
// negative j or |m| > j.
double wigner3j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2, HalfInt m3);

// Wigner 6j symbol {j1 j2 j3; j4 j5 j6}, same arithmetic as wigner3j.
double wigner6j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4, HalfInt j5, HalfInt j6);

bool satisfies_triangle(HalfInt a, HalfInt b, HalfInt c);

// <bra| C^k_q |ket> = (-1)^(J'-M') (J' k J; -M' q M) <J'||C^k||J>.
// Throws ArgumentError when the states do not belong to the manifolds named
// by rme, or when the spins differ.
std::complex<double> tensor_matrix_element(HalfInt k, HalfInt q, const BasisState& bra, const BasisState& ket,
                                           const ReducedMatrixElement& rme);

// Block of a rank-k spherical tensor component between |J' M'> (rows) and
// |J M> (columns), M descending.
OperatorMatrixd tensor_block(int k, int q, HalfInt bra_j, HalfInt ket_j, double reduced);

// <l || C^k || l> for a single electron.
double single_electron_rme(int l, int k);

// <(L S) J || T^k || (L' S) J'> for an operator acting on the orbital part,
// given <L || T^k || L'>.
double lsj_orbital_reduced(HalfInt L, HalfInt S, HalfInt J, HalfInt L_ket, HalfInt J_ket, int k,
                           double orbital_reduced);

// <(L S) J || T^k || (L S') J'> for an operator acting on the spin part,
// given <S || T^k || S'>.
double lsj_spin_reduced(HalfInt L, HalfInt S, HalfInt J, HalfInt S_ket, HalfInt J_ket, int k, double spin_reduced);

// <j || j || j> = sqrt(j (j+1) (2j+1)).
double angular_momentum_reduced(HalfInt j);

double lande_g(HalfInt L, HalfInt S, HalfInt J);

template <typename Scalar>
struct AngularMomentumMatrices {
  OperatorMatrix<Scalar> x;
  OperatorMatrix<Scalar> y;
  OperatorMatrix<Scalar> z;
};

// Jx, Jy, Jz in the |J M> basis with M descending.
template <typename Scalar = double>
AngularMomentumMatrices<Scalar> angular_momentum_matrices(HalfInt j) {
  if (j.twice() < 0) throw ArgumentError("angular_momentum_matrices: negative J " + j.str());
  using Complex = std::complex<Scalar>;
  const int dim = j.multiplicity();
  const Scalar jj = Scalar(j.value()) * (Scalar(j.value()) + 1);

  OperatorMatrix<Scalar> raise = OperatorMatrix<Scalar>::Zero(dim, dim);
  OperatorMatrix<Scalar> jz = OperatorMatrix<Scalar>::Zero(dim, dim);
  for (int row = 0; row < dim; ++row) {
    const Scalar m = Scalar(j.value()) - row;
    jz(row, row) = Complex(m);
    // J+ |m> = sqrt(j(j+1) - m(m+1)) |m+1>, and |m+1> sits one row above.
    if (row > 0) raise(row - 1, row) = Complex(std::sqrt(jj - m * (m + 1)));
  }
  const OperatorMatrix<Scalar> lower = raise.adjoint();
  AngularMomentumMatrices<Scalar> out;
  out.x = (raise + lower) * Complex(0.5);
  out.y = (raise - lower) * Complex(0, -0.5);
  out.z = std::move(jz);
  return out;
}

}  // namespace reion

#endif  // REION_ANGULAR_MOMENTUM_HPP

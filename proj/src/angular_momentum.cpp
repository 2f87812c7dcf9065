#include "reion/angular_momentum.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace reion {

namespace {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;
using BigFloat = boost::multiprecision::cpp_bin_float_50;

constexpr int kMaxFactorialArgument = 4096;

const std::vector<int>& primes_up_to(int limit) {
  static const std::vector<int> primes = [] {
    std::vector<int> out;
    std::vector<bool> composite(kMaxFactorialArgument + 1, false);
    for (int i = 2; i <= kMaxFactorialArgument; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (int k = i * i; k <= kMaxFactorialArgument; k += i) composite[k] = true;
    }
    return out;
  }();
  if (limit > kMaxFactorialArgument) throw ArgumentError("angular momentum too large for exact Wigner evaluation");
  return primes;
}

// Product of factorials raised to signed powers, as a prime exponent vector.
class FactorialProduct {
 public:
  explicit FactorialProduct(int max_argument) : primes_(&primes_up_to(std::max(max_argument, 2))) {
    const auto end = std::upper_bound(primes_->begin(), primes_->end(), std::max(max_argument, 2));
    exponents_.assign(static_cast<std::size_t>(end - primes_->begin()), 0);
  }

  void multiply_factorial(int n, int power = 1) {
    for (std::size_t i = 0; i < exponents_.size(); ++i) {
      const int p = (*primes_)[i];
      if (p > n) break;
      int legendre = 0;
      for (long long pk = p; pk <= n; pk *= p) legendre += static_cast<int>(n / pk);
      exponents_[i] += power * legendre;
    }
  }

  std::vector<int>& exponents() { return exponents_; }
  const std::vector<int>& exponents() const { return exponents_; }
  const std::vector<int>& primes() const { return *primes_; }

 private:
  const std::vector<int>* primes_;
  std::vector<int> exponents_;
};

cpp_int power_of(int p, int e) {
  cpp_int out = 1;
  for (int i = 0; i < e; ++i) out *= p;
  return out;
}

// sum_t sign_t * term_t * sqrt(prefactor), with every term and the prefactor
// given as factorial products. All arithmetic is exact until the final
// rounding to double.
double evaluate_racah(const std::vector<std::pair<int, FactorialProduct>>& terms, const FactorialProduct& sqrt_part) {
  if (terms.empty()) return 0.0;
  const std::size_t np = sqrt_part.exponents().size();

  // Common factor: elementwise minimum exponent, so each term becomes an integer.
  std::vector<int> common(np, 0);
  for (std::size_t i = 0; i < np; ++i) {
    int lo = terms.front().second.exponents()[i];
    for (const auto& [sign, t] : terms) lo = std::min(lo, t.exponents()[i]);
    common[i] = lo;
  }
  cpp_int sum = 0;
  for (const auto& [sign, t] : terms) {
    cpp_int value = 1;
    for (std::size_t i = 0; i < np; ++i) {
      const int e = t.exponents()[i] - common[i];
      if (e > 0) value *= power_of(sqrt_part.primes()[i], e);
    }
    sum += sign * value;
  }
  if (sum == 0) return 0.0;

  // value^2 = sum^2 * prod p^(2 common + sqrt_part).
  cpp_int num = sum * sum;
  cpp_int den = 1;
  for (std::size_t i = 0; i < np; ++i) {
    const int e = 2 * common[i] + sqrt_part.exponents()[i];
    if (e > 0) num *= power_of(sqrt_part.primes()[i], e);
    if (e < 0) den *= power_of(sqrt_part.primes()[i], -e);
  }
  BigFloat magnitude = boost::multiprecision::sqrt(BigFloat(cpp_rational(num, den)));
  const double out = magnitude.convert_to<double>();
  return sum < 0 ? -out : out;
}

void require_magnitude(HalfInt j, const char* who) {
  if (j.twice() < 0) throw ArgumentError(std::string(who) + ": negative angular momentum " + j.str());
}

void require_projection(HalfInt j, HalfInt m, const char* who) {
  if (std::abs(m.twice()) > j.twice() || (j.twice() + m.twice()) % 2 != 0) {
    throw ArgumentError(std::string(who) + ": projection " + m.str() + " invalid for j = " + j.str());
  }
}

// Triangle coefficient factorials, in integer units.
void multiply_triangle(FactorialProduct& f, int a2, int b2, int c2) {
  f.multiply_factorial((a2 + b2 - c2) / 2);
  f.multiply_factorial((a2 - b2 + c2) / 2);
  f.multiply_factorial((-a2 + b2 + c2) / 2);
  f.multiply_factorial((a2 + b2 + c2) / 2 + 1, -1);
}

}  // namespace

HalfInt HalfInt::parse(std::string_view text) {
  auto parse_int = [&](std::string_view s) {
    int v = 0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end || s.empty()) {
      throw ArgumentError("HalfInt: cannot parse '" + std::string(text) + "'");
    }
    return v;
  };
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    if (parse_int(text.substr(slash + 1)) != 2) {
      throw ArgumentError("HalfInt: denominator must be 2 in '" + std::string(text) + "'");
    }
    const int numerator = parse_int(text.substr(0, slash));
    if (numerator % 2 == 0) throw ArgumentError("HalfInt: '" + std::string(text) + "' is not in lowest terms");
    return from_twice(numerator);
  }
  return HalfInt(parse_int(text));
}

std::string HalfInt::str() const {
  if (is_integer()) return std::to_string(integer());
  return std::to_string(twice_) + "/2";
}

bool satisfies_triangle(HalfInt a, HalfInt b, HalfInt c) {
  const int a2 = a.twice(), b2 = b.twice(), c2 = c.twice();
  if (a2 < 0 || b2 < 0 || c2 < 0) return false;
  if ((a2 + b2 + c2) % 2 != 0) return false;
  return c2 >= std::abs(a2 - b2) && c2 <= a2 + b2;
}

double wigner3j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt m1, HalfInt m2, HalfInt m3) {
  for (HalfInt j : {j1, j2, j3}) require_magnitude(j, "wigner3j");
  require_projection(j1, m1, "wigner3j");
  require_projection(j2, m2, "wigner3j");
  require_projection(j3, m3, "wigner3j");
  if (m1.twice() + m2.twice() + m3.twice() != 0) return 0.0;
  if (!satisfies_triangle(j1, j2, j3)) return 0.0;

  // Integer combinations used by the Racah formula.
  const int a = (j1.twice() + j2.twice() - j3.twice()) / 2;  // j1 + j2 - j3
  const int b = (j1.twice() - m1.twice()) / 2;               // j1 - m1
  const int c = (j2.twice() + m2.twice()) / 2;               // j2 + m2
  const int d = (j3.twice() - j2.twice() + m1.twice()) / 2;  // j3 - j2 + m1
  const int e = (j3.twice() - j1.twice() - m2.twice()) / 2;  // j3 - j1 - m2
  const int kmin = std::max({0, -d, -e});
  const int kmax = std::min({a, b, c});
  const int max_arg = (j1.twice() + j2.twice() + j3.twice()) / 2 + 1;

  FactorialProduct prefactor(max_arg);
  multiply_triangle(prefactor, j1.twice(), j2.twice(), j3.twice());
  for (auto [j, m] : {std::pair{j1, m1}, std::pair{j2, m2}, std::pair{j3, m3}}) {
    prefactor.multiply_factorial((j.twice() + m.twice()) / 2);
    prefactor.multiply_factorial((j.twice() - m.twice()) / 2);
  }

  std::vector<std::pair<int, FactorialProduct>> terms;
  for (int k = kmin; k <= kmax; ++k) {
    FactorialProduct t(max_arg);
    for (int n : {k, d + k, e + k, a - k, b - k, c - k}) t.multiply_factorial(n, -1);
    terms.emplace_back(parity_sign(k), std::move(t));
  }
  const int phase = parity_sign((j1.twice() - j2.twice() - m3.twice()) / 2);
  return phase * evaluate_racah(terms, prefactor);
}

double wigner6j(HalfInt j1, HalfInt j2, HalfInt j3, HalfInt j4, HalfInt j5, HalfInt j6) {
  for (HalfInt j : {j1, j2, j3, j4, j5, j6}) require_magnitude(j, "wigner6j");
  if (!satisfies_triangle(j1, j2, j3) || !satisfies_triangle(j1, j5, j6) || !satisfies_triangle(j4, j2, j6) ||
      !satisfies_triangle(j4, j5, j3)) {
    return 0.0;
  }
  const int a = j1.twice(), b = j2.twice(), c = j3.twice();
  const int d = j4.twice(), e = j5.twice(), f = j6.twice();
  const int abc = (a + b + c) / 2, aef = (a + e + f) / 2, dbf = (d + b + f) / 2, dec = (d + e + c) / 2;
  const int abde = (a + b + d + e) / 2, acdf = (a + c + d + f) / 2, bcef = (b + c + e + f) / 2;
  const int tmin = std::max({abc, aef, dbf, dec});
  const int tmax = std::min({abde, acdf, bcef});
  const int max_arg = tmax + 1;

  FactorialProduct prefactor(max_arg);
  multiply_triangle(prefactor, a, b, c);
  multiply_triangle(prefactor, a, e, f);
  multiply_triangle(prefactor, d, b, f);
  multiply_triangle(prefactor, d, e, c);

  std::vector<std::pair<int, FactorialProduct>> terms;
  for (int t = tmin; t <= tmax; ++t) {
    FactorialProduct term(max_arg);
    term.multiply_factorial(t + 1);
    for (int n : {t - abc, t - aef, t - dbf, t - dec, abde - t, acdf - t, bcef - t}) term.multiply_factorial(n, -1);
    terms.emplace_back(parity_sign(t), std::move(term));
  }
  return evaluate_racah(terms, prefactor);
}

std::complex<double> tensor_matrix_element(HalfInt k, HalfInt q, const BasisState& bra, const BasisState& ket,
                                           const ReducedMatrixElement& rme) {
  if (bra.manifold != rme.bra_manifold || ket.manifold != rme.ket_manifold) {
    throw ArgumentError("tensor_matrix_element: states <" + bra.manifold + "|, |" + ket.manifold +
                        "> do not match reduced element <" + rme.bra_manifold + "||C||" + rme.ket_manifold + ">");
  }
  if (bra.S != ket.S) throw ArgumentError("tensor_matrix_element: C^k cannot connect different spins");
  if (!k.is_integer() || !q.is_integer() || k.integer() != rme.rank) {
    throw ArgumentError("tensor_matrix_element: rank " + k.str() + " does not match reduced element rank " +
                        std::to_string(rme.rank));
  }
  if (std::abs(q.twice()) > k.twice()) return 0.0;
  const double w = wigner3j(bra.J, k, ket.J, -bra.M, q, ket.M);
  return parity_sign((bra.J - bra.M).integer()) * w * rme.value;
}

OperatorMatrixd tensor_block(int k, int q, HalfInt bra_j, HalfInt ket_j, double reduced) {
  const int rows = bra_j.multiplicity(), cols = ket_j.multiplicity();
  OperatorMatrixd block = OperatorMatrixd::Zero(rows, cols);
  if (std::abs(q) > k || reduced == 0.0 || !satisfies_triangle(bra_j, HalfInt(k), ket_j)) return block;
  for (int r = 0; r < rows; ++r) {
    const HalfInt mb = bra_j - HalfInt(r);
    const HalfInt mk = mb - HalfInt(q);
    if (std::abs(mk.twice()) > ket_j.twice()) continue;
    const int c = (ket_j - mk).integer();
    block(r, c) = parity_sign((bra_j - mb).integer()) * wigner3j(bra_j, HalfInt(k), ket_j, -mb, HalfInt(q), mk) * reduced;
  }
  return block;
}

double single_electron_rme(int l, int k) {
  if (l < 0 || k < 0) throw ArgumentError("single_electron_rme: negative l or k");
  return parity_sign(l) * (2 * l + 1) * wigner3j(l, k, l, 0, 0, 0);
}

double lsj_orbital_reduced(HalfInt L, HalfInt S, HalfInt J, HalfInt L_ket, HalfInt J_ket, int k,
                           double orbital_reduced) {
  const int phase = parity_sign((L + S + J_ket + HalfInt(k)).integer());
  const double norm = std::sqrt(double(J.multiplicity()) * J_ket.multiplicity());
  return phase * norm * wigner6j(L, J, S, J_ket, L_ket, HalfInt(k)) * orbital_reduced;
}

double lsj_spin_reduced(HalfInt L, HalfInt S, HalfInt J, HalfInt S_ket, HalfInt J_ket, int k, double spin_reduced) {
  const int phase = parity_sign((L + S + J + HalfInt(k)).integer());
  const double norm = std::sqrt(double(J.multiplicity()) * J_ket.multiplicity());
  return phase * norm * wigner6j(S, J, L, J_ket, S_ket, HalfInt(k)) * spin_reduced;
}

double angular_momentum_reduced(HalfInt j) {
  const double v = j.value();
  return std::sqrt(v * (v + 1) * (2 * v + 1));
}

double lande_g(HalfInt L, HalfInt S, HalfInt J) {
  if (!satisfies_triangle(L, S, J)) {
    throw ArgumentError("lande_g: J = " + J.str() + " not in the triangle of L = " + L.str() + ", S = " + S.str());
  }
  if (J.twice() == 0) return 0.0;
  const double j = J.value(), s = S.value(), l = L.value();
  return 1.0 + (j * (j + 1) + s * (s + 1) - l * (l + 1)) / (2 * j * (j + 1));
}

}  // namespace reion

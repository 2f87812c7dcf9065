#ifndef REION_ION_MODEL_HPP
#define REION_ION_MODEL_HPP

#include <array>
#include <complex>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "reion/angular_momentum.hpp"

namespace reion {

// Crystallographic axes; field and moment vectors are (a, b, c) = (x, y, z).
enum class Axis { a = 0, b = 1, c = 2 };

enum class MomentMode {
  lande,     // mu = -g_J mu_B J inside each manifold
  exact_ls,  // mu = -mu_B (L + 2S), with J-J' blocks inside a term
};

// One free-ion LSJ multiplet, reduced to its centroid energy.
struct Manifold {
  std::string label;
  HalfInt L;
  HalfInt S;
  HalfInt J;
  double centroid_cm = 0.0;

  int dimension() const { return J.multiplicity(); }
};

// Crystal-field coefficients B^k_q in cm^-1 (Wybourne normalisation).
class CrystalFieldParams {
 public:
  using Key = std::pair<int, int>;

  // Stores B^k_q; if the (k, -q) partner is absent it is filled from the
  // Hermiticity constraint B^k_-q = (-1)^q conj(B^k_q). Throws ArgumentError
  // on k outside {2, 4, 6}, |q| > k, a non-real B^k_0, or a partner that
  // contradicts the constraint.
  void set(int k, int q, std::complex<double> value);

  std::complex<double> at(int k, int q) const;
  const std::map<Key, std::complex<double>>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  // Re-checks the constraint on every stored pair.
  void validate(double tolerance = 1e-12) const;

 private:
  std::map<Key, std::complex<double>> entries_;
  std::map<Key, bool> explicit_;
};

struct IonSpec {
  std::vector<Manifold> manifolds;
  CrystalFieldParams cf;
  std::vector<ReducedMatrixElement> rmes;
  MomentMode moment_mode = MomentMode::lande;
  // Labels of the manifolds holding the Z1 and R1 doublets; empty means the
  // first and the last manifold.
  std::string ground_manifold;
  std::string excited_manifold;

  int dimension() const;
  // Row offset of each manifold in the shared basis.
  std::vector<int> offsets() const;
  std::vector<BasisState> basis() const;
  int manifold_index(const std::string& label) const;  // -1 if absent
  int ground_manifold_index() const;
  int excited_manifold_index() const;
  const ReducedMatrixElement* find_rme(const std::string& bra, const std::string& ket, int rank) const;
  bool has_any_rme(const std::string& bra, const std::string& ket) const;

  // Unique labels, valid LSJ triangles, centroid of the ground manifold zero,
  // valid CF entries.
  void validate() const;
};

// Eigenvectors are the columns of `states`; energies ascend and are shifted
// so that the lowest is zero.
struct EigenSystem {
  Eigen::VectorXd energies;
  OperatorMatrixd states;
  double ground_energy = 0.0;  // absolute GHz of the lowest eigenvalue
};

enum class Irrep { gamma1, gamma2, gamma3, gamma4 };

std::string to_string(Irrep irrep);

inline constexpr double kHermiticityTolerance = 1e-9;
inline constexpr double kKramersTolerance = 1e-6;  // GHz
inline constexpr double kAmbiguityTolerance = 1e-9;

OperatorMatrixd build_free_ion(const IonSpec& spec);
// Throws ConfigurationError naming the manifold pair when a coupled block
// lacks a reduced matrix element.
OperatorMatrixd build_crystal_field(const IonSpec& spec);
// mu_a, mu_b, mu_c in units of mu_B.
std::array<OperatorMatrixd, 3> moment_operators(const IonSpec& spec);
// -(B0 + B_MF) . mu in GHz for a total field in Tesla.
OperatorMatrixd build_zeeman(const IonSpec& spec, const Eigen::Vector3d& field);
OperatorMatrixd build_zeeman(const std::array<OperatorMatrixd, 3>& moments, const Eigen::Vector3d& field);

// Hermitian eigendecomposition. Each eigenvector is normalised with its
// largest-magnitude component real and positive. Throws ContractError on a
// non-Hermitian input.
EigenSystem diagonalize(const OperatorMatrixd& hamiltonian);

// Weight of a state on the M_J class containing +1/2 (the class closed
// under even-q crystal-field couplings, Gamma3).
double gamma3_weight(const Eigen::Ref<const Eigen::VectorXcd>& state, const std::vector<BasisState>& basis);

// Gamma3 when the +1/2 class dominates, Gamma4 otherwise. Throws
// AmbiguousIrrepError when both weights agree to 1e-9.
Irrep classify_irrep(const Eigen::Ref<const Eigen::VectorXcd>& state, const std::vector<BasisState>& basis);

// Rotates degenerate pairs (2i, 2i+1) to the basis that diagonalises the
// Gamma3 projector: Gamma3-like member first, largest component real positive.
void fix_doublet_bases(EigenSystem& es, const std::vector<BasisState>& basis,
                       double degeneracy_tolerance = kKramersTolerance);

struct GFactors {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  double along(Axis axis) const { return axis == Axis::a ? a : axis == Axis::b ? b : c; }
};

// Principal g along each axis for a Kramers doublet: the spread of the two
// eigenvalues of P mu_axis P. Throws ContractError if the pair is split by
// more than the Kramers tolerance.
GFactors doublet_g_factors(const EigenSystem& es, std::array<int, 2> doublet,
                           const std::array<OperatorMatrixd, 3>& moments);
GFactors doublet_g_factors(const EigenSystem& es, std::array<int, 2> doublet, const IonSpec& spec);

// Everything the spectroscopy layer needs from one single-ion solution.
struct IonLevels {
  EigenSystem eigen;
  std::array<int, 2> z1{0, 1};
  std::array<int, 2> r1{};
  std::vector<double> gamma3_weights;  // per eigenstate
};

// Caches the field-independent Hamiltonian and the moment operators of one
// ion species.
class IonModel {
 public:
  explicit IonModel(IonSpec spec);

  const IonSpec& spec() const { return spec_; }
  const std::vector<BasisState>& basis() const { return basis_; }
  const OperatorMatrixd& static_hamiltonian() const { return static_hamiltonian_; }
  const std::array<OperatorMatrixd, 3>& moments() const { return moments_; }

  OperatorMatrixd hamiltonian(const Eigen::Vector3d& field) const;
  // Diagonalises at the given total field and locates the Z1 and R1 doublets.
  IonLevels solve(const Eigen::Vector3d& field) const;
  // g-factors of the zero-field Z1 doublet.
  GFactors ground_g_factors() const;

 private:
  IonSpec spec_;
  std::vector<BasisState> basis_;
  OperatorMatrixd static_hamiltonian_;
  std::array<OperatorMatrixd, 3> moments_;
  int excited_offset_ = 0;
  int excited_dimension_ = 0;
};

struct SingleIonLine {
  double frequency = 0.0;  // GHz, E_final - E_initial
  int initial_state = 0;
  int final_state = 0;
  double initial_gamma3_weight = 0.0;
  double final_gamma3_weight = 0.0;
  // Dominant irreps; empty when the state is an even Gamma3/Gamma4 mixture.
  std::optional<Irrep> initial_irrep;
  std::optional<Irrep> final_irrep;
};

// All four Z1 -> R1 level pairs with their irrep content.
std::vector<SingleIonLine> single_ion_lines(const EigenSystem& es, const std::vector<BasisState>& basis,
                                            std::array<int, 2> ground_doublet, std::array<int, 2> excited_doublet);

}  // namespace reion

#endif  // REION_ION_MODEL_HPP

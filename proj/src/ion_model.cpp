#include "reion/ion_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <Eigen/Eigenvalues>

#include "reion/units.hpp"

namespace reion {

namespace {

using Complex = std::complex<double>;

void normalise_phase(Eigen::Ref<Eigen::VectorXcd> v) {
  Eigen::Index best = 0;
  double best_mag = -1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    // Ties resolved towards the lower index so the convention is deterministic.
    const double mag = std::abs(v(i));
    if (mag > best_mag * (1.0 + 1e-12) + 1e-300) {
      best_mag = mag;
      best = i;
    }
  }
  if (best_mag <= 0.0) return;
  v *= std::conj(v(best)) / best_mag;
  v(best) = Complex(std::abs(v(best)), 0.0);
}

// Reduced element <bra||C^k||ket> honouring the symmetry
// <j||C^k||j'> = (-1)^(j'-j) <j'||C^k||j> when only the reverse is stored.
std::optional<double> lookup_rme(const IonSpec& spec, int bra, int ket, int k) {
  const Manifold& mb = spec.manifolds[bra];
  const Manifold& mk = spec.manifolds[ket];
  if (const auto* r = spec.find_rme(mb.label, mk.label, k)) return r->value;
  if (const auto* r = spec.find_rme(mk.label, mb.label, k)) return parity_sign((mk.J - mb.J).integer()) * r->value;
  return std::nullopt;
}

}  // namespace

std::string to_string(Irrep irrep) {
  switch (irrep) {
    case Irrep::gamma1: return "Gamma1";
    case Irrep::gamma2: return "Gamma2";
    case Irrep::gamma3: return "Gamma3";
    case Irrep::gamma4: return "Gamma4";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// CrystalFieldParams

void CrystalFieldParams::set(int k, int q, std::complex<double> value) {
  if (k != 2 && k != 4 && k != 6) throw ArgumentError("crystal field rank must be 2, 4 or 6, got " + std::to_string(k));
  if (std::abs(q) > k) {
    throw ArgumentError("crystal field component |q| = " + std::to_string(std::abs(q)) + " exceeds k = " +
                        std::to_string(k));
  }
  if (q == 0 && std::abs(value.imag()) > 1e-12 * std::max(1.0, std::abs(value))) {
    throw ArgumentError("B^" + std::to_string(k) + "_0 must be real");
  }
  if (q == 0) value = Complex(value.real(), 0.0);
  const Key key{k, q};
  const Key partner{k, -q};
  const Complex implied = double(parity_sign(q)) * std::conj(value);
  if (q != 0 && explicit_.count(partner) != 0) {
    if (std::abs(entries_.at(partner) - implied) > 1e-9 * std::max(1.0, std::abs(value))) {
      throw ArgumentError("B^" + std::to_string(k) + "_" + std::to_string(q) +
                          " violates B^k_-q = (-1)^q conj(B^k_q) with its stored partner");
    }
  }
  entries_[key] = value;
  explicit_[key] = true;
  if (q != 0 && explicit_.count(partner) == 0) entries_[partner] = implied;
}

std::complex<double> CrystalFieldParams::at(int k, int q) const {
  const auto it = entries_.find({k, q});
  return it == entries_.end() ? Complex{} : it->second;
}

void CrystalFieldParams::validate(double tolerance) const {
  for (const auto& [key, value] : entries_) {
    const auto [k, q] = key;
    const Complex implied = double(parity_sign(q)) * std::conj(at(k, -q));
    if (std::abs(value - implied) > tolerance * std::max(1.0, std::abs(value))) {
      throw ArgumentError("crystal field parameters are not Hermitian at k = " + std::to_string(k) +
                          ", q = " + std::to_string(q));
    }
  }
}

// ---------------------------------------------------------------------------
// IonSpec

int IonSpec::dimension() const {
  int d = 0;
  for (const auto& m : manifolds) d += m.dimension();
  return d;
}

std::vector<int> IonSpec::offsets() const {
  std::vector<int> out;
  int d = 0;
  for (const auto& m : manifolds) {
    out.push_back(d);
    d += m.dimension();
  }
  return out;
}

std::vector<BasisState> IonSpec::basis() const {
  std::vector<BasisState> out;
  out.reserve(dimension());
  for (const auto& m : manifolds) {
    for (int i = 0; i < m.dimension(); ++i) out.push_back({m.label, m.L, m.S, m.J, m.J - HalfInt(i)});
  }
  return out;
}

int IonSpec::manifold_index(const std::string& label) const {
  for (std::size_t i = 0; i < manifolds.size(); ++i) {
    if (manifolds[i].label == label) return static_cast<int>(i);
  }
  return -1;
}

int IonSpec::ground_manifold_index() const {
  if (ground_manifold.empty()) return 0;
  const int i = manifold_index(ground_manifold);
  if (i < 0) throw ConfigurationError("ground manifold '" + ground_manifold + "' is not defined");
  return i;
}

int IonSpec::excited_manifold_index() const {
  if (excited_manifold.empty()) return static_cast<int>(manifolds.size()) - 1;
  const int i = manifold_index(excited_manifold);
  if (i < 0) throw ConfigurationError("excited manifold '" + excited_manifold + "' is not defined");
  return i;
}

const ReducedMatrixElement* IonSpec::find_rme(const std::string& bra, const std::string& ket, int rank) const {
  for (const auto& r : rmes) {
    if (r.bra_manifold == bra && r.ket_manifold == ket && r.rank == rank) return &r;
  }
  return nullptr;
}

bool IonSpec::has_any_rme(const std::string& bra, const std::string& ket) const {
  return std::any_of(rmes.begin(), rmes.end(), [&](const ReducedMatrixElement& r) {
    return (r.bra_manifold == bra && r.ket_manifold == ket) || (r.bra_manifold == ket && r.ket_manifold == bra);
  });
}

void IonSpec::validate() const {
  if (manifolds.empty()) throw ConfigurationError("ion spec defines no manifolds");
  std::set<std::string> labels;
  for (const auto& m : manifolds) {
    if (!labels.insert(m.label).second) throw ConfigurationError("duplicate manifold label '" + m.label + "'");
    if (m.L.twice() < 0 || m.S.twice() < 0 || m.J.twice() < 0 || !satisfies_triangle(m.L, m.S, m.J)) {
      throw ConfigurationError("manifold '" + m.label + "' has J outside the triangle of L and S");
    }
    if (m.centroid_cm < 0.0) throw ConfigurationError("manifold '" + m.label + "' has a negative centroid");
  }
  if (manifolds[ground_manifold_index()].centroid_cm != 0.0) {
    throw ConfigurationError("ground manifold centroid must be 0");
  }
  excited_manifold_index();
  for (const auto& r : rmes) {
    if (manifold_index(r.bra_manifold) < 0 || manifold_index(r.ket_manifold) < 0) {
      throw ConfigurationError("reduced matrix element references unknown manifold <" + r.bra_manifold + "||" +
                               r.ket_manifold + ">");
    }
  }
  cf.validate();
}

// ---------------------------------------------------------------------------
// Hamiltonian terms

OperatorMatrixd build_free_ion(const IonSpec& spec) {
  const int n = spec.dimension();
  OperatorMatrixd h = OperatorMatrixd::Zero(n, n);
  const auto offsets = spec.offsets();
  for (std::size_t i = 0; i < spec.manifolds.size(); ++i) {
    const double e = units::wavenumber_to_ghz(spec.manifolds[i].centroid_cm);
    for (int r = 0; r < spec.manifolds[i].dimension(); ++r) h(offsets[i] + r, offsets[i] + r) = e;
  }
  return h;
}

OperatorMatrixd build_crystal_field(const IonSpec& spec) {
  spec.cf.validate();
  const int n = spec.dimension();
  const auto offsets = spec.offsets();
  const int nm = static_cast<int>(spec.manifolds.size());
  OperatorMatrixd h = OperatorMatrixd::Zero(n, n);

  for (int bra = 0; bra < nm; ++bra) {
    for (int ket = bra; ket < nm; ++ket) {
      const Manifold& mb = spec.manifolds[bra];
      const Manifold& mk = spec.manifolds[ket];
      // Distinct manifolds are coupled only when the spec lists them.
      if (bra != ket && !spec.has_any_rme(mb.label, mk.label)) continue;
      if (mb.S != mk.S) continue;
      OperatorMatrixd block = OperatorMatrixd::Zero(mb.dimension(), mk.dimension());
      for (const auto& [key, value] : spec.cf.entries()) {
        const auto [k, q] = key;
        if (value == Complex{} || !satisfies_triangle(mb.J, HalfInt(k), mk.J)) continue;
        const auto rme = lookup_rme(spec, bra, ket, k);
        if (!rme) {
          throw ConfigurationError("missing reduced matrix element <" + mb.label + "||C^" + std::to_string(k) +
                                   "||" + mk.label + "> for a nonzero crystal-field block");
        }
        block += value * tensor_block(k, q, mb.J, mk.J, *rme);
      }
      block *= units::ghz_per_wavenumber;
      h.block(offsets[bra], offsets[ket], mb.dimension(), mk.dimension()) = block;
      if (bra != ket) h.block(offsets[ket], offsets[bra], mk.dimension(), mb.dimension()) = block.adjoint();
    }
  }
  return h;
}

std::array<OperatorMatrixd, 3> moment_operators(const IonSpec& spec) {
  const int n = spec.dimension();
  const auto offsets = spec.offsets();
  std::array<OperatorMatrixd, 3> mu;
  for (auto& m : mu) m = OperatorMatrixd::Zero(n, n);
  const Complex inv_sqrt2(1.0 / std::sqrt(2.0), 0.0);
  const Complex i_unit(0.0, 1.0);

  for (std::size_t bra = 0; bra < spec.manifolds.size(); ++bra) {
    for (std::size_t ket = 0; ket < spec.manifolds.size(); ++ket) {
      const Manifold& mb = spec.manifolds[bra];
      const Manifold& mk = spec.manifolds[ket];
      std::array<OperatorMatrixd, 3> block;  // a, b, c components of (J + S) or g_J J
      if (spec.moment_mode == MomentMode::lande) {
        if (bra != ket) continue;
        const auto jm = angular_momentum_matrices(mb.J);
        const double g = lande_g(mb.L, mb.S, mb.J);
        block = {jm.x * g, jm.y * g, jm.z * g};
      } else {
        // L + 2S = J + S. J is diagonal in J; S connects J and J' of one term.
        if (mb.L != mk.L || mb.S != mk.S) continue;
        if (std::abs(mb.J.twice() - mk.J.twice()) > 2) continue;
        const double s_reduced = lsj_spin_reduced(mb.L, mb.S, mb.J, mk.S, mk.J, 1, angular_momentum_reduced(mb.S));
        const OperatorMatrixd s_plus = tensor_block(1, 1, mb.J, mk.J, s_reduced);
        const OperatorMatrixd s_minus = tensor_block(1, -1, mb.J, mk.J, s_reduced);
        const OperatorMatrixd s_zero = tensor_block(1, 0, mb.J, mk.J, s_reduced);
        block = {(s_minus - s_plus) * inv_sqrt2, (s_minus + s_plus) * (i_unit * inv_sqrt2), s_zero};
        if (bra == ket) {
          const auto jm = angular_momentum_matrices(mb.J);
          block[0] += jm.x;
          block[1] += jm.y;
          block[2] += jm.z;
        }
      }
      for (int axis = 0; axis < 3; ++axis) {
        mu[axis].block(offsets[bra], offsets[ket], mb.dimension(), mk.dimension()) = -block[axis];
      }
    }
  }
  return mu;
}

OperatorMatrixd build_zeeman(const std::array<OperatorMatrixd, 3>& moments, const Eigen::Vector3d& field) {
  OperatorMatrixd h = OperatorMatrixd::Zero(moments[0].rows(), moments[0].cols());
  for (int axis = 0; axis < 3; ++axis) {
    if (field(axis) != 0.0) h -= (field(axis) * units::bohr_magneton_ghz_per_tesla) * moments[axis];
  }
  return h;
}

OperatorMatrixd build_zeeman(const IonSpec& spec, const Eigen::Vector3d& field) {
  return build_zeeman(moment_operators(spec), field);
}

// ---------------------------------------------------------------------------
// Diagonalisation and classification

EigenSystem diagonalize(const OperatorMatrixd& hamiltonian) {
  if (hamiltonian.rows() != hamiltonian.cols()) throw ContractError("diagonalize: matrix is not square");
  const double norm = hamiltonian.norm();
  if ((hamiltonian - hamiltonian.adjoint()).norm() > kHermiticityTolerance * std::max(norm, 1e-300)) {
    throw ContractError("diagonalize: matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<OperatorMatrixd> solver(hamiltonian);
  if (solver.info() != Eigen::Success) throw ContractError("diagonalize: eigensolver did not converge");

  EigenSystem es;
  es.states = solver.eigenvectors();
  if (hamiltonian.rows() == 0) return es;
  es.ground_energy = solver.eigenvalues()(0);
  es.energies = solver.eigenvalues().array() - es.ground_energy;
  for (Eigen::Index c = 0; c < es.states.cols(); ++c) normalise_phase(es.states.col(c));
  return es;
}

double gamma3_weight(const Eigen::Ref<const Eigen::VectorXcd>& state, const std::vector<BasisState>& basis) {
  if (state.size() != static_cast<Eigen::Index>(basis.size())) {
    throw ArgumentError("gamma3_weight: state and basis sizes differ");
  }
  double w3 = 0.0, total = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const double w = std::norm(state(static_cast<Eigen::Index>(i)));
    total += w;
    // +1/2 class: M - 1/2 is an even integer, i.e. 2M - 1 = 0 (mod 4).
    if (((basis[i].M.twice() - 1) % 4 + 4) % 4 == 0) w3 += w;
  }
  return total > 0.0 ? w3 / total : 0.0;
}

Irrep classify_irrep(const Eigen::Ref<const Eigen::VectorXcd>& state, const std::vector<BasisState>& basis) {
  const double w3 = gamma3_weight(state, basis);
  const double w4 = 1.0 - w3;
  if (std::abs(w3 - w4) <= kAmbiguityTolerance) {
    throw AmbiguousIrrepError("classify_irrep: state has equal Gamma3 and Gamma4 weight");
  }
  return w3 > w4 ? Irrep::gamma3 : Irrep::gamma4;
}

void fix_doublet_bases(EigenSystem& es, const std::vector<BasisState>& basis, double degeneracy_tolerance) {
  const Eigen::Index n = es.states.cols();
  Eigen::VectorXd projector(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    projector(i) = ((basis[i].M.twice() - 1) % 4 + 4) % 4 == 0 ? 1.0 : 0.0;
  }
  for (Eigen::Index i = 0; i + 1 < n; i += 2) {
    if (es.energies(i + 1) - es.energies(i) > degeneracy_tolerance) continue;
    OperatorMatrixd pair(n, 2);
    pair << es.states.col(i), es.states.col(i + 1);
    const Eigen::Matrix2cd weights = pair.adjoint() * projector.asDiagonal() * pair;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(weights);
    const auto& eval = solver.eigenvalues();
    if (std::abs(eval(1) - eval(0)) <= kAmbiguityTolerance) continue;
    const Eigen::Matrix2cd rot = solver.eigenvectors();
    es.states.col(i) = pair * rot.col(1);  // Gamma3-like first
    es.states.col(i + 1) = pair * rot.col(0);
    normalise_phase(es.states.col(i));
    normalise_phase(es.states.col(i + 1));
  }
}

GFactors doublet_g_factors(const EigenSystem& es, std::array<int, 2> doublet,
                           const std::array<OperatorMatrixd, 3>& moments) {
  const auto [i, j] = doublet;
  if (std::abs(es.energies(j) - es.energies(i)) > kKramersTolerance) {
    throw ContractError("doublet_g_factors: states " + std::to_string(i) + " and " + std::to_string(j) +
                        " are not degenerate");
  }
  OperatorMatrixd pair(es.states.rows(), 2);
  pair << es.states.col(i), es.states.col(j);
  std::array<double, 3> g{};
  for (int axis = 0; axis < 3; ++axis) {
    const Eigen::Matrix2cd m = pair.adjoint() * moments[axis] * pair;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(m, Eigen::EigenvaluesOnly);
    g[axis] = solver.eigenvalues()(1) - solver.eigenvalues()(0);
  }
  return {g[0], g[1], g[2]};
}

GFactors doublet_g_factors(const EigenSystem& es, std::array<int, 2> doublet, const IonSpec& spec) {
  return doublet_g_factors(es, doublet, moment_operators(spec));
}

// ---------------------------------------------------------------------------
// IonModel

IonModel::IonModel(IonSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  basis_ = spec_.basis();
  static_hamiltonian_ = build_free_ion(spec_) + build_crystal_field(spec_);
  moments_ = moment_operators(spec_);
  const int excited = spec_.excited_manifold_index();
  excited_offset_ = spec_.offsets()[excited];
  excited_dimension_ = spec_.manifolds[excited].dimension();
  if (excited == spec_.ground_manifold_index() || spec_.dimension() % 2 != 0) {
    throw ConfigurationError("ion spec needs distinct ground and excited Kramers manifolds");
  }
}

OperatorMatrixd IonModel::hamiltonian(const Eigen::Vector3d& field) const {
  return static_hamiltonian_ + build_zeeman(moments_, field);
}

IonLevels IonModel::solve(const Eigen::Vector3d& field) const {
  IonLevels levels;
  levels.eigen = diagonalize(hamiltonian(field));
  fix_doublet_bases(levels.eigen, basis_);
  const auto& states = levels.eigen.states;
  const Eigen::Index n = states.cols();
  levels.gamma3_weights.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) levels.gamma3_weights[i] = gamma3_weight(states.col(i), basis_);

  int first_excited = -1;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (states.col(i).segment(excited_offset_, excited_dimension_).squaredNorm() > 0.5) {
      first_excited = static_cast<int>(i);
      break;
    }
  }
  if (first_excited < 0 || first_excited + 1 >= n ||
      states.col(first_excited + 1).segment(excited_offset_, excited_dimension_).squaredNorm() <= 0.5) {
    throw ContractError("IonModel::solve: could not locate the lowest excited doublet");
  }
  levels.r1 = {first_excited, first_excited + 1};
  return levels;
}

GFactors IonModel::ground_g_factors() const {
  const IonLevels zero = solve(Eigen::Vector3d::Zero());
  return doublet_g_factors(zero.eigen, zero.z1, moments_);
}

std::vector<SingleIonLine> single_ion_lines(const EigenSystem& es, const std::vector<BasisState>& basis,
                                            std::array<int, 2> ground_doublet, std::array<int, 2> excited_doublet) {
  auto label = [&](int i) -> std::optional<Irrep> {
    try {
      return classify_irrep(es.states.col(i), basis);
    } catch (const AmbiguousIrrepError&) {
      return std::nullopt;
    }
  };
  std::vector<SingleIonLine> lines;
  for (int g : ground_doublet) {
    for (int e : excited_doublet) {
      SingleIonLine line;
      line.frequency = es.energies(e) - es.energies(g);
      line.initial_state = g;
      line.final_state = e;
      line.initial_gamma3_weight = gamma3_weight(es.states.col(g), basis);
      line.final_gamma3_weight = gamma3_weight(es.states.col(e), basis);
      line.initial_irrep = label(g);
      line.final_irrep = label(e);
      lines.push_back(line);
    }
  }
  return lines;
}

}  // namespace reion

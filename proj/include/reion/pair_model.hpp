#ifndef REION_PAIR_MODEL_HPP
#define REION_PAIR_MODEL_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "reion/ion_model.hpp"
#include "reion/magnetic_lattice.hpp"
#include "reion/selection_rules.hpp"

namespace reion {

using Matrix4cd = Eigen::Matrix4cd;
using Matrix16cd = Eigen::Matrix<std::complex<double>, 16, 16>;

// Local state order of a truncated ion.
enum LocalState : int { kZ1Lower = 0, kZ1Upper = 1, kR1Lower = 2, kR1Upper = 3 };

// One ion truncated to its Z1 and R1 doublets.
struct EffectiveIon {
  Eigen::Vector4d energies = Eigen::Vector4d::Zero();  // GHz
  std::array<Matrix4cd, 3> moments{Matrix4cd::Zero(), Matrix4cd::Zero(), Matrix4cd::Zero()};  // mu_B
  std::array<double, 4> gamma3_weights{};
  std::array<std::optional<Irrep>, 4> irreps{};
};

// Column basis [Z1 lower, Z1 upper, R1 lower, R1 upper] of a single-ion
// solution; the rank-4 projector is V V^dagger.
OperatorMatrixd truncation_basis(const IonLevels& levels);

// P mu P expressed in the truncated eigenbasis. Throws ContractError when the
// doublets are not consecutive energy pairs.
EffectiveIon project_ion(const IonLevels& levels, const IonModel& model);

enum class ProductBlock { gg, ge, eg, ee };

std::string to_string(ProductBlock block);

struct PairSystem {
  Matrix16cd hamiltonian = Matrix16cd::Zero();
  EigenSystem eigen;
  // Product basis index = 4 * (ion-1 local state) + (ion-2 local state).
  std::array<ProductBlock, 16> block_labels{};
  std::array<int, 16> dominant_product{};  // per eigenstate
  std::array<double, 16> dominant_weight{};
  EffectiveIon ion1;
  EffectiveIon ion2;
};

// H = H1 x 1 + 1 x H2 - 2 sum_axis J_axis (mu1_axis x mu2_axis). The pair
// mean fields are already inside ion1 and ion2.
PairSystem build_pair(const EffectiveIon& ion1, const EffectiveIon& ion2, const ExchangeTensor& coupling);

// Single-photon excitation of one member Z1 -> R1 together with a flip of
// its partner inside Z1.
struct PairLine {
  double frequency = 0.0;  // GHz above the pair ground state
  int excited_member = 1;  // member that goes to R1
  int final_state = 0;     // pair eigenstate index
  Irrep initial_irrep = Irrep::gamma1;
  Irrep final_irrep = Irrep::gamma1;
  bool pi_allowed = false;
  bool sigma_allowed = false;
  bool mixed = false;      // a factor state breaks the selection rules
  bool ambiguous = false;  // dominant product weight below 1/2
};

// Two-Nd lines from the pair ground state. A factor state counts as mixed
// when its minority irrep weight exceeds mixing_threshold; mixed lines allow
// both polarisations.
std::vector<PairLine> two_nd_lines(const PairSystem& pair, double mixing_threshold);

}  // namespace reion

#endif  // REION_PAIR_MODEL_HPP

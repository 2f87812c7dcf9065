#include "reion/pair_model.hpp"

#include <algorithm>
#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

namespace reion {

namespace {

bool is_mixed(double gamma3_weight, double threshold) {
  return std::min(gamma3_weight, 1.0 - gamma3_weight) > threshold;
}

}  // namespace

std::string to_string(ProductBlock block) {
  switch (block) {
    case ProductBlock::gg: return "gg";
    case ProductBlock::ge: return "ge";
    case ProductBlock::eg: return "eg";
    case ProductBlock::ee: return "ee";
  }
  return "?";
}

OperatorMatrixd truncation_basis(const IonLevels& levels) {
  const auto& states = levels.eigen.states;
  OperatorMatrixd v(states.rows(), 4);
  v << states.col(levels.z1[0]), states.col(levels.z1[1]), states.col(levels.r1[0]), states.col(levels.r1[1]);
  return v;
}

EffectiveIon project_ion(const IonLevels& levels, const IonModel& model) {
  if (levels.z1[1] != levels.z1[0] + 1 || levels.r1[1] != levels.r1[0] + 1 || levels.r1[0] <= levels.z1[1]) {
    throw ContractError("project_ion: Z1 and R1 must be consecutive, energy-ordered doublets");
  }
  const OperatorMatrixd v = truncation_basis(levels);
  EffectiveIon ion;
  const std::array<int, 4> index{levels.z1[0], levels.z1[1], levels.r1[0], levels.r1[1]};
  for (int i = 0; i < 4; ++i) {
    ion.energies(i) = levels.eigen.energies(index[i]);
    ion.gamma3_weights[i] = levels.gamma3_weights[index[i]];
    try {
      ion.irreps[i] = classify_irrep(v.col(i), model.basis());
    } catch (const AmbiguousIrrepError&) {
      ion.irreps[i] = std::nullopt;
    }
  }
  for (int axis = 0; axis < 3; ++axis) ion.moments[axis] = v.adjoint() * model.moments()[axis] * v;
  return ion;
}

PairSystem build_pair(const EffectiveIon& ion1, const EffectiveIon& ion2, const ExchangeTensor& coupling) {
  const Matrix4cd identity = Matrix4cd::Identity();
  const Matrix4cd h1 = ion1.energies.cast<std::complex<double>>().asDiagonal();
  const Matrix4cd h2 = ion2.energies.cast<std::complex<double>>().asDiagonal();

  PairSystem pair;
  pair.ion1 = ion1;
  pair.ion2 = ion2;
  pair.hamiltonian = Eigen::kroneckerProduct(h1, identity) + Eigen::kroneckerProduct(identity, h2);
  for (int axis = 0; axis < 3; ++axis) {
    const double j = coupling.matrix(axis, axis);
    if (j == 0.0) continue;
    pair.hamiltonian -= (2.0 * j) * Matrix16cd(Eigen::kroneckerProduct(ion1.moments[axis], ion2.moments[axis]));
  }
  pair.eigen = diagonalize(OperatorMatrixd(pair.hamiltonian));

  for (int p = 0; p < 16; ++p) {
    const bool first_excited = p / 4 >= kR1Lower;
    const bool second_excited = p % 4 >= kR1Lower;
    pair.block_labels[p] = first_excited ? (second_excited ? ProductBlock::ee : ProductBlock::eg)
                                         : (second_excited ? ProductBlock::ge : ProductBlock::gg);
  }
  for (int s = 0; s < 16; ++s) {
    Eigen::Index best = 0;
    pair.dominant_weight[s] = pair.eigen.states.col(s).cwiseAbs2().maxCoeff(&best);
    pair.dominant_product[s] = static_cast<int>(best);
  }
  return pair;
}

std::vector<PairLine> two_nd_lines(const PairSystem& pair, double mixing_threshold) {
  const int ground_product = pair.dominant_product[0];
  const int ground1 = ground_product / 4;
  const int ground2 = ground_product % 4;
  const bool ground_ambiguous = pair.dominant_weight[0] < 0.5 || ground1 >= kR1Lower || ground2 >= kR1Lower;

  auto irrep_or_default = [](const std::optional<Irrep>& irrep, double w3) {
    return irrep.value_or(w3 >= 0.5 ? Irrep::gamma3 : Irrep::gamma4);
  };
  auto pair_irrep = [&](int s1, int s2) {
    return product_irrep(irrep_or_default(pair.ion1.irreps[s1], pair.ion1.gamma3_weights[s1]),
                         irrep_or_default(pair.ion2.irreps[s2], pair.ion2.gamma3_weights[s2]));
  };
  auto state_mixed = [&](int s1, int s2) {
    return !pair.ion1.irreps[s1] || !pair.ion2.irreps[s2] ||
           is_mixed(pair.ion1.gamma3_weights[s1], mixing_threshold) ||
           is_mixed(pair.ion2.gamma3_weights[s2], mixing_threshold);
  };

  std::vector<PairLine> lines;
  for (int member = 1; member <= 2; ++member) {
    for (int excited : {kR1Lower, kR1Upper}) {
      // The partner leaves its ground level for the other Z1 level.
      const int s1 = member == 1 ? excited : kZ1Upper - ground1;
      const int s2 = member == 1 ? kZ1Upper - ground2 : excited;
      const int target = 4 * s1 + s2;

      Eigen::Index best = 0;
      const double weight = pair.eigen.states.row(target).cwiseAbs2().maxCoeff(&best);

      PairLine line;
      line.excited_member = member;
      line.final_state = static_cast<int>(best);
      line.frequency = pair.eigen.energies(best) - pair.eigen.energies(0);
      line.initial_irrep = pair_irrep(ground1, ground2);
      line.final_irrep = pair_irrep(s1, s2);
      line.mixed = state_mixed(ground1, ground2) || state_mixed(s1, s2);
      line.ambiguous = ground_ambiguous || weight < 0.5 || pair.dominant_product[best] != target;
      if (line.mixed) {
        line.pi_allowed = line.sigma_allowed = true;
      } else {
        const Polarisation p = selection_rule(line.initial_irrep, line.final_irrep);
        line.pi_allowed = p == Polarisation::pi;
        line.sigma_allowed = p == Polarisation::sigma;
      }
      lines.push_back(line);
    }
  }
  return lines;
}

}  // namespace reion

#ifndef REION_MAGNETIC_LATTICE_HPP
#define REION_MAGNETIC_LATTICE_HPP

#include <array>
#include <string>

#include <Eigen/Dense>

#include "reion/ion_model.hpp"

namespace reion {

// Nearest-neighbour exchange of the effective spin-1/2 lattice, E/k_B in
// Kelvin. "par" bonds join out-of-plane neighbours, "perp" bonds in-plane
// neighbours; primed constants are the transverse (xx, yy) parts.
struct ExchangeConstants {
  double j_par = 0.07;
  double j_perp = -0.65;
  double j_par_p = -0.1;
  double j_perp_p = -0.1;

  bool operator==(const ExchangeConstants&) const = default;
};

enum class Phase { afm, intermediate, pm };
enum class FieldAxis { c, b };
enum class PairKind { in_plane, out_of_plane };

std::string to_string(Phase phase);
std::string to_string(FieldAxis axis);
std::string to_string(PairKind kind);

inline Eigen::Vector3d axis_vector(FieldAxis axis) {
  return axis == FieldAxis::c ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitY();
}

// Diagonal coupling in the crystallographic frame; E = mu1 . J . mu2 in GHz
// for moments in mu_B.
struct ExchangeTensor {
  Eigen::Matrix3d matrix = Eigen::Matrix3d::Zero();
};

// Saturated 0 K moments (mu_B) of the two sublattices.
struct SublatticeConfig {
  Phase phase = Phase::afm;
  FieldAxis field_axis = FieldAxis::c;
  std::array<Eigen::Vector3d, 2> moments{Eigen::Vector3d::Zero(), Eigen::Vector3d::Zero()};
};

// Mean field on a single ion with the field along c:
// z (2 J_par -/+ 4 J_perp) / (mu_B g_c), minus sign in the AFM phase, with
// sublattice 2 reversed in the AFM phase. Tesla.
Eigen::Vector3d mean_field_single(const ExchangeConstants& xc, Phase phase, int sublattice, double g_c);

// Mean field on one member of a coupled pair, counting only the neighbours
// outside the pair. In-plane: z (2 J_par -/+ 3 J_perp) / (mu_B g_c) with the
// members opposite in the AFM phase. Out-of-plane: z (J_par -/+ 4 J_perp) /
// (mu_B g_c), equal on both members; `host_sublattice` picks which
// sublattice the out-of-plane pair lives on.
Eigen::Vector3d mean_field_pair_member(const ExchangeConstants& xc, PairKind kind, Phase phase, int member,
                                       double g_c, int host_sublattice = 1);

// Paramagnetic phase with the field along b, pair members:
// y 5 J'_perp / (g_b mu_B), equal on both members.
Eigen::Vector3d mean_field_b_axis_pm(const ExchangeConstants& xc, double g_b);

// Same phase, single ion with all six neighbours ordered along b:
// y (4 J'_perp + 2 J'_par) / (g_b mu_B).
Eigen::Vector3d mean_field_b_axis_pm_single(const ExchangeConstants& xc, double g_b);

// diag(J'/g_a^2, J'/g_b^2, J/g_c^2) / mu_B^2 converted to GHz / mu_B^2.
ExchangeTensor exchange_tensor(const ExchangeConstants& xc, PairKind kind, const GFactors& g);

// Field (Tesla) contributed by one bond: 2 J . <mu_neighbour>.
Eigen::Vector3d bond_mean_field(const ExchangeTensor& tensor, const Eigen::Vector3d& neighbour_moment);

// AFM: +/-(g_c/2) z on the c_z structure (also returned for the AFM phase
// with the field along b). PM: both sublattices (g/2) along the field.
SublatticeConfig sublattice_moments(Phase phase, FieldAxis axis, const GFactors& g);

// Classical energy per ion (Kelvin) of the spin-1/2 Ising part of the
// lattice Hamiltonian on the 4-site cell {(A,0), (B,0), (A,1), (B,1)}:
// layer index 0/1 along c, in-plane sublattice A/B. Each site has four
// in-plane neighbours of the other in-plane sublattice and two out-of-plane
// neighbours of its own type in the other layer. spins are +1 or -1.
double ising_energy_per_ion(const ExchangeConstants& xc, const std::array<int, 4>& spins);

}  // namespace reion

#endif  // REION_MAGNETIC_LATTICE_HPP

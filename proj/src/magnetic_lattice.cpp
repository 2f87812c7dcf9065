#include "reion/magnetic_lattice.hpp"

#include "reion/units.hpp"

namespace reion {

namespace {

void require_modeled(Phase phase, const char* who) {
  if (phase == Phase::intermediate) {
    throw UnmodeledPhaseError(std::string(who) + ": the intermediate phase has no mean-field model");
  }
}

void require_positive(double g, const char* who) {
  if (!(g > 0.0)) throw ConfigurationError(std::string(who) + ": g-factor must be positive");
}

void require_index(int i, const char* what) {
  if (i != 1 && i != 2) throw ArgumentError(std::string(what) + " must be 1 or 2");
}

}  // namespace

std::string to_string(Phase phase) {
  switch (phase) {
    case Phase::afm: return "afm";
    case Phase::intermediate: return "intermediate";
    case Phase::pm: return "pm";
  }
  return "?";
}

std::string to_string(FieldAxis axis) { return axis == FieldAxis::c ? "c" : "b"; }

std::string to_string(PairKind kind) { return kind == PairKind::in_plane ? "in_plane" : "out_of_plane"; }

Eigen::Vector3d mean_field_single(const ExchangeConstants& xc, Phase phase, int sublattice, double g_c) {
  require_modeled(phase, "mean_field_single");
  require_index(sublattice, "sublattice");
  require_positive(g_c, "mean_field_single");
  const double perp_sign = phase == Phase::afm ? -1.0 : 1.0;
  double kelvin = 2.0 * xc.j_par + perp_sign * 4.0 * xc.j_perp;
  if (phase == Phase::afm && sublattice == 2) kelvin = -kelvin;
  return Eigen::Vector3d::UnitZ() * (kelvin * units::tesla_per_kelvin / g_c);
}

Eigen::Vector3d mean_field_pair_member(const ExchangeConstants& xc, PairKind kind, Phase phase, int member,
                                       double g_c, int host_sublattice) {
  require_modeled(phase, "mean_field_pair_member");
  require_index(member, "pair member");
  require_index(host_sublattice, "host sublattice");
  require_positive(g_c, "mean_field_pair_member");
  const double perp_sign = phase == Phase::afm ? -1.0 : 1.0;
  double kelvin = 0.0;
  if (kind == PairKind::in_plane) {
    kelvin = 2.0 * xc.j_par + perp_sign * 3.0 * xc.j_perp;
    // Members sit on opposite sublattices.
    if (phase == Phase::afm && member == 2) kelvin = -kelvin;
  } else {
    kelvin = xc.j_par + perp_sign * 4.0 * xc.j_perp;
    if (phase == Phase::afm && host_sublattice == 2) kelvin = -kelvin;
  }
  return Eigen::Vector3d::UnitZ() * (kelvin * units::tesla_per_kelvin / g_c);
}

Eigen::Vector3d mean_field_b_axis_pm(const ExchangeConstants& xc, double g_b) {
  require_positive(g_b, "mean_field_b_axis_pm");
  return Eigen::Vector3d::UnitY() * (5.0 * xc.j_perp_p * units::tesla_per_kelvin / g_b);
}

Eigen::Vector3d mean_field_b_axis_pm_single(const ExchangeConstants& xc, double g_b) {
  require_positive(g_b, "mean_field_b_axis_pm_single");
  return Eigen::Vector3d::UnitY() * ((4.0 * xc.j_perp_p + 2.0 * xc.j_par_p) * units::tesla_per_kelvin / g_b);
}

ExchangeTensor exchange_tensor(const ExchangeConstants& xc, PairKind kind, const GFactors& g) {
  require_positive(g.a, "exchange_tensor (g_a)");
  require_positive(g.b, "exchange_tensor (g_b)");
  require_positive(g.c, "exchange_tensor (g_c)");
  const double longitudinal = kind == PairKind::in_plane ? xc.j_perp : xc.j_par;
  const double transverse = kind == PairKind::in_plane ? xc.j_perp_p : xc.j_par_p;
  ExchangeTensor t;
  t.matrix.diagonal() << units::kelvin_to_ghz(transverse) / (g.a * g.a),
      units::kelvin_to_ghz(transverse) / (g.b * g.b), units::kelvin_to_ghz(longitudinal) / (g.c * g.c);
  return t;
}

Eigen::Vector3d bond_mean_field(const ExchangeTensor& tensor, const Eigen::Vector3d& neighbour_moment) {
  return 2.0 * (tensor.matrix * neighbour_moment) / units::bohr_magneton_ghz_per_tesla;
}

SublatticeConfig sublattice_moments(Phase phase, FieldAxis axis, const GFactors& g) {
  require_modeled(phase, "sublattice_moments");
  SublatticeConfig config;
  config.phase = phase;
  config.field_axis = axis;
  if (phase == Phase::afm) {
    config.moments[0] = Eigen::Vector3d::UnitZ() * (g.c / 2.0);
    config.moments[1] = -config.moments[0];
  } else {
    const Eigen::Vector3d m = axis_vector(axis) * (g.along(axis == FieldAxis::c ? Axis::c : Axis::b) / 2.0);
    config.moments = {m, m};
  }
  return config;
}

double ising_energy_per_ion(const ExchangeConstants& xc, const std::array<int, 4>& spins) {
  // Site index = 2 * layer + in-plane sublattice.
  double total = 0.0;
  for (int layer = 0; layer < 2; ++layer) {
    for (int sub = 0; sub < 2; ++sub) {
      const double s = 0.5 * spins[2 * layer + sub];
      const double in_plane = 0.5 * spins[2 * layer + (1 - sub)];
      const double out_of_plane = 0.5 * spins[2 * (1 - layer) + sub];
      // Half of each site's bond energy, so every bond is counted once.
      total += 0.5 * (-2.0) * (4.0 * xc.j_perp * s * in_plane + 2.0 * xc.j_par * s * out_of_plane);
    }
  }
  return total / 4.0;
}

}  // namespace reion

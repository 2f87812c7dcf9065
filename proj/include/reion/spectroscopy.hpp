#ifndef REION_SPECTROSCOPY_HPP
#define REION_SPECTROSCOPY_HPP

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "reion/ion_model.hpp"
#include "reion/magnetic_lattice.hpp"
#include "reion/pair_model.hpp"
#include "reion/selection_rules.hpp"

namespace reion {

enum class LineClass { main, two_nd, satellite, hot_band };

std::string to_string(LineClass c);

// Sublattice 0 means the line is shared by both sublattices.
inline constexpr int kBothSublattices = 0;

struct SweepConfig {
  FieldAxis field_axis = FieldAxis::c;
  std::vector<double> field_values;             // Tesla, ascending
  std::vector<double> boundaries_c{1.1, 2.3};   // Tesla
  std::vector<double> boundaries_b{1.72};       // Tesla
  std::vector<Polarisation> polarisations{Polarisation::pi, Polarisation::sigma};
  std::vector<double> satellite_offsets{250.0};  // GHz
  double linewidth = 1.0;                        // GHz, FWHM
  bool include_main = true;
  bool include_two_nd = true;
  bool include_satellite = true;
  bool include_hot_band = true;
  // Hot bands are emitted for B || b, sigma only, unless this is set.
  bool hot_band_everywhere = false;
  // A state whose minority Gamma3/Gamma4 weight exceeds this breaks the
  // selection rules: both polarisations are then allowed.
  double mixing_threshold = 0.25;

  const std::vector<double>& boundaries() const { return field_axis == FieldAxis::c ? boundaries_c : boundaries_b; }
  // Throws ConfigurationError.
  void validate() const;

  bool operator==(const SweepConfig&) const = default;
};

struct TransitionLine {
  double frequency = 0.0;  // GHz relative to the zero-field pi main line
  Polarisation polarisation = Polarisation::pi;
  LineClass line_class = LineClass::main;
  int sublattice = kBothSublattices;
  std::optional<PairKind> pair_kind;
  bool allowed = false;
  bool approx_flag = false;

  // State labels behind the polarisation decision. Pair lines carry Gamma1/2.
  Irrep initial_irrep = Irrep::gamma1;
  Irrep final_irrep = Irrep::gamma1;
  bool mixed = false;
};

// True when the allowed flag agrees with selection_rule on the line's state
// labels; mixed lines must be allowed in every polarisation.
bool consistent_with_selection_rules(const TransitionLine& line);

// Everything field-independent: the single-ion model, exchange, zero-field
// g-factors and the frequency reference.
struct SpectroscopyModel {
  SpectroscopyModel(IonModel ion, ExchangeConstants exchange);

  IonModel ion;
  ExchangeConstants exchange;
  GFactors g;                // zero-field Z1
  double reference = 0.0;    // absolute GHz of the zero-field pi main line
  double moment_bound = 0.0; // largest |mu| eigenvalue over the three axes, mu_B
};

// |B| lookup against ascending boundaries: c has [AFM | intermediate | PM],
// b has [AFM | PM].
Phase phase_of(double field, FieldAxis axis, const std::vector<double>& boundaries);

struct FieldPoint {
  double field = 0.0;  // Tesla
  Phase phase = Phase::afm;
  bool unmodeled = false;
  std::vector<TransitionLine> lines;  // sorted by frequency
};

// A single-ion site and the total field (applied + mean field, Tesla) it
// sees. AFM: one site per sublattice; PM: one shared site.
struct Site {
  int sublattice = kBothSublattices;
  Eigen::Vector3d field = Eigen::Vector3d::Zero();
};

// Throws UnmodeledPhaseError for the intermediate phase.
std::vector<Site> single_ion_sites(double field, Phase phase, FieldAxis axis, const SpectroscopyModel& model);

// Lines at one applied field. The intermediate phase gives an empty,
// unmodeled point.
FieldPoint line_list(double field, const SweepConfig& cfg, const SpectroscopyModel& model);

struct SweepTable {
  std::vector<FieldPoint> points;
  std::vector<std::string> continuity_violations;
};

// Evaluates field points in parallel; the table is in field order.
SweepTable sweep(const SweepConfig& cfg, const SpectroscopyModel& model, unsigned threads = 0);

// Single-ion eigenvalues (GHz above each site's ground state) per field.
struct LevelPoint {
  double field = 0.0;
  Phase phase = Phase::afm;
  bool unmodeled = false;
  std::vector<std::pair<int, Eigen::VectorXd>> sites;  // (sublattice, energies)
};

std::vector<LevelPoint> level_sweep(const SweepConfig& cfg, const SpectroscopyModel& model);

struct SpectrumMap {
  std::vector<double> fields;       // Tesla
  std::vector<double> frequencies;  // GHz
  Eigen::MatrixXd intensity;        // rows: field, columns: frequency
};

struct RenderGrid {
  double min_frequency = -150.0;
  double max_frequency = 450.0;
  double step = 0.25;

  bool operator==(const RenderGrid&) const = default;
};

// Unit-area Lorentzian, FWHM = linewidth, cut at 6 linewidths and rescaled
// so the truncated profile still has unit area.
double lorentzian(double detuning, double linewidth);

// Sum of profiles over allowed lines of the requested polarisations;
// approx-flagged lines at half weight.
SpectrumMap render(const SweepTable& table, const SweepConfig& cfg, const RenderGrid& grid = {});

}  // namespace reion

#endif  // REION_SPECTROSCOPY_HPP

#include "reion/spectroscopy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>

#include "reion/units.hpp"

namespace reion {

namespace {

constexpr double kMergeTolerance = 1e-6;  // GHz

bool minority_exceeds(double gamma3_weight, double threshold) {
  return std::min(gamma3_weight, 1.0 - gamma3_weight) > threshold;
}

Irrep dominant(const std::optional<Irrep>& irrep, double gamma3_weight) {
  return irrep.value_or(gamma3_weight >= 0.5 ? Irrep::gamma3 : Irrep::gamma4);
}

void require_ascending(const std::vector<double>& values, const char* what) {
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) throw ConfigurationError(std::string(what) + " must be strictly ascending");
  }
}

// Transitions out of the Z1 level `from` (0 lower, 1 upper) of one ion.
std::vector<TransitionLine> single_ion_records(const IonLevels& levels, const IonModel& ion, int from,
                                               LineClass line_class, int sublattice, const SweepConfig& cfg,
                                               double reference) {
  std::vector<TransitionLine> out;
  for (const SingleIonLine& l : single_ion_lines(levels.eigen, ion.basis(), levels.z1, levels.r1)) {
    if (l.initial_state != levels.z1[from]) continue;
    const bool mixed = !l.initial_irrep || !l.final_irrep ||
                       minority_exceeds(l.initial_gamma3_weight, cfg.mixing_threshold) ||
                       minority_exceeds(l.final_gamma3_weight, cfg.mixing_threshold);
    const Irrep initial = dominant(l.initial_irrep, l.initial_gamma3_weight);
    const Irrep final_irrep = dominant(l.final_irrep, l.final_gamma3_weight);
    for (Polarisation p : cfg.polarisations) {
      TransitionLine t;
      t.frequency = l.frequency - reference;
      t.polarisation = p;
      t.line_class = line_class;
      t.sublattice = sublattice;
      t.initial_irrep = initial;
      t.final_irrep = final_irrep;
      t.mixed = mixed;
      t.allowed = mixed || selection_rule(initial, final_irrep) == p;
      out.push_back(t);
    }
  }
  return out;
}

std::vector<TransitionLine> pair_records(const PairSystem& pair, PairKind kind, const std::array<int, 2>& member_sublattice,
                                         const SweepConfig& cfg, double reference) {
  std::vector<TransitionLine> out;
  for (const PairLine& l : two_nd_lines(pair, cfg.mixing_threshold)) {
    for (Polarisation p : cfg.polarisations) {
      TransitionLine t;
      t.frequency = l.frequency - reference;
      t.polarisation = p;
      t.line_class = LineClass::two_nd;
      t.sublattice = member_sublattice[l.excited_member - 1];
      t.pair_kind = kind;
      t.initial_irrep = l.initial_irrep;
      t.final_irrep = l.final_irrep;
      t.mixed = l.mixed;
      t.allowed = p == Polarisation::pi ? l.pi_allowed : l.sigma_allowed;
      // The mirror-plane argument behind the pair labels is weaker for
      // out-of-plane pairs.
      t.approx_flag = l.ambiguous || kind == PairKind::out_of_plane;
      out.push_back(t);
    }
  }
  return out;
}

bool same_kind(const TransitionLine& a, const TransitionLine& b) {
  return a.line_class == b.line_class && a.polarisation == b.polarisation && a.pair_kind == b.pair_kind &&
         a.allowed == b.allowed && a.approx_flag == b.approx_flag && a.mixed == b.mixed;
}

// Coincident copies of one line collapse to a single record: a sublattice-1
// and a sublattice-2 copy become "both", same-label copies (the two members
// of an equivalent pair) are dropped.
std::vector<TransitionLine> merge_coincident(const std::vector<TransitionLine>& lines) {
  std::vector<bool> used(lines.size(), false);
  std::vector<TransitionLine> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    TransitionLine line = lines[i];
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      if (used[j] || !same_kind(line, lines[j]) || std::abs(lines[j].frequency - line.frequency) > kMergeTolerance) {
        continue;
      }
      used[j] = true;
      if (lines[j].sublattice != line.sublattice) line.sublattice = kBothSublattices;
    }
    out.push_back(line);
  }
  return out;
}

void sort_lines(std::vector<TransitionLine>& lines) {
  auto key = [](const TransitionLine& t) {
    return std::make_tuple(t.frequency, static_cast<int>(t.line_class), static_cast<int>(t.polarisation), t.sublattice,
                           t.pair_kind ? static_cast<int>(*t.pair_kind) : -1, t.allowed, t.approx_flag);
  };
  std::stable_sort(lines.begin(), lines.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
}

double absolute_reference(const IonModel& ion, const ExchangeConstants& xc, const GFactors& g) {
  const IonLevels levels = ion.solve(mean_field_single(xc, Phase::afm, 1, g.c));
  double best = std::numeric_limits<double>::infinity();
  for (const SingleIonLine& l : single_ion_lines(levels.eigen, ion.basis(), levels.z1, levels.r1)) {
    if (l.initial_state != levels.z1[0] || !l.initial_irrep || !l.final_irrep) continue;
    if (selection_rule(*l.initial_irrep, *l.final_irrep) == Polarisation::pi) best = std::min(best, l.frequency);
  }
  if (!std::isfinite(best)) throw ContractError("no pi-allowed zero-field main line to use as the frequency reference");
  return best;
}

}  // namespace

std::string to_string(LineClass c) {
  switch (c) {
    case LineClass::main: return "main";
    case LineClass::two_nd: return "two_nd";
    case LineClass::satellite: return "satellite";
    case LineClass::hot_band: return "hot_band";
  }
  return "?";
}

void SweepConfig::validate() const {
  require_ascending(field_values, "field values");
  require_ascending(boundaries_c, "c-axis phase boundaries");
  require_ascending(boundaries_b, "b-axis phase boundaries");
  if (boundaries_c.size() != 2) throw ConfigurationError("c-axis phase boundaries need exactly two values");
  if (boundaries_b.size() != 1) throw ConfigurationError("b-axis phase boundaries need exactly one value");
  if (!(linewidth > 0.0) || !std::isfinite(linewidth)) throw ConfigurationError("linewidth must be positive");
  if (polarisations.empty()) throw ConfigurationError("at least one polarisation is required");
  if (!(mixing_threshold >= 0.0 && mixing_threshold < 0.5)) {
    throw ConfigurationError("mixing threshold must lie in [0, 0.5)");
  }
  for (double v : field_values) {
    if (!std::isfinite(v)) throw ConfigurationError("field values must be finite");
  }
  for (double v : satellite_offsets) {
    if (!std::isfinite(v)) throw ConfigurationError("satellite offsets must be finite");
  }
}

bool consistent_with_selection_rules(const TransitionLine& line) {
  if (line.mixed) return line.allowed;
  return line.allowed == (selection_rule(line.initial_irrep, line.final_irrep) == line.polarisation);
}

SpectroscopyModel::SpectroscopyModel(IonModel ion_model, ExchangeConstants xc)
    : ion(std::move(ion_model)), exchange(xc), g(ion.ground_g_factors()) {
  reference = absolute_reference(ion, exchange, g);
  for (const auto& mu : ion.moments()) {
    Eigen::SelfAdjointEigenSolver<OperatorMatrixd> solver(mu, Eigen::EigenvaluesOnly);
    moment_bound = std::max(moment_bound, solver.eigenvalues().cwiseAbs().maxCoeff());
  }
}

Phase phase_of(double field, FieldAxis axis, const std::vector<double>& boundaries) {
  const double b = std::abs(field);
  if (axis == FieldAxis::b) {
    if (boundaries.empty()) throw ConfigurationError("b-axis phase boundary missing");
    return b < boundaries.front() ? Phase::afm : Phase::pm;
  }
  if (boundaries.size() < 2) throw ConfigurationError("c-axis phase boundaries missing");
  if (b < boundaries[0]) return Phase::afm;
  if (b < boundaries[1]) return Phase::intermediate;
  return Phase::pm;
}

std::vector<Site> single_ion_sites(double field, Phase phase, FieldAxis axis, const SpectroscopyModel& model) {
  const ExchangeConstants& xc = model.exchange;
  const GFactors& g = model.g;
  const Eigen::Vector3d applied = axis_vector(axis) * field;
  switch (phase) {
    case Phase::afm:
      return {{1, applied + mean_field_single(xc, Phase::afm, 1, g.c)},
              {2, applied + mean_field_single(xc, Phase::afm, 2, g.c)}};
    case Phase::pm:
      return {{kBothSublattices, applied + (axis == FieldAxis::b ? mean_field_b_axis_pm_single(xc, g.b)
                                                                 : mean_field_single(xc, Phase::pm, 1, g.c))}};
    case Phase::intermediate:
      break;
  }
  throw UnmodeledPhaseError("the intermediate phase has no single-ion model");
}

FieldPoint line_list(double field, const SweepConfig& cfg, const SpectroscopyModel& model) {
  FieldPoint point;
  point.field = field;
  point.phase = phase_of(field, cfg.field_axis, cfg.boundaries());
  if (point.phase == Phase::intermediate) {
    point.unmodeled = true;
    return point;
  }

  const IonModel& ion = model.ion;
  const ExchangeConstants& xc = model.exchange;
  const GFactors& g = model.g;
  const bool afm = point.phase == Phase::afm;
  const bool b_axis = cfg.field_axis == FieldAxis::b;
  const Eigen::Vector3d applied = axis_vector(cfg.field_axis) * field;

  std::vector<TransitionLine> lines;

  // Single ions.
  const bool want_hot = cfg.include_hot_band;
  if (cfg.include_main || cfg.include_satellite || want_hot) {
    for (const Site& site : single_ion_sites(field, point.phase, cfg.field_axis, model)) {
      const int sublattice = site.sublattice;
      const IonLevels levels = ion.solve(site.field);
      for (auto& t : single_ion_records(levels, ion, 0, LineClass::main, sublattice, cfg, model.reference)) {
        lines.push_back(t);
      }
      const double splitting = levels.eigen.energies(levels.z1[1]) - levels.eigen.energies(levels.z1[0]);
      if (want_hot && splitting > kKramersTolerance) {
        for (auto& t : single_ion_records(levels, ion, 1, LineClass::hot_band, sublattice, cfg, model.reference)) {
          if (cfg.hot_band_everywhere || (b_axis && t.polarisation == Polarisation::sigma)) lines.push_back(t);
        }
      }
    }
  }

  // Pairs.
  if (cfg.include_two_nd) {
    for (PairKind kind : {PairKind::in_plane, PairKind::out_of_plane}) {
      const ExchangeTensor tensor = exchange_tensor(xc, kind, g);
      // (host sublattice, per-member sublattice labels)
      std::vector<std::pair<int, std::array<int, 2>>> placements;
      if (!afm) {
        placements = {{1, {kBothSublattices, kBothSublattices}}};
      } else if (kind == PairKind::in_plane) {
        placements = {{1, {1, 2}}};
      } else {
        placements = {{1, {1, 1}}, {2, {2, 2}}};
      }
      for (const auto& [host, labels] : placements) {
        std::array<EffectiveIon, 2> members;
        for (int m = 1; m <= 2; ++m) {
          const Eigen::Vector3d mean_field =
              (!afm && b_axis) ? mean_field_b_axis_pm(xc, g.b)
                               : mean_field_pair_member(xc, kind, point.phase, m, g.c, host);
          members[m - 1] = project_ion(ion.solve(applied + mean_field), ion);
        }
        const PairSystem pair = build_pair(members[0], members[1], tensor);
        for (auto& t : pair_records(pair, kind, labels, cfg, model.reference)) lines.push_back(t);
      }
    }
  }

  sort_lines(lines);
  lines = merge_coincident(lines);

  if (cfg.include_satellite) {
    std::vector<TransitionLine> satellites;
    for (const TransitionLine& t : lines) {
      if (t.line_class != LineClass::main) continue;
      for (double offset : cfg.satellite_offsets) {
        TransitionLine s = t;
        s.line_class = LineClass::satellite;
        s.frequency += offset;
        satellites.push_back(s);
      }
    }
    lines.insert(lines.end(), satellites.begin(), satellites.end());
  }
  if (!cfg.include_main) {
    std::erase_if(lines, [](const TransitionLine& t) { return t.line_class == LineClass::main; });
  }
  sort_lines(lines);
  point.lines = std::move(lines);
  return point;
}

SweepTable sweep(const SweepConfig& cfg, const SpectroscopyModel& model, unsigned threads) {
  cfg.validate();
  SweepTable table;
  const std::size_t n = cfg.field_values.size();
  table.points.resize(n);
  if (n == 0) return table;

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  auto worker = [&](unsigned id) {
    try {
      for (std::size_t i = next++; i < n; i = next++) table.points[i] = line_list(cfg.field_values[i], cfg, model);
    } catch (...) {
      errors[id] = std::current_exception();
      next = n;
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker, t);
  worker(0);
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Continuity: adjacent fields within one phase, lines matched by label and
  // frequency rank.
  using Key = std::tuple<int, int, int, int>;
  auto group = [](const FieldPoint& p) {
    std::map<Key, std::vector<double>> g;
    for (const auto& t : p.lines) {
      g[{static_cast<int>(t.line_class), static_cast<int>(t.polarisation), t.sublattice,
         t.pair_kind ? static_cast<int>(*t.pair_kind) : -1}]
          .push_back(t.frequency);
    }
    return g;
  };
  for (std::size_t i = 1; i < n; ++i) {
    const FieldPoint& a = table.points[i - 1];
    const FieldPoint& b = table.points[i];
    if (a.unmodeled || b.unmodeled || a.phase != b.phase) continue;
    const double bound = 5.0 * 2.0 * model.moment_bound * units::bohr_magneton_ghz_per_tesla * std::abs(b.field - a.field);
    const auto ga = group(a);
    const auto gb = group(b);
    for (const auto& [key, fa] : ga) {
      const auto it = gb.find(key);
      if (it == gb.end() || it->second.size() != fa.size()) continue;
      for (std::size_t k = 0; k < fa.size(); ++k) {
        const double jump = std::abs(it->second[k] - fa[k]);
        if (jump >= bound) {
          std::ostringstream msg;
          msg << "line jump of " << jump << " GHz between " << a.field << " T and " << b.field << " T (bound " << bound
              << " GHz)";
          table.continuity_violations.push_back(msg.str());
        }
      }
    }
  }
  return table;
}

std::vector<LevelPoint> level_sweep(const SweepConfig& cfg, const SpectroscopyModel& model) {
  cfg.validate();
  std::vector<LevelPoint> out;
  for (double field : cfg.field_values) {
    LevelPoint point;
    point.field = field;
    point.phase = phase_of(field, cfg.field_axis, cfg.boundaries());
    point.unmodeled = point.phase == Phase::intermediate;
    if (!point.unmodeled) {
      for (const Site& site : single_ion_sites(field, point.phase, cfg.field_axis, model)) {
        point.sites.emplace_back(site.sublattice, model.ion.solve(site.field).eigen.energies);
      }
    }
    out.push_back(std::move(point));
  }
  return out;
}

double lorentzian(double detuning, double linewidth) {
  if (std::abs(detuning) > 6.0 * linewidth) return 0.0;
  const double half = 0.5 * linewidth;
  const double truncated_area = (2.0 / M_PI) * std::atan(12.0);
  return half / (M_PI * (detuning * detuning + half * half)) / truncated_area;
}

SpectrumMap render(const SweepTable& table, const SweepConfig& cfg, const RenderGrid& grid) {
  if (!(cfg.linewidth > 0.0)) throw ArgumentError("render: linewidth must be positive");
  if (!(grid.step > 0.0) || !(grid.max_frequency > grid.min_frequency)) throw ArgumentError("render: bad frequency grid");

  SpectrumMap map;
  const auto columns = static_cast<Eigen::Index>(std::floor((grid.max_frequency - grid.min_frequency) / grid.step + 1e-9)) + 1;
  map.frequencies.resize(columns);
  for (Eigen::Index c = 0; c < columns; ++c) map.frequencies[c] = grid.min_frequency + grid.step * c;
  map.intensity = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(table.points.size()), columns);

  for (std::size_t r = 0; r < table.points.size(); ++r) {
    const FieldPoint& point = table.points[r];
    map.fields.push_back(point.field);
    for (const TransitionLine& t : point.lines) {
      if (!t.allowed) continue;
      if (std::find(cfg.polarisations.begin(), cfg.polarisations.end(), t.polarisation) == cfg.polarisations.end()) {
        continue;
      }
      const double weight = t.approx_flag ? 0.5 : 1.0;
      const double reach = 6.0 * cfg.linewidth;
      const auto first = std::max<Eigen::Index>(0, static_cast<Eigen::Index>(std::ceil((t.frequency - reach - grid.min_frequency) / grid.step)));
      const auto last = std::min<Eigen::Index>(columns - 1, static_cast<Eigen::Index>(std::floor((t.frequency + reach - grid.min_frequency) / grid.step)));
      for (Eigen::Index c = first; c <= last; ++c) {
        map.intensity(static_cast<Eigen::Index>(r), c) += weight * lorentzian(map.frequencies[c] - t.frequency, cfg.linewidth);
      }
    }
  }
  return map;
}

}  // namespace reion

#include "reion/validation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "reion/ion_spec_file.hpp"
#include "reion/output.hpp"
#include "reion/units.hpp"

namespace reion {

namespace {

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

CheckResult wigner_orthogonality() {
  double worst = 0.0;
  for (int t1 = 0; t1 <= 6; ++t1) {
    for (int t2 = 0; t2 <= 6; ++t2) {
      for (int t3 = std::abs(t1 - t2); t3 <= t1 + t2; t3 += 2) {
        for (int u3 = std::abs(t1 - t2); u3 <= t1 + t2; u3 += 2) {
          const int tm3 = t3 % 2;  // smallest |m3|; same parity for j3 and j3'
          if (tm3 > u3) continue;
          double sum = 0.0;
          for (int tm1 = -t1; tm1 <= t1; tm1 += 2) {
            const int tm2 = -tm3 - tm1;
            if (std::abs(tm2) > t2 || (tm2 + t2) % 2) continue;
            const auto h = HalfInt::from_twice;
            sum += wigner3j(h(t1), h(t2), h(t3), h(tm1), h(tm2), h(tm3)) *
                   wigner3j(h(t1), h(t2), h(u3), h(tm1), h(tm2), h(tm3));
          }
          const double expected = t3 == u3 ? 1.0 / (t3 + 1) : 0.0;
          worst = std::max(worst, std::abs(sum - expected));
        }
      }
    }
  }
  return {"wigner3j orthogonality (j <= 3)", worst < 1e-12, "max deviation " + fmt(worst)};
}

CheckResult kramers(const IonSpec& base) {
  std::mt19937_64 rng(20240917);
  std::uniform_real_distribution<double> u(-800.0, 800.0);
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    IonSpec spec = base;
    spec.cf = {};
    for (int k : {2, 4, 6}) {
      for (int q = 0; q <= k; ++q) spec.cf.set(k, q, {u(rng), q == 0 ? 0.0 : u(rng)});
    }
    const EigenSystem es = diagonalize(build_free_ion(spec) + build_crystal_field(spec));
    for (Eigen::Index i = 0; i + 1 < es.energies.size(); i += 2) {
      worst = std::max(worst, es.energies(i + 1) - es.energies(i));
    }
  }
  return {"Kramers pairing at zero field (20 random crystal fields)", worst < kKramersTolerance,
          "max pair splitting " + fmt(worst) + " GHz"};
}

CheckResult zeeman_linearity(const IonModel& ion) {
  const GFactors g = ion.ground_g_factors();
  const double field = 1e-4;
  double worst = 0.0;
  for (Axis axis : {Axis::a, Axis::b, Axis::c}) {
    Eigen::Vector3d b = Eigen::Vector3d::Zero();
    b(static_cast<int>(axis)) = field;
    const IonLevels lv = ion.solve(b);
    const double split = lv.eigen.energies(lv.z1[1]) - lv.eigen.energies(lv.z1[0]);
    const double expected = g.along(axis) * units::bohr_magneton_ghz_per_tesla * field;
    worst = std::max(worst, std::abs(split - expected) / expected);
  }
  return {"Z1 Zeeman splitting matches g at 0.1 mT", worst < 1e-3, "max relative error " + fmt(worst)};
}

CheckResult decoupled_pair(const IonModel& ion) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const EffectiveIon a = project_ion(ion.solve({u(rng), u(rng), u(rng)}), ion);
    const EffectiveIon b = project_ion(ion.solve({u(rng), u(rng), u(rng)}), ion);
    const PairSystem pair = build_pair(a, b, ExchangeTensor{});
    std::vector<double> sums;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) sums.push_back(a.energies(i) + b.energies(j));
    }
    std::sort(sums.begin(), sums.end());
    const double ground = sums.front();
    for (int s = 0; s < 16; ++s) worst = std::max(worst, std::abs(pair.eigen.energies(s) - (sums[s] - ground)));
  }
  return {"uncoupled pair spectrum is the sum of single-ion spectra", worst < 1e-9, "max deviation " + fmt(worst) + " GHz"};
}

CheckResult selection_table() {
  const std::array<std::tuple<Irrep, Irrep, Polarisation>, 8> rows{{
      {Irrep::gamma3, Irrep::gamma3, Polarisation::sigma},
      {Irrep::gamma4, Irrep::gamma4, Polarisation::sigma},
      {Irrep::gamma3, Irrep::gamma4, Polarisation::pi},
      {Irrep::gamma4, Irrep::gamma3, Polarisation::pi},
      {Irrep::gamma1, Irrep::gamma1, Polarisation::sigma},
      {Irrep::gamma2, Irrep::gamma2, Polarisation::sigma},
      {Irrep::gamma1, Irrep::gamma2, Polarisation::pi},
      {Irrep::gamma2, Irrep::gamma1, Polarisation::pi},
  }};
  int bad = 0;
  for (const auto& [i, f, p] : rows) bad += selection_rule(i, f) != p;
  return {"selection-rule table", bad == 0, std::to_string(bad) + " wrong rows"};
}

CheckResult sweep_consistency(const SweepTable& table) {
  std::size_t lines = 0, bad = 0;
  for (const auto& p : table.points) {
    for (const auto& t : p.lines) {
      ++lines;
      bad += !consistent_with_selection_rules(t);
    }
  }
  return {"every line agrees with the selection rules", bad == 0,
          std::to_string(bad) + " of " + std::to_string(lines) + " lines inconsistent"};
}

CheckResult continuity(const SweepTable& table) {
  return {"lines continuous within each phase", table.continuity_violations.empty(),
          table.continuity_violations.empty() ? "no jumps" : table.continuity_violations.front()};
}

CheckResult satellites_rigid(const SweepTable& table, const SweepConfig& cfg) {
  std::size_t bad = 0, seen = 0;
  for (const auto& p : table.points) {
    for (const auto& s : p.lines) {
      if (s.line_class != LineClass::satellite) continue;
      ++seen;
      const bool matched = std::any_of(p.lines.begin(), p.lines.end(), [&](const TransitionLine& m) {
        if (m.line_class != LineClass::main || m.polarisation != s.polarisation || m.sublattice != s.sublattice) {
          return false;
        }
        return std::any_of(cfg.satellite_offsets.begin(), cfg.satellite_offsets.end(),
                           [&](double off) { return std::abs(s.frequency - m.frequency - off) < 1e-9; });
      });
      bad += !matched;
    }
  }
  return {"satellites are rigid translates of main lines", bad == 0,
          std::to_string(bad) + " of " + std::to_string(seen) + " satellites unmatched"};
}

std::vector<double> main_frequencies(const SpectroscopyModel& model, const Eigen::Vector3d& field) {
  const IonLevels lv = model.ion.solve(field);
  return {lv.eigen.energies(lv.r1[0]) - lv.eigen.energies(lv.z1[0]),
          lv.eigen.energies(lv.r1[1]) - lv.eigen.energies(lv.z1[0])};
}

CheckResult sublattice_mirror(const SpectroscopyModel& model, const SweepConfig& cfg) {
  double worst = 0.0;
  const double top = cfg.boundaries_c.front();
  for (int i = 1; i <= 10; ++i) {
    const double b = top * i / 11.0;
    const auto s1 = single_ion_sites(b, Phase::afm, FieldAxis::c, model);
    const auto s2 = single_ion_sites(-b, Phase::afm, FieldAxis::c, model);
    const auto f1 = main_frequencies(model, s1[0].field);
    const auto f2 = main_frequencies(model, s2[1].field);
    for (int k = 0; k < 2; ++k) worst = std::max(worst, std::abs(f1[k] - f2[k]));
  }
  return {"AFM sublattice mirror (sublattice 2 at B equals sublattice 1 at -B)", worst < 1e-6,
          "max deviation " + fmt(worst) + " GHz"};
}

CheckResult zero_field_order(const SpectroscopyModel& model, const SweepConfig& base) {
  SweepConfig cfg = base;
  cfg.field_axis = FieldAxis::c;
  cfg.polarisations = {Polarisation::pi, Polarisation::sigma};
  const FieldPoint p = line_list(0.0, cfg, model);
  double pi = NAN, sigma = NAN;
  for (const auto& t : p.lines) {
    if (t.line_class != LineClass::main || !t.allowed) continue;
    (t.polarisation == Polarisation::pi ? pi : sigma) = t.frequency;
  }
  const bool ok = std::isfinite(pi) && std::isfinite(sigma) && pi < sigma && std::abs(pi) < 1e-9;
  return {"zero field: pi main line at 0, below sigma", ok, "pi " + fmt(pi) + " GHz, sigma " + fmt(sigma) + " GHz"};
}

CheckResult b_axis_breakdown(const SpectroscopyModel& model, const SweepConfig& base) {
  SweepConfig cfg = base;
  cfg.field_axis = FieldAxis::b;
  cfg.polarisations = {Polarisation::pi, Polarisation::sigma};
  const FieldPoint p = line_list(cfg.boundaries_b.front() + 1.0, cfg, model);
  int mixed_pairs = 0;
  for (const auto& t : p.lines) {
    if (t.line_class != LineClass::main || !t.mixed || t.polarisation != Polarisation::pi || !t.allowed) continue;
    const bool partner = std::any_of(p.lines.begin(), p.lines.end(), [&](const TransitionLine& s) {
      return s.line_class == LineClass::main && s.polarisation == Polarisation::sigma && s.allowed &&
             std::abs(s.frequency - t.frequency) < 1e-9;
    });
    mixed_pairs += partner;
  }
  return {"PM, B || b: mixed states allow both polarisations", mixed_pairs > 0,
          std::to_string(mixed_pairs) + " main transitions allowed in both"};
}

CheckResult render_area(const SweepTable& table, const SweepConfig& cfg, const RenderGrid& grid) {
  const SpectrumMap map = render(table, cfg, grid);
  double worst = 0.0;
  for (std::size_t r = 0; r < table.points.size(); ++r) {
    double expected = 0.0;
    bool interior = true;
    for (const auto& t : table.points[r].lines) {
      if (!t.allowed) continue;
      if (std::find(cfg.polarisations.begin(), cfg.polarisations.end(), t.polarisation) == cfg.polarisations.end()) {
        continue;
      }
      expected += t.approx_flag ? 0.5 : 1.0;
      interior = interior && t.frequency - 6 * cfg.linewidth > grid.min_frequency &&
                 t.frequency + 6 * cfg.linewidth < grid.max_frequency;
    }
    if (!interior || expected == 0.0) continue;
    const double area = map.intensity.row(static_cast<Eigen::Index>(r)).sum() * grid.step;
    worst = std::max(worst, std::abs(area - expected) / expected);
  }
  return {"rendered column area equals the weighted line count", worst < 0.01, "max relative error " + fmt(worst)};
}

CheckResult determinism(const RunConfig& config, const SpectroscopyModel& model) {
  const OutputHeader header = make_header("sweep", config);
  std::ostringstream a, b;
  write_line_table(a, header, sweep(config.sweep, model), OutputFormat::csv);
  write_line_table(b, header, sweep(config.sweep, model, 1), OutputFormat::csv);
  return {"sweep output independent of thread count and repetition", a.str() == b.str(),
          std::to_string(a.str().size()) + " bytes compared"};
}

}  // namespace

std::vector<CheckResult> run_validation(const RunConfig& config) {
  const IonSpec spec = load_ion_spec(config.ion_spec_path);
  const SpectroscopyModel model(IonModel(spec), config.exchange);
  const SweepTable table = sweep(config.sweep, model);

  std::vector<CheckResult> out;
  auto run = [&](const std::function<CheckResult()>& check, const char* name) {
    try {
      out.push_back(check());
    } catch (const std::exception& e) {
      out.push_back({name, false, std::string("threw: ") + e.what()});
    }
  };
  run(wigner_orthogonality, "wigner3j orthogonality");
  run([&] { return kramers(spec); }, "Kramers pairing");
  run([&] { return zeeman_linearity(model.ion); }, "Zeeman linearity");
  run([&] { return decoupled_pair(model.ion); }, "uncoupled pair");
  run(selection_table, "selection-rule table");
  run([&] { return sweep_consistency(table); }, "selection-rule consistency");
  run([&] { return continuity(table); }, "continuity");
  run([&] { return satellites_rigid(table, config.sweep); }, "satellites");
  run([&] { return sublattice_mirror(model, config.sweep); }, "sublattice mirror");
  run([&] { return zero_field_order(model, config.sweep); }, "zero-field order");
  run([&] { return b_axis_breakdown(model, config.sweep); }, "b-axis breakdown");
  run([&] { return render_area(table, config.sweep, config.render); }, "render area");
  run([&] { return determinism(config, model); }, "determinism");
  return out;
}

}  // namespace reion

// reion: crystal-field line positions for a rare-earth antiferromagnet.
//
// Exit codes: 0 success, 1 validation failure, 2 parse/configuration error,
// 3 contract violation, 4 unmodeled phase, 5 I/O error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "reion/ion_spec_file.hpp"
#include "reion/output.hpp"
#include "reion/run_config.hpp"
#include "reion/validation.hpp"

namespace {

enum Exit { kOk = 0, kValidationFailed = 1, kParse = 2, kContract = 3, kUnmodeled = 4, kIo = 5 };

struct Overrides {
  std::string config;
  std::string field_axis;
  std::string polarisation;
  std::string out;
  std::string format;
};

reion::RunConfig resolve(const Overrides& o) {
  reion::RunConfig c = reion::load_config(o.config);
  if (o.field_axis == "c") c.sweep.field_axis = reion::FieldAxis::c;
  if (o.field_axis == "b") c.sweep.field_axis = reion::FieldAxis::b;
  if (o.polarisation == "pi") c.sweep.polarisations = {reion::Polarisation::pi};
  if (o.polarisation == "sigma") c.sweep.polarisations = {reion::Polarisation::sigma};
  if (o.polarisation == "both") c.sweep.polarisations = {reion::Polarisation::pi, reion::Polarisation::sigma};
  if (o.format == "csv") c.format = reion::OutputFormat::csv;
  if (o.format == "json") c.format = reion::OutputFormat::json;
  if (!o.out.empty()) c.output_path = o.out;
  return c;
}

int emit(const std::string& text, const std::string& path) {
  if (path == "-") {
    std::cout << text;
    return std::cout ? kOk : kIo;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    std::cerr << "reion: cannot open " << path << " for writing\n";
    return kIo;
  }
  file << text;
  return file ? kOk : kIo;
}

reion::SpectroscopyModel load_model(const reion::RunConfig& c) {
  return {reion::IonModel(reion::load_ion_spec(c.ion_spec_path)), c.exchange};
}

int run(const std::string& command, const Overrides& o) {
  reion::RunConfig c = resolve(o);
  std::ostringstream text;

  if (command == "validate") {
    bool ok = true;
    for (const auto& r : reion::run_validation(c)) {
      text << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
      ok = ok && r.passed;
    }
    text << (ok ? "all checks passed\n" : "validation FAILED\n");
    const int io = emit(text.str(), c.output_path);
    return io != kOk ? io : ok ? kOk : kValidationFailed;
  }

  if (command == "lines") c.sweep.include_two_nd = false;
  if (command == "pair_lines") {
    c.sweep.include_main = c.sweep.include_satellite = c.sweep.include_hot_band = false;
    c.sweep.include_two_nd = true;
  }
  const reion::SpectroscopyModel model = load_model(c);
  const reion::OutputHeader header = reion::make_header(command, c);

  if (command == "levels") {
    reion::write_levels(text, header, reion::level_sweep(c.sweep, model), c.format);
  } else if (command == "render") {
    const reion::SweepTable table = reion::sweep(c.sweep, model);
    reion::write_spectrum(text, header, reion::render(table, c.sweep, c.render), c.format);
  } else {
    const reion::SweepTable table = reion::sweep(c.sweep, model);
    for (const auto& v : table.continuity_violations) std::cerr << "reion: warning: " << v << '\n';
    reion::write_line_table(text, header, table, c.format);
  }
  return emit(text.str(), c.output_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optical lines of Nd3+ ions in an antiferromagnetic host"};
  app.require_subcommand(1);
  Overrides o;
  app.add_option("--config", o.config, "run configuration file")->required()->check(CLI::ExistingFile);
  app.add_option("--field-axis", o.field_axis, "override the sweep axis")->check(CLI::IsMember({"c", "b"}));
  app.add_option("--polarisation", o.polarisation, "override the polarisations")
      ->check(CLI::IsMember({"pi", "sigma", "both"}));
  app.add_option("--out", o.out, "output file ('-' for stdout)");
  app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));

  const std::vector<std::pair<std::string, std::string>> commands{
      {"levels", "single-ion eigenvalues against field"},
      {"lines", "single-ion line table (main, satellite, hot band)"},
      {"pair_lines", "two-ion line table"},
      {"sweep", "full line table"},
      {"render", "spectrum map as a dense grid"},
      {"validate", "run the invariant checks"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kParse;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, o);
  } catch (const reion::ParseError& e) {
    std::cerr << "reion: " << e.what() << '\n';
    return kParse;
  } catch (const reion::ConfigurationError& e) {
    std::cerr << "reion: configuration error: " << e.what() << '\n';
    return kParse;
  } catch (const reion::UnmodeledPhaseError& e) {
    std::cerr << "reion: unmodeled phase: " << e.what() << '\n';
    return kUnmodeled;
  } catch (const std::logic_error& e) {
    std::cerr << "reion: contract violation: " << e.what() << '\n';
    return kContract;
  } catch (const std::exception& e) {
    std::cerr << "reion: " << e.what() << '\n';
    return kContract;
  }
}

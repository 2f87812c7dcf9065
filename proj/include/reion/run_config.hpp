#ifndef REION_RUN_CONFIG_HPP
#define REION_RUN_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "reion/magnetic_lattice.hpp"
#include "reion/spectroscopy.hpp"

namespace reion {

// Structured-text run configuration. Every physical quantity carries its
// unit after the number:
//
//   [ion]
//   spec = ndgao3.ion              # relative to the config file
//   [exchange]
//   J_par = 0.07 K                 # also J_perp, J_par_p, J_perp_p
//   [sweep]
//   axis = c                       # c | b
//   field_start = 0 T              # or: fields = 0 T, 0.5 T, ...
//   field_stop = 3 T
//   field_step = 0.01 T
//   boundaries_c = 1.1 T, 2.3 T
//   boundaries_b = 1.72 T
//   polarisations = pi, sigma
//   satellite_offsets = 250 GHz
//   linewidth = 1 GHz
//   include = main, two_nd, satellite, hot_band
//   hot_band_everywhere = false
//   mixing_threshold = 0.25
//   [render]
//   freq_min = -150 GHz
//   freq_max = 450 GHz
//   freq_step = 0.25 GHz
//   [output]
//   format = csv                   # csv | json
//   path = -                       # '-' is stdout
//
// Only [ion] spec is required.

enum class OutputFormat { csv, json };

std::string to_string(OutputFormat f);

struct RunConfig {
  std::filesystem::path ion_spec_path;
  ExchangeConstants exchange;
  SweepConfig sweep;
  RenderGrid render;
  OutputFormat format = OutputFormat::csv;
  std::string output_path = "-";

  bool operator==(const RunConfig&) const = default;
};

// Default sweep: 0 to 3 T in 0.01 T steps.
SweepConfig default_sweep();

// Throws ParseError with the line and column of the offending token.
RunConfig parse_config(std::istream& in, const std::string& source = "<config>",
                       const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

// Canonical text; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& config);

std::uint64_t fnv1a64(std::string_view bytes);

// Hash of the canonical config text plus the canonical ion specification.
std::string config_hash(const RunConfig& config);

}  // namespace reion

#endif  // REION_RUN_CONFIG_HPP

#ifndef REION_OUTPUT_HPP
#define REION_OUTPUT_HPP

#include <functional>
#include <iosfwd>
#include <string>

#include "reion/run_config.hpp"
#include "reion/spectroscopy.hpp"

namespace reion {

inline constexpr int kSchemaVersion = 1;

// Every file starts with the schema version, the config hash, the command and
// the resolved configuration (output path excluded, so the destination does
// not change the bytes).
struct OutputHeader {
  std::string command;
  std::string config_hash;
  std::string config_text;
};

OutputHeader make_header(const std::string& command, const RunConfig& config);

using LineFilter = std::function<bool(const TransitionLine&)>;

// Rows sorted by (field, frequency); intermediate-phase fields become a single
// "unmodeled" row. Numbers carry 9 significant digits.
void write_line_table(std::ostream& out, const OutputHeader& header, const SweepTable& table, OutputFormat format,
                      const LineFilter& keep = {});

void write_levels(std::ostream& out, const OutputHeader& header, const std::vector<LevelPoint>& levels,
                  OutputFormat format);

// CSV: one row per field, one column per frequency.
void write_spectrum(std::ostream& out, const OutputHeader& header, const SpectrumMap& map, OutputFormat format);

std::string sublattice_label(int sublattice);

}  // namespace reion

#endif  // REION_OUTPUT_HPP

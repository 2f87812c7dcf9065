#include "reion/output.hpp"

#include <ostream>
#include <sstream>

#include <json.hpp>

#include "detail/text.hpp"

namespace reion {

namespace {

using Json = nlohmann::ordered_json;

// The JSON number equal to the 9-digit CSV text.
Json rounded(double v) { return std::stod(detail::format_number(v)); }

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

void csv_header(std::ostream& out, const OutputHeader& h) {
  out << "# schema_version=" << kSchemaVersion << '\n';
  out << "# config_hash=" << h.config_hash << '\n';
  out << "# command=" << h.command << '\n';
  for (const auto& line : lines_of(h.config_text)) out << "#   " << line << '\n';
}

Json json_header(const OutputHeader& h) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["config_hash"] = h.config_hash;
  j["command"] = h.command;
  j["config"] = lines_of(h.config_text);
  return j;
}

const char* boolean(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string sublattice_label(int sublattice) {
  return sublattice == kBothSublattices ? "both" : std::to_string(sublattice);
}

OutputHeader make_header(const std::string& command, const RunConfig& config) {
  RunConfig echoed = config;
  echoed.output_path = "-";
  return {command, config_hash(config), serialize_config(echoed)};
}

void write_line_table(std::ostream& out, const OutputHeader& header, const SweepTable& table, OutputFormat format,
                      const LineFilter& keep) {
  if (format == OutputFormat::csv) {
    csv_header(out, header);
    out << "field_T,frequency_GHz,polarisation,class,sublattice,pair_kind,allowed,approx_flag\n";
    for (const FieldPoint& p : table.points) {
      const std::string field = detail::format_number(p.field);
      if (p.unmodeled) {
        out << field << ",,,unmodeled,,,,\n";
        continue;
      }
      for (const TransitionLine& t : p.lines) {
        if (keep && !keep(t)) continue;
        out << field << ',' << detail::format_number(t.frequency) << ',' << to_string(t.polarisation) << ','
            << to_string(t.line_class) << ',' << sublattice_label(t.sublattice) << ','
            << (t.pair_kind ? to_string(*t.pair_kind) : "none") << ',' << boolean(t.allowed) << ','
            << boolean(t.approx_flag) << '\n';
      }
    }
    return;
  }
  Json j = json_header(header);
  Json rows = Json::array();
  for (const FieldPoint& p : table.points) {
    if (p.unmodeled) {
      rows.push_back({{"field_T", rounded(p.field)}, {"frequency_GHz", nullptr}, {"class", "unmodeled"}});
      continue;
    }
    for (const TransitionLine& t : p.lines) {
      if (keep && !keep(t)) continue;
      rows.push_back({{"field_T", rounded(p.field)},
                      {"frequency_GHz", rounded(t.frequency)},
                      {"polarisation", to_string(t.polarisation)},
                      {"class", to_string(t.line_class)},
                      {"sublattice", sublattice_label(t.sublattice)},
                      {"pair_kind", t.pair_kind ? to_string(*t.pair_kind) : "none"},
                      {"allowed", t.allowed},
                      {"approx_flag", t.approx_flag}});
    }
  }
  j["rows"] = std::move(rows);
  out << j.dump(1) << '\n';
}

void write_levels(std::ostream& out, const OutputHeader& header, const std::vector<LevelPoint>& levels,
                  OutputFormat format) {
  if (format == OutputFormat::csv) {
    csv_header(out, header);
    out << "field_T,phase,sublattice,level,energy_GHz\n";
    for (const LevelPoint& p : levels) {
      const std::string field = detail::format_number(p.field);
      if (p.unmodeled) {
        out << field << ",unmodeled,,,\n";
        continue;
      }
      for (const auto& [sublattice, energies] : p.sites) {
        for (Eigen::Index i = 0; i < energies.size(); ++i) {
          out << field << ',' << to_string(p.phase) << ',' << sublattice_label(sublattice) << ',' << i << ','
              << detail::format_number(energies(i)) << '\n';
        }
      }
    }
    return;
  }
  Json j = json_header(header);
  Json rows = Json::array();
  for (const LevelPoint& p : levels) {
    Json row{{"field_T", rounded(p.field)}, {"phase", p.unmodeled ? "unmodeled" : to_string(p.phase)}};
    Json sites = Json::array();
    for (const auto& [sublattice, energies] : p.sites) {
      Json e = Json::array();
      for (Eigen::Index i = 0; i < energies.size(); ++i) e.push_back(rounded(energies(i)));
      sites.push_back({{"sublattice", sublattice_label(sublattice)}, {"energies_GHz", std::move(e)}});
    }
    row["sites"] = std::move(sites);
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  out << j.dump(1) << '\n';
}

void write_spectrum(std::ostream& out, const OutputHeader& header, const SpectrumMap& map, OutputFormat format) {
  if (format == OutputFormat::csv) {
    csv_header(out, header);
    out << "field_T";
    for (double f : map.frequencies) out << ',' << detail::format_number(f);
    out << '\n';
    for (std::size_t r = 0; r < map.fields.size(); ++r) {
      out << detail::format_number(map.fields[r]);
      for (Eigen::Index c = 0; c < map.intensity.cols(); ++c) {
        out << ',' << detail::format_number(map.intensity(static_cast<Eigen::Index>(r), c));
      }
      out << '\n';
    }
    return;
  }
  Json j = json_header(header);
  Json fields = Json::array();
  for (double f : map.fields) fields.push_back(rounded(f));
  Json freqs = Json::array();
  for (double f : map.frequencies) freqs.push_back(rounded(f));
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < map.intensity.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < map.intensity.cols(); ++c) row.push_back(rounded(map.intensity(r, c)));
    rows.push_back(std::move(row));
  }
  j["fields_T"] = std::move(fields);
  j["frequencies_GHz"] = std::move(freqs);
  j["intensity"] = std::move(rows);
  out << j.dump(1) << '\n';
}

}  // namespace reion

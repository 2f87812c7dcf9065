#include "reion/run_config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <set>
#include <sstream>

#include "detail/text.hpp"
#include "reion/ion_spec_file.hpp"

namespace reion {

namespace {

using detail::Token;

struct Cursor {
  const std::string& source;
  int line = 0;
  std::string_view text;  // the whole raw line
};

[[noreturn]] void fail(const Cursor& at, std::string_view part, const std::string& what) {
  throw ParseError(at.source, at.line, part.empty() ? 1 : detail::column_of(at.text, part), what);
}

// Comma-separated items, each trimmed; empty items are errors.
std::vector<std::string_view> split_list(const Cursor& at, std::string_view value) {
  std::vector<std::string_view> items;
  std::size_t start = 0;
  while (true) {
    const auto comma = value.find(',', start);
    const std::string_view raw = value.substr(start, comma == std::string_view::npos ? value.npos : comma - start);
    const std::string_view item = detail::trim(raw);
    if (item.empty()) fail(at, raw.empty() ? value : raw, "empty list item");
    items.push_back(item);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return items;
}

double quantity(const Cursor& at, std::string_view item, std::string_view unit) {
  const auto tokens = detail::split_whitespace(item);
  if (tokens.size() != 2) fail(at, item, "expected '<number> " + std::string(unit) + "'");
  double v = 0.0;
  const std::string_view number = item.substr(tokens[0].column - 1, tokens[0].text.size());
  const std::string_view suffix = item.substr(tokens[1].column - 1, tokens[1].text.size());
  if (!detail::parse_double(number, v)) fail(at, number, "expected a number, got '" + std::string(number) + "'");
  if (suffix != unit) {
    fail(at, suffix, "unit mismatch: expected '" + std::string(unit) + "', got '" + std::string(suffix) + "'");
  }
  return v;
}

std::vector<double> quantity_list(const Cursor& at, std::string_view value, std::string_view unit) {
  std::vector<double> out;
  for (auto item : split_list(at, value)) out.push_back(quantity(at, item, unit));
  return out;
}

void require_ascending(const Cursor& at, std::string_view value, const std::vector<double>& v, const char* what) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (!(v[i] > v[i - 1])) fail(at, value, std::string(what) + " must be strictly ascending");
  }
}

bool boolean(const Cursor& at, std::string_view value) {
  if (value == "true") return true;
  if (value == "false") return false;
  fail(at, value, "expected 'true' or 'false'");
}

double plain_number(const Cursor& at, std::string_view value) {
  double v = 0.0;
  if (!detail::parse_double(value, v)) fail(at, value, "expected a dimensionless number");
  return v;
}

std::string join_quantities(const std::vector<double>& values, std::string_view unit) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    out += detail::format_exact(values[i]) + " " + std::string(unit);
  }
  return out;
}

struct FieldRange {
  std::optional<double> start, stop, step;
  int line = 0;
};

std::vector<double> expand_range(const FieldRange& r, const std::string& source) {
  if (!(*r.step > 0.0)) throw ParseError(source, r.line, 1, "field_step must be positive");
  if (!(*r.stop >= *r.start)) throw ParseError(source, r.line, 1, "field_stop must not be below field_start");
  const double steps = (*r.stop - *r.start) / *r.step;
  const double n = std::round(steps);
  if (std::abs(steps - n) > 1e-9 * std::max(1.0, n)) {
    throw ParseError(source, r.line, 1, "field range is not a whole number of steps");
  }
  std::vector<double> out;
  for (long i = 0; i <= static_cast<long>(n); ++i) {
    // Snap to a 1e-12 T grid so 0.01-step ranges print cleanly.
    out.push_back(std::round((*r.start + i * *r.step) * 1e12) / 1e12);
  }
  return out;
}

}  // namespace

std::string to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

SweepConfig default_sweep() {
  SweepConfig s;
  s.field_values = expand_range({0.0, 3.0, 0.01, 0}, "<defaults>");
  return s;
}

RunConfig parse_config(std::istream& in, const std::string& source, const std::filesystem::path& base_dir) {
  RunConfig config;
  config.sweep = default_sweep();

  std::string section;
  std::set<std::string> seen;
  std::optional<std::filesystem::path> spec;
  bool explicit_fields = false;
  int explicit_fields_line = 0;
  FieldRange range;
  bool range_given = false;

  using Handler = std::function<void(const Cursor&, std::string_view)>;
  const std::map<std::string, std::map<std::string, Handler>> handlers{
      {"ion",
       {{"spec",
         [&](const Cursor& at, std::string_view v) {
           std::filesystem::path p{std::string(v)};
           if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
           p = std::filesystem::absolute(p).lexically_normal();
           if (!std::filesystem::is_regular_file(p)) fail(at, v, "ion spec file not found: " + p.string());
           spec = p;
         }}}},
      {"exchange",
       {{"J_par", [&](const Cursor& at, std::string_view v) { config.exchange.j_par = quantity(at, v, "K"); }},
        {"J_perp", [&](const Cursor& at, std::string_view v) { config.exchange.j_perp = quantity(at, v, "K"); }},
        {"J_par_p", [&](const Cursor& at, std::string_view v) { config.exchange.j_par_p = quantity(at, v, "K"); }},
        {"J_perp_p", [&](const Cursor& at, std::string_view v) { config.exchange.j_perp_p = quantity(at, v, "K"); }}}},
      {"sweep",
       {{"axis",
         [&](const Cursor& at, std::string_view v) {
           if (v == "c") {
             config.sweep.field_axis = FieldAxis::c;
           } else if (v == "b") {
             config.sweep.field_axis = FieldAxis::b;
           } else {
             fail(at, v, "axis must be 'c' or 'b'");
           }
         }},
        {"fields",
         [&](const Cursor& at, std::string_view v) {
           config.sweep.field_values = v == "none" ? std::vector<double>{} : quantity_list(at, v, "T");
           require_ascending(at, v, config.sweep.field_values, "fields");
           explicit_fields = true;
           explicit_fields_line = at.line;
         }},
        {"field_start", [&](const Cursor& at, std::string_view v) { range.start = quantity(at, v, "T"); range_given = true; range.line = at.line; }},
        {"field_stop", [&](const Cursor& at, std::string_view v) { range.stop = quantity(at, v, "T"); range_given = true; range.line = at.line; }},
        {"field_step", [&](const Cursor& at, std::string_view v) { range.step = quantity(at, v, "T"); range_given = true; range.line = at.line; }},
        {"boundaries_c",
         [&](const Cursor& at, std::string_view v) {
           config.sweep.boundaries_c = quantity_list(at, v, "T");
           require_ascending(at, v, config.sweep.boundaries_c, "boundaries_c");
           if (config.sweep.boundaries_c.size() != 2) fail(at, v, "boundaries_c needs exactly two values");
         }},
        {"boundaries_b",
         [&](const Cursor& at, std::string_view v) {
           config.sweep.boundaries_b = quantity_list(at, v, "T");
           if (config.sweep.boundaries_b.size() != 1) fail(at, v, "boundaries_b needs exactly one value");
         }},
        {"polarisations",
         [&](const Cursor& at, std::string_view v) {
           config.sweep.polarisations.clear();
           for (auto item : split_list(at, v)) {
             Polarisation p = Polarisation::pi;
             if (item == "pi") {
               p = Polarisation::pi;
             } else if (item == "sigma") {
               p = Polarisation::sigma;
             } else {
               fail(at, item, "polarisation must be 'pi' or 'sigma'");
             }
             if (std::find(config.sweep.polarisations.begin(), config.sweep.polarisations.end(), p) !=
                 config.sweep.polarisations.end()) {
               fail(at, item, "duplicate polarisation");
             }
             config.sweep.polarisations.push_back(p);
           }
         }},
        {"satellite_offsets",
         [&](const Cursor& at, std::string_view v) {
           config.sweep.satellite_offsets = v == "none" ? std::vector<double>{} : quantity_list(at, v, "GHz");
         }},
        {"linewidth",
         [&](const Cursor& at, std::string_view v) {
           config.sweep.linewidth = quantity(at, v, "GHz");
           if (!(config.sweep.linewidth > 0.0)) fail(at, v, "linewidth must be positive");
         }},
        {"include",
         [&](const Cursor& at, std::string_view v) {
           auto& s = config.sweep;
           s.include_main = s.include_two_nd = s.include_satellite = s.include_hot_band = false;
           if (v == "none") return;
           for (auto item : split_list(at, v)) {
             bool* flag = item == "main"        ? &s.include_main
                          : item == "two_nd"    ? &s.include_two_nd
                          : item == "satellite" ? &s.include_satellite
                          : item == "hot_band"  ? &s.include_hot_band
                                                : nullptr;
             if (!flag) fail(at, item, "unknown line class '" + std::string(item) + "'");
             if (*flag) fail(at, item, "duplicate line class");
             *flag = true;
           }
         }},
        {"hot_band_everywhere",
         [&](const Cursor& at, std::string_view v) { config.sweep.hot_band_everywhere = boolean(at, v); }},
        {"mixing_threshold",
         [&](const Cursor& at, std::string_view v) {
           config.sweep.mixing_threshold = plain_number(at, v);
           if (!(config.sweep.mixing_threshold >= 0.0 && config.sweep.mixing_threshold < 0.5)) {
             fail(at, v, "mixing_threshold must lie in [0, 0.5)");
           }
         }}}},
      {"render",
       {{"freq_min", [&](const Cursor& at, std::string_view v) { config.render.min_frequency = quantity(at, v, "GHz"); }},
        {"freq_max", [&](const Cursor& at, std::string_view v) { config.render.max_frequency = quantity(at, v, "GHz"); }},
        {"freq_step",
         [&](const Cursor& at, std::string_view v) {
           config.render.step = quantity(at, v, "GHz");
           if (!(config.render.step > 0.0)) fail(at, v, "freq_step must be positive");
         }}}},
      {"output",
       {{"format",
         [&](const Cursor& at, std::string_view v) {
           if (v == "csv") {
             config.format = OutputFormat::csv;
           } else if (v == "json") {
             config.format = OutputFormat::json;
           } else {
             fail(at, v, "format must be 'csv' or 'json'");
           }
         }},
        {"path", [&](const Cursor&, std::string_view v) { config.output_path = std::string(v); }}}},
  };

  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const Cursor at{source, line_no, raw};
    const std::string_view body = detail::trim(detail::strip_comment(raw));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') fail(at, body, "unterminated section");
      section = std::string(detail::trim(body.substr(1, body.size() - 2)));
      if (!handlers.contains(section)) fail(at, body, "unknown section [" + section + "]");
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) fail(at, body, "expected 'key = value'");
    const std::string_view key = detail::trim(body.substr(0, eq));
    const std::string_view value = detail::trim(body.substr(eq + 1));
    if (section.empty()) fail(at, key, "key '" + std::string(key) + "' outside any section");
    const auto& table = handlers.at(section);
    const auto it = table.find(std::string(key));
    if (it == table.end()) fail(at, key, "unknown key '" + std::string(key) + "' in [" + section + "]");
    if (!seen.insert(section + "." + std::string(key)).second) fail(at, key, "duplicate key '" + std::string(key) + "'");
    if (value.empty()) fail(at, body.substr(eq), "missing value for '" + std::string(key) + "'");
    it->second(at, value);
  }

  if (!spec) throw ParseError(source, line_no, 1, "missing required key 'spec' in [ion]");
  config.ion_spec_path = *spec;
  if (range_given) {
    if (explicit_fields) throw ParseError(source, explicit_fields_line, 1, "give either 'fields' or a field range, not both");
    if (!range.start || !range.stop || !range.step) {
      throw ParseError(source, range.line, 1, "field range needs field_start, field_stop and field_step");
    }
    config.sweep.field_values = expand_range(range, source);
  }
  if (!(config.render.max_frequency > config.render.min_frequency)) {
    throw ParseError(source, line_no, 1, "freq_max must exceed freq_min");
  }
  try {
    config.sweep.validate();
  } catch (const ConfigurationError& e) {
    throw ParseError(source, line_no, 1, e.what());
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, 0, "cannot open config file");
  return parse_config(in, path.string(), path.parent_path());
}

std::string serialize_config(const RunConfig& c) {
  const SweepConfig& s = c.sweep;
  std::ostringstream out;
  out << "[ion]\nspec = " << c.ion_spec_path.string() << "\n\n";
  out << "[exchange]\n";
  out << "J_par = " << detail::format_exact(c.exchange.j_par) << " K\n";
  out << "J_perp = " << detail::format_exact(c.exchange.j_perp) << " K\n";
  out << "J_par_p = " << detail::format_exact(c.exchange.j_par_p) << " K\n";
  out << "J_perp_p = " << detail::format_exact(c.exchange.j_perp_p) << " K\n\n";
  out << "[sweep]\naxis = " << to_string(s.field_axis) << '\n';
  out << "fields = " << (s.field_values.empty() ? std::string("none") : join_quantities(s.field_values, "T")) << '\n';
  out << "boundaries_c = " << join_quantities(s.boundaries_c, "T") << '\n';
  out << "boundaries_b = " << join_quantities(s.boundaries_b, "T") << '\n';
  out << "polarisations = ";
  for (std::size_t i = 0; i < s.polarisations.size(); ++i) out << (i ? ", " : "") << to_string(s.polarisations[i]);
  out << "\nsatellite_offsets = "
      << (s.satellite_offsets.empty() ? std::string("none") : join_quantities(s.satellite_offsets, "GHz")) << '\n';
  out << "linewidth = " << detail::format_exact(s.linewidth) << " GHz\n";
  std::vector<std::string> classes;
  if (s.include_main) classes.push_back("main");
  if (s.include_two_nd) classes.push_back("two_nd");
  if (s.include_satellite) classes.push_back("satellite");
  if (s.include_hot_band) classes.push_back("hot_band");
  out << "include = ";
  if (classes.empty()) out << "none";
  for (std::size_t i = 0; i < classes.size(); ++i) out << (i ? ", " : "") << classes[i];
  out << "\nhot_band_everywhere = " << (s.hot_band_everywhere ? "true" : "false") << '\n';
  out << "mixing_threshold = " << detail::format_exact(s.mixing_threshold) << "\n\n";
  out << "[render]\n";
  out << "freq_min = " << detail::format_exact(c.render.min_frequency) << " GHz\n";
  out << "freq_max = " << detail::format_exact(c.render.max_frequency) << " GHz\n";
  out << "freq_step = " << detail::format_exact(c.render.step) << " GHz\n\n";
  out << "[output]\nformat = " << to_string(c.format) << "\npath = " << c.output_path << '\n';
  return out.str();
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string config_hash(const RunConfig& config) {
  // Where the output goes does not change what is computed.
  RunConfig physics = config;
  physics.output_path = "-";
  std::ostringstream text;
  text << serialize_config(physics) << "\n#ion\n";
  write_ion_spec(text, load_ion_spec(config.ion_spec_path));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(text.str())));
  return buf;
}

}  // namespace reion

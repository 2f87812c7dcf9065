#include "reion/ion_spec_file.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "detail/text.hpp"

namespace reion {

namespace {

using detail::Token;

enum class Section { header, manifold, cf, rme };

HalfInt parse_half_int(const Token& tok, const std::string& source, int line) {
  try {
    return HalfInt::parse(tok.text);
  } catch (const ArgumentError& e) {
    throw ParseError(source, line, tok.column, e.what());
  }
}

double parse_number(const Token& tok, const std::string& source, int line) {
  double v = 0.0;
  if (!detail::parse_double(tok.text, v)) {
    throw ParseError(source, line, tok.column, "expected a number, got '" + std::string(tok.text) + "'");
  }
  return v;
}

int parse_integer(const Token& tok, const std::string& source, int line) {
  int v = 0;
  const auto* end = tok.text.data() + tok.text.size();
  auto [ptr, ec] = std::from_chars(tok.text.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError(source, line, tok.column, "expected an integer, got '" + std::string(tok.text) + "'");
  }
  return v;
}

}  // namespace

std::string to_string(MomentMode mode) { return mode == MomentMode::lande ? "lande" : "exact_ls"; }

IonSpec parse_ion_spec(std::istream& in, const std::string& source) {
  IonSpec spec;
  Section section = Section::header;
  std::string raw;
  int line_no = 0;
  bool saw_mode = false;

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line(raw);
    const std::string_view body = detail::trim(detail::strip_comment(line));
    if (body.empty()) continue;

    if (body.front() == '[') {
      if (body.back() != ']') throw ParseError(source, line_no, detail::column_of(line, body), "unterminated section");
      const std::string_view name = body.substr(1, body.size() - 2);
      if (name == "manifold") {
        section = Section::manifold;
      } else if (name == "cf") {
        section = Section::cf;
      } else if (name == "rme") {
        section = Section::rme;
      } else {
        throw ParseError(source, line_no, detail::column_of(line, body), "unknown section [" + std::string(name) + "]");
      }
      continue;
    }

    if (section == Section::header) {
      const auto eq = body.find('=');
      if (eq == std::string_view::npos) {
        throw ParseError(source, line_no, detail::column_of(line, body), "expected 'key = value' before any section");
      }
      const std::string_view key = detail::trim(body.substr(0, eq));
      const std::string_view value = detail::trim(body.substr(eq + 1));
      const int value_col = detail::column_of(line, value.empty() ? body.substr(eq) : value);
      if (key == "moment_mode") {
        if (value == "lande") {
          spec.moment_mode = MomentMode::lande;
        } else if (value == "exact_ls") {
          spec.moment_mode = MomentMode::exact_ls;
        } else {
          throw ParseError(source, line_no, value_col, "moment_mode must be 'lande' or 'exact_ls'");
        }
        saw_mode = true;
      } else if (key == "ground_manifold") {
        spec.ground_manifold = std::string(value);
      } else if (key == "excited_manifold") {
        spec.excited_manifold = std::string(value);
      } else {
        throw ParseError(source, line_no, detail::column_of(line, key), "unknown key '" + std::string(key) + "'");
      }
      continue;
    }

    const auto tokens = detail::split_whitespace(line.substr(0, body.data() - line.data() + body.size()));
    auto expect_columns = [&](std::size_t n, const char* layout) {
      if (tokens.size() != n) {
        throw ParseError(source, line_no, tokens.front().column,
                         "expected " + std::to_string(n) + " columns (" + layout + "), got " +
                             std::to_string(tokens.size()));
      }
    };
    switch (section) {
      case Section::manifold: {
        expect_columns(5, "label L S J centroid");
        Manifold m;
        m.label = std::string(tokens[0].text);
        m.L = parse_half_int(tokens[1], source, line_no);
        m.S = parse_half_int(tokens[2], source, line_no);
        m.J = parse_half_int(tokens[3], source, line_no);
        m.centroid_cm = parse_number(tokens[4], source, line_no);
        if (!satisfies_triangle(m.L, m.S, m.J)) {
          throw ParseError(source, line_no, tokens[3].column, "J is not in the triangle of L and S");
        }
        spec.manifolds.push_back(std::move(m));
        break;
      }
      case Section::cf: {
        expect_columns(4, "k q Re Im");
        const int k = parse_integer(tokens[0], source, line_no);
        const int q = parse_integer(tokens[1], source, line_no);
        const double re = parse_number(tokens[2], source, line_no);
        const double im = parse_number(tokens[3], source, line_no);
        try {
          spec.cf.set(k, q, {re, im});
        } catch (const ArgumentError& e) {
          throw ParseError(source, line_no, tokens[0].column, e.what());
        }
        break;
      }
      case Section::rme: {
        expect_columns(4, "bra ket k value");
        ReducedMatrixElement r;
        r.bra_manifold = std::string(tokens[0].text);
        r.ket_manifold = std::string(tokens[1].text);
        r.rank = parse_integer(tokens[2], source, line_no);
        r.value = parse_number(tokens[3], source, line_no);
        if (spec.manifold_index(r.bra_manifold) < 0) {
          throw ParseError(source, line_no, tokens[0].column, "unknown manifold '" + r.bra_manifold + "'");
        }
        if (spec.manifold_index(r.ket_manifold) < 0) {
          throw ParseError(source, line_no, tokens[1].column, "unknown manifold '" + r.ket_manifold + "'");
        }
        spec.rmes.push_back(std::move(r));
        break;
      }
      case Section::header: break;
    }
  }
  if (!saw_mode) throw ParseError(source, line_no, 1, "missing required key 'moment_mode'");
  try {
    spec.validate();
  } catch (const ConfigurationError& e) {
    throw ParseError(source, line_no, 1, e.what());
  } catch (const ArgumentError& e) {
    throw ParseError(source, line_no, 1, e.what());
  }
  return spec;
}

IonSpec load_ion_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, 0, "cannot open ion spec file");
  return parse_ion_spec(in, path.string());
}

void write_ion_spec(std::ostream& out, const IonSpec& spec) {
  out << "moment_mode = " << to_string(spec.moment_mode) << '\n';
  if (!spec.ground_manifold.empty()) out << "ground_manifold = " << spec.ground_manifold << '\n';
  if (!spec.excited_manifold.empty()) out << "excited_manifold = " << spec.excited_manifold << '\n';
  out << "\n[manifold]\n";
  for (const auto& m : spec.manifolds) {
    out << m.label << ' ' << m.L.str() << ' ' << m.S.str() << ' ' << m.J.str() << ' '
        << detail::format_exact(m.centroid_cm) << '\n';
  }
  out << "\n[cf]\n";
  for (const auto& [key, value] : spec.cf.entries()) {
    if (key.second < 0) continue;  // implied by Hermiticity
    out << key.first << ' ' << key.second << ' ' << detail::format_exact(value.real()) << ' '
        << detail::format_exact(value.imag()) << '\n';
  }
  out << "\n[rme]\n";
  for (const auto& r : spec.rmes) {
    out << r.bra_manifold << ' ' << r.ket_manifold << ' ' << r.rank << ' ' << detail::format_exact(r.value) << '\n';
  }
}

}  // namespace reion

#ifndef REION_DETAIL_TEXT_HPP
#define REION_DETAIL_TEXT_HPP

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "reion/errors.hpp"

namespace reion::detail {

struct Token {
  std::string_view text;
  int column = 1;  // 1-based
};

// Drops a trailing '#' comment.
inline std::string_view strip_comment(std::string_view line) {
  const auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline int column_of(std::string_view line, std::string_view part) {
  return static_cast<int>(part.data() - line.data()) + 1;
}

inline std::vector<Token> split_whitespace(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return out;
}

inline bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end && std::isfinite(out);
}

// 9 significant digits, the precision of every number this program writes.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v == 0.0 ? 0.0 : v);
  return buf;
}

// Shortest text that reads back to the same double.
inline std::string format_exact(double v) {
  char buf[40];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v == 0.0 ? 0.0 : v);
  return std::string(buf, ptr);
}

}  // namespace reion::detail

#endif  // REION_DETAIL_TEXT_HPP

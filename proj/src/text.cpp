#include "text.hpp"

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>

namespace ccl::text {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

template <typename Fn>
void for_each_line(std::string_view document, Fn&& fn) {
  std::size_t number = 0;
  while (!document.empty()) {
    ++number;
    const auto nl = document.find('\n');
    const auto line = document.substr(0, nl);
    fn(number, line);
    if (nl == std::string_view::npos) break;
    document.remove_prefix(nl + 1);
  }
}

}  // namespace

std::vector<Line> tokenize(std::string_view document) {
  std::vector<Line> lines;
  for_each_line(document, [&](std::size_t number, std::string_view raw) {
    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size()) {
      while (i < raw.size() && is_space(raw[i])) ++i;
      if (i >= raw.size()) break;
      const std::size_t start = i;
      while (i < raw.size() && !is_space(raw[i])) ++i;
      line.tokens.push_back({raw.substr(start, i - start), start + 1});
    }
    if (line.tokens.empty() || line.tokens.front().text.starts_with('#')) return;
    lines.push_back(std::move(line));
  });
  return lines;
}

std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  // strtod needs a terminated buffer; from_chars for double is unreliable on older libstdc++.
  const std::string buf(s);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size() || errno == ERANGE) return std::nullopt;
  return v;
}

std::optional<std::size_t> parse_size(std::string_view s) {
  s = trim(s);
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::vector<CsvRow> csv_rows(std::string_view document) {
  std::vector<CsvRow> rows;
  for_each_line(document, [&](std::size_t number, std::string_view raw) {
    const auto line = trim(raw);
    if (line.empty() || line.front() == '#') return;
    CsvRow row{number, {}};
    std::string_view rest = line;
    while (true) {
      const auto comma = rest.find(',');
      row.fields.emplace_back(trim(rest.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    rows.push_back(std::move(row));
  });
  return rows;
}

}  // namespace ccl::text

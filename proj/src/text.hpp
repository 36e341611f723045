#pragma once

// Line tokenizer and small parsing helpers shared by the text formats.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ccl::text {

struct Token {
  std::string_view text;
  std::size_t column = 0;  // 1-based
};

struct Line {
  std::size_t number = 0;  // 1-based
  std::vector<Token> tokens;
};

/// Splits into whitespace-separated tokens; drops blank lines and `#` comment lines.
std::vector<Line> tokenize(std::string_view document);

/// Strict decimal parse of the whole string; nullopt on trailing garbage.
std::optional<double> parse_double(std::string_view s);
std::optional<std::size_t> parse_size(std::string_view s);

/// Non-comment, non-blank lines with their 1-based numbers, trimmed.
struct CsvRow {
  std::size_t number = 0;
  std::vector<std::string> fields;
};
std::vector<CsvRow> csv_rows(std::string_view document);

}  // namespace ccl::text

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ccl {

enum class Errc {
  syntax,
  unknown_kind,
  duplicate_node,
  missing_endpoint,
  forbidden_shape,
  duplicate_edge,
  self_loop,
  unknown_node,
  missing_attribute,
  bad_attribute,
  dangling_coupling,
  bad_plant,
  duplicate_record,
  bad_value,
  invalid_argument,
  no_targets,
  cycle,
  divergence,
};

std::string_view errc_name(Errc code) noexcept;

// Single exception type for the library. Text-format errors carry a 1-based
// source position; line() == 0 means the error is not tied to a location.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message, std::size_t line = 0, std::size_t column = 0);

  Errc code() const noexcept { return code_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  Errc code_;
  std::size_t line_;
  std::size_t column_;
};

}  // namespace ccl

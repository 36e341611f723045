#include "ccl/error.hpp"

#include <fmt/format.h>

namespace ccl {
namespace {

std::string with_position(const std::string& message, std::size_t line, std::size_t column) {
  if (line == 0) return message;
  if (column == 0) return fmt::format("line {}: {}", line, message);
  return fmt::format("line {}, column {}: {}", line, column, message);
}

}  // namespace

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::syntax: return "syntax error";
    case Errc::unknown_kind: return "unknown node kind";
    case Errc::duplicate_node: return "duplicate node";
    case Errc::missing_endpoint: return "missing edge endpoint";
    case Errc::forbidden_shape: return "forbidden edge shape";
    case Errc::duplicate_edge: return "duplicate edge";
    case Errc::self_loop: return "self-loop";
    case Errc::unknown_node: return "unknown node";
    case Errc::missing_attribute: return "missing attribute";
    case Errc::bad_attribute: return "malformed attribute";
    case Errc::dangling_coupling: return "dangling physical coupling";
    case Errc::bad_plant: return "invalid plant";
    case Errc::duplicate_record: return "duplicate record";
    case Errc::bad_value: return "bad value";
    case Errc::invalid_argument: return "invalid argument";
    case Errc::no_targets: return "no targets";
    case Errc::cycle: return "cycle";
    case Errc::divergence: return "simulation diverged";
  }
  return "error";
}

Error::Error(Errc code, const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error(with_position(message, line, column)), code_(code), line_(line), column_(column) {}

}  // namespace ccl

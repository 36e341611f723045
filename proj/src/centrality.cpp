#include "ccl/centrality.hpp"

#include <cmath>

#include <fmt/format.h>

#include "ccl/error.hpp"
#include "text.hpp"

namespace ccl {

DegreeTable::DegreeTable(const CclGraph& graph) {
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    degrees_.emplace(graph.node(i).id, Degree{graph.predecessors(i).size(), graph.successors(i).size()});
  }
}

const Degree& DegreeTable::at(std::string_view id) const {
  const auto it = degrees_.find(id);
  if (it == degrees_.end()) throw Error(Errc::unknown_node, fmt::format("unknown node '{}'", id));
  return it->second;
}

double tau_mean_plus_std(std::span<const std::size_t> values) {
  if (values.empty()) throw Error(Errc::invalid_argument, "threshold of an empty population");
  const auto n = static_cast<double>(values.size());
  double sum = 0.0;
  for (const auto v : values) sum += static_cast<double>(v);
  const double mean = sum / n;
  if (values.size() == 1) return mean;
  double ss = 0.0;
  for (const auto v : values) {
    const double d = static_cast<double>(v) - mean;
    ss += d * d;
  }
  return mean + std::sqrt(ss / (n - 1.0));
}

TauPolicy TauPolicy::fixed(double value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw Error(Errc::invalid_argument, fmt::format("fixed threshold must be finite and >= 0, got {}", value));
  }
  return TauPolicy(Mode::Fixed, value);
}

TauPolicy TauPolicy::parse(std::string_view text) {
  if (text == "mean+std") return mean_plus_std();
  if (text.starts_with("fixed:")) {
    if (const auto v = text::parse_double(text.substr(6))) return fixed(*v);
  }
  throw Error(Errc::invalid_argument, fmt::format("bad tau mode '{}' (expected mean+std or fixed:<value>)", text));
}

double TauPolicy::threshold(std::span<const std::size_t> values) const {
  return mode_ == Mode::Fixed ? fixed_value_ : tau_mean_plus_std(values);
}

std::string TauPolicy::describe() const {
  return mode_ == Mode::Fixed ? fmt::format("fixed:{}", fixed_value_) : std::string("mean+std");
}

}  // namespace ccl

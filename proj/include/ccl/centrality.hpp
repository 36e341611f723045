#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>

#include "ccl/graph.hpp"

namespace ccl {

struct Degree {
  std::size_t in = 0;
  std::size_t out = 0;
};

/// In/out-degree of every node, functions included.
class DegreeTable {
 public:
  explicit DegreeTable(const CclGraph& graph);

  std::size_t in(std::string_view id) const { return at(id).in; }
  std::size_t out(std::string_view id) const { return at(id).out; }
  const Degree& at(std::string_view id) const;

  const std::map<std::string, Degree, std::less<>>& entries() const noexcept { return degrees_; }

 private:
  std::map<std::string, Degree, std::less<>> degrees_;
};

inline DegreeTable degree_table(const CclGraph& graph) { return DegreeTable(graph); }

/// Mean plus sample (n-1) standard deviation. A single value has zero deviation.
double tau_mean_plus_std(std::span<const std::size_t> values);

/// How the global-variable threshold is chosen for one node population.
class TauPolicy {
 public:
  enum class Mode { MeanPlusStd, Fixed };

  static TauPolicy mean_plus_std() noexcept { return TauPolicy(Mode::MeanPlusStd, 0.0); }
  /// Rejects negative or non-finite values.
  static TauPolicy fixed(double value);
  /// Accepts "mean+std" or "fixed:<value>".
  static TauPolicy parse(std::string_view text);

  Mode mode() const noexcept { return mode_; }
  double fixed_value() const noexcept { return fixed_value_; }

  double threshold(std::span<const std::size_t> values) const;
  std::string describe() const;

 private:
  TauPolicy(Mode mode, double value) noexcept : mode_(mode), fixed_value_(value) {}

  Mode mode_;
  double fixed_value_;
};

}  // namespace ccl

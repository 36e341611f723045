#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "ccl/centrality.hpp"
#include "ccl/graph.hpp"

namespace ccl {

// Position in this list is the pattern index i of P_i.
enum class PatternId {
  GlobalVariables,        // CWE-1108
  MultipurposeVariables,  // CWE-1109
  CircularDependency,     // CWE-1047
  DeepNesting,            // CWE-1124
};

inline constexpr PatternId kAllPatterns[] = {
    PatternId::GlobalVariables,
    PatternId::MultipurposeVariables,
    PatternId::CircularDependency,
    PatternId::DeepNesting,
};

std::string_view cwe_name(PatternId id) noexcept;
/// Case-insensitive "CWE-1108" or "1108".
std::optional<PatternId> pattern_from_name(std::string_view name) noexcept;

struct PatternResult {
  PatternId pattern;
  IdSet matched;                        // never contains function nodes
  std::map<std::string, double> parameters;  // thresholds actually applied
};

/// Variables whose out-degree is strictly above the threshold computed over
/// their own kind (static setpoints, sensors and calculated setpoints separately).
PatternResult match_global_variables(const CclGraph& graph, const TauPolicy& policy);

/// Variables written by at least `min_in` sources (override controllers).
PatternResult match_multipurpose_variables(const CclGraph& graph, std::size_t min_in = 2);

/// Variables lying on a directed cycle.
PatternResult match_circular_dependency(const CclGraph& graph);

/// Variables reached through at least `min_depth` chained control functions.
/// Throws Errc::cycle on cyclic graphs, where depth is undefined.
PatternResult match_deep_nesting(const CclGraph& graph, std::size_t min_depth = 3);

}  // namespace ccl

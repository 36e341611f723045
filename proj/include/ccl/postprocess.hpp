#pragma once

#include "ccl/graph.hpp"
#include "ccl/patterns.hpp"

namespace ccl {

struct SensorResult {
  PatternId pattern;
  IdSet sensors;  // R_i, sensors only
};

/// Replaces every matched non-sensor by the sensors that have a directed path
/// to it; matched sensors pass through unchanged.
SensorResult to_sensor_targets(const CclGraph& graph, const PatternResult& result);

}  // namespace ccl

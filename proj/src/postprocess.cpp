#include "ccl/postprocess.hpp"

namespace ccl {

SensorResult to_sensor_targets(const CclGraph& graph, const PatternResult& result) {
  SensorResult out{result.pattern, {}};
  for (const auto& id : result.matched) {
    // reachable_sensors already returns {id} for a sensor and throws for unknown ids.
    out.sensors.merge(reachable_sensors(graph, id));
  }
  return out;
}

}  // namespace ccl

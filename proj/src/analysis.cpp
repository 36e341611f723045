#include "ccl/analysis.hpp"

#include <fmt/format.h>

#include "ccl/error.hpp"

namespace ccl {

AnalysisReport analyze(const CclGraph& graph, const AnalysisOptions& options) {
  if (options.patterns.empty()) throw Error(Errc::invalid_argument, "no patterns enabled");
  AnalysisReport report;
  report.sensor_count = graph.ids_of_kind(NodeKind::Sensor).size();

  std::vector<SensorResult> sensor_sets;
  for (const auto id : options.patterns) {
    PatternResult matched = [&] {
      switch (id) {
        case PatternId::GlobalVariables: return match_global_variables(graph, options.tau);
        case PatternId::MultipurposeVariables: return match_multipurpose_variables(graph, options.min_in);
        case PatternId::CircularDependency: return match_circular_dependency(graph);
        case PatternId::DeepNesting: return match_deep_nesting(graph, options.min_depth);
      }
      throw Error(Errc::invalid_argument, "unknown pattern");
    }();
    auto sensors = to_sensor_targets(graph, matched);
    if (sensors.sensors.empty()) {
      report.warnings.push_back(fmt::format("{} produced no candidate sensors", cwe_name(id)));
    }
    sensor_sets.push_back(sensors);
    report.patterns.push_back({std::move(matched), std::move(sensors)});
  }

  try {
    report.targets = select_target_set(sensor_sets);
  } catch (const Error& e) {
    if (e.code() != Errc::no_targets) throw;
    report.warnings.push_back("no weakness pattern yielded a target sensor");
    return report;
  }
  if (report.sensor_count > 0 && report.targets->targets.size() == report.sensor_count) {
    report.warnings.push_back("target set contains every sensor of the graph; no advantage over a random pick");
  }
  return report;
}

}  // namespace ccl

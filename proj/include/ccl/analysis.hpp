#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ccl/centrality.hpp"
#include "ccl/graph.hpp"
#include "ccl/patterns.hpp"
#include "ccl/postprocess.hpp"
#include "ccl/targeting.hpp"

namespace ccl {

struct AnalysisOptions {
  std::vector<PatternId> patterns{PatternId::GlobalVariables, PatternId::MultipurposeVariables};
  TauPolicy tau = TauPolicy::mean_plus_std();
  std::size_t min_in = 2;
  std::size_t min_depth = 3;
};

struct PatternOutcome {
  PatternResult matched;
  SensorResult sensors;
};

/// Degree pre-computation, pattern matching, post-processing and scoring in one pass.
struct AnalysisReport {
  std::vector<PatternOutcome> patterns;
  std::optional<TargetSet> targets;  // empty when no pattern yielded a sensor
  std::vector<std::string> warnings;
  std::size_t sensor_count = 0;
};

AnalysisReport analyze(const CclGraph& graph, const AnalysisOptions& options = {});

}  // namespace ccl

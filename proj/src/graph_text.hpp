#pragma once

#include "ccl/graph.hpp"
#include "text.hpp"

namespace ccl::detail {

/// Handles `node` and `edge` lines; returns false for any other directive.
bool apply_graph_directive(GraphBuilder& builder, const text::Line& line);

}  // namespace ccl::detail

#include "ccl/patterns.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <functional>
#include <vector>

#include <fmt/format.h>

#include "ccl/error.hpp"

namespace ccl {

std::string_view cwe_name(PatternId id) noexcept {
  switch (id) {
    case PatternId::GlobalVariables: return "CWE-1108";
    case PatternId::MultipurposeVariables: return "CWE-1109";
    case PatternId::CircularDependency: return "CWE-1047";
    case PatternId::DeepNesting: return "CWE-1124";
  }
  return "CWE-?";
}

std::optional<PatternId> pattern_from_name(std::string_view name) noexcept {
  std::string upper;
  for (const char c : name) upper += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (const auto id : kAllPatterns) {
    const auto full = cwe_name(id);
    if (upper == full || upper == full.substr(4)) return id;
  }
  return std::nullopt;
}

PatternResult match_global_variables(const CclGraph& graph, const TauPolicy& policy) {
  PatternResult result{PatternId::GlobalVariables, {}, {}};
  // Actuators never have outgoing edges, so only the three setpoint/sensor kinds compete.
  for (const auto kind : {NodeKind::StaticSetpoint, NodeKind::Sensor, NodeKind::CalculatedSetpoint}) {
    std::vector<std::size_t> members;
    std::vector<std::size_t> out_degrees;
    for (std::size_t i = 0; i < graph.node_count(); ++i) {
      if (graph.node(i).kind != kind) continue;
      members.push_back(i);
      out_degrees.push_back(graph.successors(i).size());
    }
    if (members.empty()) continue;
    const double tau = policy.threshold(out_degrees);
    result.parameters[fmt::format("tau.{}", kind_tag(kind))] = tau;
    for (std::size_t k = 0; k < members.size(); ++k) {
      if (static_cast<double>(out_degrees[k]) > tau) result.matched.insert(graph.node(members[k]).id);
    }
  }
  return result;
}

PatternResult match_multipurpose_variables(const CclGraph& graph, std::size_t min_in) {
  if (min_in < 1) throw Error(Errc::invalid_argument, "min_in must be >= 1");
  PatternResult result{PatternId::MultipurposeVariables, {}, {{"min_in", static_cast<double>(min_in)}}};
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    const auto& n = graph.node(i);
    if (n.kind != NodeKind::Function && graph.predecessors(i).size() >= min_in) result.matched.insert(n.id);
  }
  return result;
}

PatternResult match_circular_dependency(const CclGraph& graph) {
  // Tarjan's strongly connected components, iterative.
  const auto n = graph.node_count();
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0), component(n, kUnvisited);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::size_t> component_size;
  std::size_t counter = 0;

  struct Frame {
    std::size_t v;
    std::size_t next;
  };
  for (std::size_t start = 0; start < n; ++start) {
    if (index[start] != kUnvisited) continue;
    std::vector<Frame> frames{{start, 0}};
    index[start] = low[start] = counter++;
    stack.push_back(start);
    on_stack[start] = true;
    while (!frames.empty()) {
      auto& f = frames.back();
      const auto succ = graph.successors(f.v);
      if (f.next < succ.size()) {
        const auto w = succ[f.next++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const auto v = f.v;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      if (low[v] == index[v]) {
        const auto id = component_size.size();
        component_size.push_back(0);
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          component[w] = id;
          ++component_size[id];
        } while (w != v);
      }
    }
  }

  PatternResult result{PatternId::CircularDependency, {}, {}};
  for (std::size_t v = 0; v < n; ++v) {
    // No self-loops exist, so a node is on a cycle iff its component has another member.
    if (graph.node(v).kind != NodeKind::Function && component_size[component[v]] > 1) {
      result.matched.insert(graph.node(v).id);
    }
  }
  return result;
}

PatternResult match_deep_nesting(const CclGraph& graph, std::size_t min_depth) {
  if (min_depth < 2) throw Error(Errc::invalid_argument, "min_depth must be >= 2");
  const auto n = graph.node_count();
  std::vector<std::size_t> pending(n), depth(n, 0);
  std::deque<std::size_t> ready;
  for (std::size_t v = 0; v < n; ++v) {
    pending[v] = graph.predecessors(v).size();
    if (pending[v] == 0) ready.push_back(v);
  }
  std::size_t processed = 0;
  while (!ready.empty()) {
    const auto v = ready.front();
    ready.pop_front();
    ++processed;
    if (graph.node(v).kind == NodeKind::Function) ++depth[v];
    for (const auto w : graph.successors(v)) {
      depth[w] = std::max(depth[w], depth[v]);
      if (--pending[w] == 0) ready.push_back(w);
    }
  }
  if (processed != n) {
    throw Error(Errc::cycle, "cascade depth is undefined on a graph with a circular dependency");
  }

  PatternResult result{PatternId::DeepNesting, {}, {{"min_depth", static_cast<double>(min_depth)}}};
  for (std::size_t v = 0; v < n; ++v) {
    if (graph.node(v).kind != NodeKind::Function && depth[v] >= min_depth) result.matched.insert(graph.node(v).id);
  }
  return result;
}

}  // namespace ccl

#include "ccl/graph.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <utility>

#include <fmt/format.h>

#include "ccl/error.hpp"
#include "graph_text.hpp"

namespace ccl {

std::string_view kind_tag(NodeKind kind) noexcept {
  switch (kind) {
    case NodeKind::StaticSetpoint: return "ss";
    case NodeKind::Sensor: return "se";
    case NodeKind::Function: return "f";
    case NodeKind::Actuator: return "a";
    case NodeKind::CalculatedSetpoint: return "cs";
  }
  return "?";
}

std::optional<NodeKind> kind_from_tag(std::string_view tag) noexcept {
  for (const auto kind : kAllKinds) {
    if (kind_tag(kind) == tag) return kind;
  }
  return std::nullopt;
}

namespace {

bool edge_shape_permitted(NodeKind from, NodeKind to) {
  if (to == NodeKind::Function) {
    return from == NodeKind::StaticSetpoint || from == NodeKind::Sensor ||
           from == NodeKind::CalculatedSetpoint;
  }
  if (from == NodeKind::Function) {
    return to == NodeKind::Actuator || to == NodeKind::CalculatedSetpoint;
  }
  return false;
}

bool valid_id(std::string_view id) {
  return !id.empty() && std::none_of(id.begin(), id.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
  });
}

}  // namespace

void GraphBuilder::add_node(Node node, SourcePos pos) {
  if (!valid_id(node.id)) {
    throw Error(Errc::syntax, fmt::format("invalid node id '{}'", node.id), pos.line, pos.column);
  }
  nodes_.push_back({std::move(node), pos});
}

void GraphBuilder::add_edge(Edge edge, SourcePos pos) { edges_.push_back({std::move(edge), pos}); }

CclGraph GraphBuilder::build() && {
  CclGraph g;
  std::map<std::string_view, const PendingNode*> by_id;
  for (const auto& pending : nodes_) {
    const auto [it, inserted] = by_id.emplace(pending.node.id, &pending);
    if (!inserted) {
      const auto& first = it->second->pos;
      throw Error(Errc::duplicate_node,
                  first.line ? fmt::format("node '{}' already declared on line {}", pending.node.id, first.line)
                             : fmt::format("node '{}' declared twice", pending.node.id),
                  pending.pos.line, pending.pos.column);
    }
  }

  std::map<std::pair<std::string_view, std::string_view>, const PendingEdge*> seen;
  for (const auto& pending : edges_) {
    const auto& e = pending.edge;
    const auto& pos = pending.pos;
    if (e.from == e.to) {
      throw Error(Errc::self_loop, fmt::format("self-loop on '{}'", e.from), pos.line, pos.column);
    }
    const auto from = by_id.find(e.from);
    const auto to = by_id.find(e.to);
    if (from == by_id.end() || to == by_id.end()) {
      const auto& missing = from == by_id.end() ? e.from : e.to;
      throw Error(Errc::missing_endpoint, fmt::format("edge {} -> {}: node '{}' is not declared", e.from, e.to, missing),
                  pos.line, pos.column);
    }
    const auto fk = from->second->node.kind;
    const auto tk = to->second->node.kind;
    if (!edge_shape_permitted(fk, tk)) {
      throw Error(Errc::forbidden_shape,
                  fmt::format("edge {} -> {} ({} -> {}) is not a permitted shape", e.from, e.to, kind_tag(fk),
                              kind_tag(tk)),
                  pos.line, pos.column);
    }
    if (!seen.emplace(std::pair<std::string_view, std::string_view>(e.from, e.to), &pending).second) {
      throw Error(Errc::duplicate_edge, fmt::format("edge {} -> {} declared twice", e.from, e.to), pos.line,
                  pos.column);
    }
  }

  g.nodes_.reserve(nodes_.size());
  for (auto& pending : nodes_) g.nodes_.push_back(std::move(pending.node));
  std::sort(g.nodes_.begin(), g.nodes_.end(), [](const Node& a, const Node& b) { return a.id < b.id; });

  g.edges_.reserve(edges_.size());
  for (auto& pending : edges_) g.edges_.push_back(std::move(pending.edge));
  std::sort(g.edges_.begin(), g.edges_.end());

  g.succ_.assign(g.nodes_.size(), {});
  g.pred_.assign(g.nodes_.size(), {});
  for (const auto& e : g.edges_) {
    const auto from = *g.find(e.from);
    const auto to = *g.find(e.to);
    g.succ_[from].push_back(to);
    g.pred_[to].push_back(from);
  }
  return g;
}

CclGraph CclGraph::build(std::vector<Node> nodes, std::vector<Edge> edges) {
  GraphBuilder builder;
  for (auto& n : nodes) builder.add_node(std::move(n));
  for (auto& e : edges) builder.add_edge(std::move(e));
  return std::move(builder).build();
}

std::optional<std::size_t> CclGraph::find(std::string_view id) const noexcept {
  const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                                   [](const Node& n, std::string_view key) { return n.id < key; });
  if (it == nodes_.end() || it->id != id) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

std::size_t CclGraph::index_of(std::string_view id) const {
  if (const auto idx = find(id)) return *idx;
  throw Error(Errc::unknown_node, fmt::format("unknown node '{}'", id));
}

std::vector<std::string> CclGraph::ids_of_kind(NodeKind kind) const {
  std::vector<std::string> ids;
  for (const auto& n : nodes_) {
    if (n.kind == kind) ids.push_back(n.id);
  }
  return ids;
}

namespace detail {

bool apply_graph_directive(GraphBuilder& builder, const text::Line& line) {
  const auto& tokens = line.tokens;
  const auto& directive = tokens.front();
  const bool is_node = directive.text == "node";
  const bool is_edge = directive.text == "edge";
  if (!is_node && !is_edge) return false;

  if (tokens.size() != 3) {
    const auto column = tokens.size() > 3 ? tokens[3].column : tokens.back().column + tokens.back().text.size();
    throw Error(Errc::syntax,
                fmt::format("'{}' expects 2 arguments, got {}", directive.text, tokens.size() - 1), line.number,
                column);
  }
  if (is_node) {
    const auto kind = kind_from_tag(tokens[2].text);
    if (!kind) {
      throw Error(Errc::unknown_kind,
                  fmt::format("unknown node kind '{}' (expected ss, se, f, a or cs)", tokens[2].text), line.number,
                  tokens[2].column);
    }
    builder.add_node({std::string(tokens[1].text), *kind}, {line.number, tokens[1].column});
  } else {
    builder.add_edge({std::string(tokens[1].text), std::string(tokens[2].text)}, {line.number, directive.column});
  }
  return true;
}

}  // namespace detail

CclGraph parse_graph(std::string_view document) {
  GraphBuilder builder;
  for (const auto& line : text::tokenize(document)) {
    if (!detail::apply_graph_directive(builder, line)) {
      throw Error(Errc::syntax, fmt::format("unknown directive '{}'", line.tokens.front().text), line.number,
                  line.tokens.front().column);
    }
  }
  return std::move(builder).build();
}

std::string serialize_graph(const CclGraph& graph) {
  std::string out;
  for (const auto& n : graph.nodes()) out += fmt::format("node {} {}\n", n.id, kind_tag(n.kind));
  for (const auto& e : graph.edges()) out += fmt::format("edge {} {}\n", e.from, e.to);
  return out;
}

std::vector<std::vector<std::string>> weak_components(const CclGraph& graph) {
  const auto n = graph.node_count();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto root = [&](std::size_t v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  for (std::size_t v = 0; v < n; ++v) {
    for (const auto w : graph.successors(v)) {
      const auto a = root(v);
      const auto b = root(w);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  // Nodes are id-sorted, so visiting in index order keeps each component sorted
  // and orders components by their smallest id.
  std::map<std::size_t, std::size_t> slot;
  std::vector<std::vector<std::string>> components;
  for (std::size_t v = 0; v < n; ++v) {
    const auto r = root(v);
    const auto [it, inserted] = slot.emplace(r, components.size());
    if (inserted) components.emplace_back();
    components[it->second].push_back(graph.node(v).id);
  }
  return components;
}

IdSet reachable_sensors(const CclGraph& graph, std::string_view id) {
  const auto target = graph.index_of(id);
  if (graph.node(target).kind == NodeKind::Sensor) return {std::string(id)};

  IdSet sensors;
  std::vector<bool> visited(graph.node_count(), false);
  std::deque<std::size_t> queue{target};
  visited[target] = true;
  while (!queue.empty()) {
    const auto v = queue.front();
    queue.pop_front();
    for (const auto u : graph.predecessors(v)) {
      if (visited[u]) continue;
      visited[u] = true;
      if (graph.node(u).kind == NodeKind::Sensor) sensors.insert(graph.node(u).id);
      queue.push_back(u);
    }
  }
  return sensors;
}

}  // namespace ccl

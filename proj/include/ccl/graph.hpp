#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ccl {

// Sorted, duplicate-free collection of node ids.
using IdSet = std::set<std::string, std::less<>>;

enum class NodeKind {
  StaticSetpoint,
  Sensor,
  Function,
  Actuator,
  CalculatedSetpoint,
};

inline constexpr NodeKind kAllKinds[] = {
    NodeKind::StaticSetpoint, NodeKind::Sensor, NodeKind::Function,
    NodeKind::Actuator,       NodeKind::CalculatedSetpoint,
};

/// Short tag used by the text formats: ss, se, f, a, cs.
std::string_view kind_tag(NodeKind kind) noexcept;
std::optional<NodeKind> kind_from_tag(std::string_view tag) noexcept;

struct Node {
  std::string id;
  NodeKind kind;

  friend bool operator==(const Node&, const Node&) = default;
};

struct Edge {
  std::string from;
  std::string to;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// 1-based location in a text document; {0, 0} when the item was built in code.
struct SourcePos {
  std::size_t line = 0;
  std::size_t column = 0;
};

/// Directed information-flow graph of an ICS's closed control loops.
///
/// Immutable once built. Nodes are stored sorted by id and edges sorted by
/// (from, to), so iteration order never depends on input order.
class CclGraph {
 public:
  CclGraph() = default;

  /// Validates and builds a graph; throws ccl::Error on any invariant violation.
  static CclGraph build(std::vector<Node> nodes, std::vector<Edge> edges);

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }

  std::span<const Node> nodes() const noexcept { return nodes_; }
  std::span<const Edge> edges() const noexcept { return edges_; }

  std::optional<std::size_t> find(std::string_view id) const noexcept;
  /// Throws Errc::unknown_node when `id` is absent.
  std::size_t index_of(std::string_view id) const;
  bool contains(std::string_view id) const noexcept { return find(id).has_value(); }

  const Node& node(std::size_t index) const { return nodes_.at(index); }
  NodeKind kind(std::string_view id) const { return nodes_[index_of(id)].kind; }

  std::span<const std::size_t> successors(std::size_t index) const { return succ_.at(index); }
  std::span<const std::size_t> predecessors(std::size_t index) const { return pred_.at(index); }

  std::vector<std::string> ids_of_kind(NodeKind kind) const;

  friend bool operator==(const CclGraph& a, const CclGraph& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  friend class GraphBuilder;

  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> succ_;
  std::vector<std::vector<std::size_t>> pred_;
};

/// Accumulates nodes and edges (forward references allowed) and validates on build().
/// Errors carry the source position that was passed with the offending item.
class GraphBuilder {
 public:
  void add_node(Node node, SourcePos pos = {});
  void add_edge(Edge edge, SourcePos pos = {});
  CclGraph build() &&;

 private:
  struct PendingNode {
    Node node;
    SourcePos pos;
  };
  struct PendingEdge {
    Edge edge;
    SourcePos pos;
  };
  std::vector<PendingNode> nodes_;
  std::vector<PendingEdge> edges_;
};

/// Parses the line-oriented graph format (`node <id> <kind>`, `edge <from> <to>`).
CclGraph parse_graph(std::string_view text);

/// Deterministic text form: node lines sorted by id, then edge lines sorted by (from, to).
std::string serialize_graph(const CclGraph& graph);

/// Weakly connected components; each component sorted, components ordered by their first id.
std::vector<std::vector<std::string>> weak_components(const CclGraph& graph);

/// Sensors with a directed path to `id`. A sensor reaches only itself.
IdSet reachable_sensors(const CclGraph& graph, std::string_view id);

}  // namespace ccl

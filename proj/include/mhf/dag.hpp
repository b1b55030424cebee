#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mhf {

/// Node identifiers are 1-based, matching the [1..N] convention of the
/// labeling and pebbling code.
using Node = std::uint32_t;

struct Edge {
  Node from;
  Node to;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Sorted, duplicate-free set of node ids.
class NodeSet {
 public:
  NodeSet() = default;
  NodeSet(std::initializer_list<Node> nodes);
  explicit NodeSet(std::vector<Node> nodes);

  /// Builds from an already sorted, duplicate-free vector without re-sorting.
  static NodeSet from_sorted(std::vector<Node> nodes);

  bool contains(Node v) const;
  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  auto begin() const { return nodes_.begin(); }
  auto end() const { return nodes_.end(); }
  Node front() const { return nodes_.front(); }
  Node back() const { return nodes_.back(); }
  const std::vector<Node>& values() const { return nodes_; }

  /// Throws std::out_of_range when a member falls outside [1..n].
  void check_within(std::size_t n) const;

  friend bool operator==(const NodeSet&, const NodeSet&) = default;

 private:
  std::vector<Node> nodes_;
};

/// Immutable DAG on nodes [1..N] in topological order: every edge (u, v) has
/// u < v, and parent lists are sorted and duplicate-free.
class Dag {
 public:
  Dag() = default;

  /// Validating constructor; `parents[v-1]` holds the parents of v.
  /// Throws std::invalid_argument if an invariant is violated.
  explicit Dag(std::vector<std::vector<Node>> parents, std::string name = {});

  /// Sorts and deduplicates the edge list. Self-loops and backward edges are
  /// rejected with std::invalid_argument.
  static Dag from_edges(std::size_t n, std::vector<Edge> edges,
                        std::string name = {});

  std::size_t node_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return flat_parents_.size(); }

  std::span<const Node> parents(Node v) const;
  std::span<const Node> children(Node v) const;
  bool has_edge(Node u, Node v) const;

  /// Maximum in-degree over all nodes (0 for edgeless graphs).
  std::size_t indegree() const;

  /// Edges sorted by (to, from), the canonical DAGv1 order.
  std::vector<Edge> edges() const;

  /// Nodes without children.
  std::vector<Node> sinks() const;

  const std::string& name() const { return name_; }
  Dag with_name(std::string name) const;

  /// Structural equality; the name tag is ignored.
  friend bool operator==(const Dag& a, const Dag& b) {
    return a.offsets_ == b.offsets_ && a.flat_parents_ == b.flat_parents_;
  }

 private:
  void check_node(Node v) const;
  void build_children();

  std::vector<std::uint32_t> offsets_;
  std::vector<Node> flat_parents_;
  std::vector<std::uint32_t> child_offsets_;
  std::vector<Node> flat_children_;
  std::string name_;
};

/// A graph derived from another one together with the map from its node ids
/// back to the source graph's ids (`to_original[v-1]`).
struct Subgraph {
  Dag graph;
  std::vector<Node> to_original;

  Node original(Node v) const { return to_original.at(v - 1); }
};

}  // namespace mhf

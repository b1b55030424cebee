#pragma once

#include <cstddef>
#include <vector>

#include "mhf/dag.hpp"

namespace mhf {

/// Parents of v as a set. Throws std::out_of_range for v outside [1..N].
NodeSet parents_of(const Dag& g, Node v);

/// Induced subgraph on Z and every node with a directed path into Z.
/// Throws std::invalid_argument for an empty Z.
Subgraph ancestors_subgraph(const Dag& g, const NodeSet& z);

/// Ancestors of Z (including Z) as a set of g's node ids.
NodeSet ancestor_set(const Dag& g, const NodeSet& z);

/// Longest path ending at each node, counted in edges; index v-1.
std::vector<std::size_t> node_depths(const Dag& g);
std::size_t depth_of(const Dag& g, Node v);
/// Longest path in g, in edges. Zero for graphs with at most one node.
std::size_t depth(const Dag& g);

/// G - S: drops S and incident edges, renumbering survivors in order.
Subgraph remove_nodes(const Dag& g, const NodeSet& s);

/// G (-) S: keeps every node but strips all edges touching S.
Dag detach_nodes(const Dag& g, const NodeSet& s);

/// Edge-set union of two graphs on the same node count.
Dag union_graphs(const Dag& a, const Dag& b);

/// Metanode size m with the derived interval layout.
class MetaParams {
 public:
  MetaParams(std::size_t m, std::size_t n);

  std::size_t m() const { return m_; }
  std::size_t meta_count() const { return meta_count_; }
  std::size_t first_part() const { return first_; }
  std::size_t last_part() const { return last_; }

  /// First and last base node of metanode i (1-based).
  Node interval_begin(Node i) const { return static_cast<Node>((i - 1) * m_ + 1); }
  Node interval_end(Node i) const { return static_cast<Node>(i * m_); }

 private:
  std::size_t m_;
  std::size_t meta_count_;
  std::size_t first_;
  std::size_t last_;
};

/// Metagraph on floor(N/m) metanodes. Edge (i, j) exists when both
/// intervals carry their full internal line path and some base edge runs from
/// the last part of M_i into the first part of M_j. Nodes past floor(N/m)*m
/// belong to no metanode. Throws std::invalid_argument if m is 0 or m > N.
Dag metagraph(const Dag& g, std::size_t m);

/// Maps base nodes to metanodes; nodes outside every metanode are dropped.
NodeSet to_meta(const NodeSet& s, const MetaParams& p);

/// Indegree reduction: node v becomes the chain v_1 -> ... -> v_delta and the
/// j-th parent u_j of v feeds v_j from (u_j)_delta. Node (v, j) gets id
/// (v-1)*delta + j. delta is max(1, indeg(g)).
Subgraph reduce_indegree(const Dag& g);

/// Longest directed path (in edges) from u to v, or -1 when v is unreachable.
long longest_path_between(const Dag& g, Node u, Node v);

}  // namespace mhf

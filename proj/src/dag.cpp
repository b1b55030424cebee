#include "mhf/dag.hpp"

#include <algorithm>
#include <stdexcept>

namespace mhf {

NodeSet::NodeSet(std::initializer_list<Node> nodes) : NodeSet(std::vector<Node>(nodes)) {}

NodeSet::NodeSet(std::vector<Node> nodes) : nodes_(std::move(nodes)) {
  std::sort(nodes_.begin(), nodes_.end());
  nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
}

NodeSet NodeSet::from_sorted(std::vector<Node> nodes) {
  NodeSet s;
  s.nodes_ = std::move(nodes);
  return s;
}

bool NodeSet::contains(Node v) const {
  return std::binary_search(nodes_.begin(), nodes_.end(), v);
}

void NodeSet::check_within(std::size_t n) const {
  if (!nodes_.empty() && (nodes_.front() < 1 || nodes_.back() > n)) {
    throw std::out_of_range("node set member outside [1.." + std::to_string(n) + "]");
  }
}

Dag::Dag(std::vector<std::vector<Node>> parents, std::string name) : name_(std::move(name)) {
  offsets_.reserve(parents.size() + 1);
  offsets_.push_back(0);
  for (std::size_t i = 0; i < parents.size(); ++i) {
    const Node v = static_cast<Node>(i + 1);
    const auto& ps = parents[i];
    for (std::size_t j = 0; j < ps.size(); ++j) {
      if (ps[j] < 1 || ps[j] >= v) {
        throw std::invalid_argument("edge (" + std::to_string(ps[j]) + "," + std::to_string(v) +
                                    ") violates topological order");
      }
      if (j > 0 && ps[j - 1] >= ps[j]) {
        throw std::invalid_argument("parent list of node " + std::to_string(v) +
                                    " is not sorted and duplicate-free");
      }
      flat_parents_.push_back(ps[j]);
    }
    offsets_.push_back(static_cast<std::uint32_t>(flat_parents_.size()));
  }
  build_children();
}

Dag Dag::from_edges(std::size_t n, std::vector<Edge> edges, std::string name) {
  std::vector<std::vector<Node>> parents(n);
  for (const Edge& e : edges) {
    if (e.to < 1 || e.to > n || e.from < 1 || e.from >= e.to) {
      throw std::invalid_argument("invalid edge (" + std::to_string(e.from) + "," +
                                  std::to_string(e.to) + ") for N=" + std::to_string(n));
    }
    parents[e.to - 1].push_back(e.from);
  }
  for (auto& ps : parents) {
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
  }
  return Dag(std::move(parents), std::move(name));
}

void Dag::build_children() {
  const std::size_t n = node_count();
  std::vector<std::uint32_t> counts(n + 1, 0);
  for (Node p : flat_parents_) ++counts[p];
  child_offsets_.assign(n + 1, 0);
  for (std::size_t v = 1; v <= n; ++v) child_offsets_[v] = child_offsets_[v - 1] + counts[v];
  flat_children_.assign(flat_parents_.size(), 0);
  std::vector<std::uint32_t> cursor(child_offsets_.begin(), child_offsets_.end() - (n > 0 ? 1 : 0));
  for (std::size_t v = 1; v <= n; ++v) {
    for (std::uint32_t k = offsets_[v - 1]; k < offsets_[v]; ++k) {
      const Node p = flat_parents_[k];
      flat_children_[cursor[p - 1]++] = static_cast<Node>(v);
    }
  }
}

void Dag::check_node(Node v) const {
  if (v < 1 || v > node_count()) {
    throw std::out_of_range("node " + std::to_string(v) + " outside [1.." +
                            std::to_string(node_count()) + "]");
  }
}

std::span<const Node> Dag::parents(Node v) const {
  check_node(v);
  return {flat_parents_.data() + offsets_[v - 1], flat_parents_.data() + offsets_[v]};
}

std::span<const Node> Dag::children(Node v) const {
  check_node(v);
  return {flat_children_.data() + child_offsets_[v - 1], flat_children_.data() + child_offsets_[v]};
}

bool Dag::has_edge(Node u, Node v) const {
  if (v < 1 || v > node_count()) return false;
  auto ps = parents(v);
  return std::binary_search(ps.begin(), ps.end(), u);
}

std::size_t Dag::indegree() const {
  std::size_t best = 0;
  for (std::size_t v = 1; v < offsets_.size(); ++v) {
    best = std::max<std::size_t>(best, offsets_[v] - offsets_[v - 1]);
  }
  return best;
}

std::vector<Edge> Dag::edges() const {
  std::vector<Edge> out;
  out.reserve(flat_parents_.size());
  for (std::size_t v = 1; v < offsets_.size(); ++v) {
    for (std::uint32_t k = offsets_[v - 1]; k < offsets_[v]; ++k) {
      out.push_back({flat_parents_[k], static_cast<Node>(v)});
    }
  }
  return out;
}

std::vector<Node> Dag::sinks() const {
  std::vector<Node> out;
  for (std::size_t v = 1; v <= node_count(); ++v) {
    if (child_offsets_[v] == child_offsets_[v - 1]) out.push_back(static_cast<Node>(v));
  }
  return out;
}

Dag Dag::with_name(std::string name) const {
  Dag copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

}  // namespace mhf

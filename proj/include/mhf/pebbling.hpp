#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "mhf/dag.hpp"

namespace mhf {

/// Pebbling configurations P_1..P_t; P_0 is the empty configuration.
class Pebbling {
 public:
  Pebbling() = default;
  explicit Pebbling(std::vector<NodeSet> steps) : steps_(std::move(steps)) {}

  void push(NodeSet step) { steps_.push_back(std::move(step)); }
  std::size_t length() const { return steps_.size(); }
  bool empty() const { return steps_.empty(); }
  /// 1-based step access; step(0) is the empty initial configuration.
  const NodeSet& step(std::size_t i) const;
  const std::vector<NodeSet>& steps() const { return steps_; }

  friend bool operator==(const Pebbling&, const Pebbling&) = default;

 private:
  std::vector<NodeSet> steps_;
};

/// First illegal placement: node `node` is new in step `step` although its
/// parent `missing_parent` was not pebbled in the step before.
struct LegalityViolation {
  std::size_t step;
  Node node;
  Node missing_parent;
  friend bool operator==(const LegalityViolation&, const LegalityViolation&) = default;
};

struct LegalityResult {
  bool legal = true;
  std::optional<LegalityViolation> witness;
  explicit operator bool() const { return legal; }
};

/// Checks every transition P_{i-1} -> P_i. Throws std::out_of_range if a
/// step references a node outside g.
LegalityResult check_legal(const Pebbling& p, const Dag& g);

/// Cumulative and sustained-space accounting over a step window.
struct CostReport {
  std::uint64_t cc = 0;
  std::size_t t = 0;
  /// threshold s -> |{i : |P_i| >= s}|, recorded at the distinct sizes;
  /// use ssc_at for arbitrary s.
  std::map<std::uint64_t, std::uint64_t> ssc;
  std::uint64_t peak = 0;

  std::uint64_t ssc_at(std::uint64_t s) const;

  friend bool operator==(const CostReport&, const CostReport&) = default;
};

/// Sustained-space counts at each distinct nonzero size.
std::map<std::uint64_t, std::uint64_t> ssc_profile(const std::vector<std::uint64_t>& sizes);

CostReport cost_from_sizes(const std::vector<std::uint64_t>& sizes);

/// Cost over steps [from, to] (1-based, inclusive). Throws std::out_of_range
/// on an empty or out-of-bounds window.
CostReport cost(const Pebbling& p, std::size_t from, std::size_t to);
/// Cost over the whole pebbling.
CostReport cost(const Pebbling& p);

/// Whether the final configuration holds every sink of g.
bool pebbles_sinks(const Pebbling& p, const Dag& g);

}  // namespace mhf

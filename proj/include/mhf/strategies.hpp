#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "mhf/arena.hpp"

namespace mhf {

/// Pebbles `target` one node per step from the current configuration,
/// recomputing in ascending order every ancestor not currently held. A node
/// is dropped in the step its last pending child is placed unless keep(v).
std::vector<NodeSet> plan_recompute(const ArenaView& view, Node target,
                                    const std::function<bool(Node)>& keep);

/// Keeps every base node after pebbling them all; answers each challenge in
/// one step.
class GreedyFull final : public Strategy {
 public:
  std::string name() const override { return "greedy"; }
  void start(const DynamicGraphSpec& spec) override { n_ = spec.n_base; }
  std::vector<NodeSet> respond(std::size_t i, const ArenaView& view) override;

 private:
  std::size_t n_ = 0;
};

/// Keeps base nodes v with (v - 1) mod gap == 0 and recomputes everything
/// else on demand.
class Checkpoint final : public Strategy {
 public:
  /// Throws std::invalid_argument for gap < 1.
  explicit Checkpoint(std::size_t gap);
  std::string name() const override;
  void start(const DynamicGraphSpec& spec) override { n_ = spec.n_base; }
  std::vector<NodeSet> respond(std::size_t i, const ArenaView& view) override;
  std::size_t gap() const { return gap_; }

 private:
  std::size_t gap_;
  std::size_t n_ = 0;
};

/// Checkpoint with a single checkpoint at node 1 (gap = N).
class MinimalLine final : public Strategy {
 public:
  std::string name() const override { return "minimal"; }
  void start(const DynamicGraphSpec& spec) override;
  std::vector<NodeSet> respond(std::size_t i, const ArenaView& view) override;

 private:
  std::unique_ptr<Checkpoint> inner_;
};

/// Parses "greedy", "minimal" or "checkpoint:GAP". Throws
/// std::invalid_argument otherwise.
std::unique_ptr<Strategy> make_strategy(const std::string& description);

}  // namespace mhf

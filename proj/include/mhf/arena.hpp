#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mhf/constructions.hpp"
#include "mhf/pebbling.hpp"
#include "mhf/rng.hpp"

namespace mhf {

/// Supplies r(i) at the moment it is revealed.
class ChallengeSource {
 public:
  virtual ~ChallengeSource() = default;
  virtual Node draw(std::size_t i, std::size_t n_base) = 0;
  /// Sees each configuration after its legality check and before any reveal
  /// it triggers.
  virtual void observe(std::size_t step, const NodeSet& conf) { (void)step, (void)conf; }
};

/// r(i) uniform over [1..N], drawn in reveal order from one stream.
class UniformChallenges final : public ChallengeSource {
 public:
  explicit UniformChallenges(Seed seed) : rng_(seed) {}
  Node draw(std::size_t i, std::size_t n_base) override;

 private:
  Rng rng_;
};

/// Replays a fixed challenge sequence, e.g. one read off an evaluation.
class FixedChallenges final : public ChallengeSource {
 public:
  explicit FixedChallenges(std::vector<Node> r) : r_(std::move(r)) {}
  Node draw(std::size_t i, std::size_t n_base) override;

 private:
  std::vector<Node> r_;
};

/// What a strategy may look at: the static graph, the dynamic parents
/// revealed so far, and the current configuration.
class ArenaView {
 public:
  ArenaView(const DynamicGraphSpec& spec, std::span<const Node> revealed, const NodeSet& current,
            std::size_t step)
      : spec_(spec), revealed_(revealed), current_(current), step_(step) {}

  const DynamicGraphSpec& spec() const { return spec_; }
  std::span<const Node> revealed() const { return revealed_; }
  const NodeSet& current() const { return current_; }
  std::size_t step() const { return step_; }

  /// Parents of v in the graph as known so far: static parents plus r(i)
  /// for a revealed challenge node l_i.
  std::vector<Node> parents(Node v) const;

 private:
  const DynamicGraphSpec& spec_;
  std::span<const Node> revealed_;
  const NodeSet& current_;
  std::size_t step_;
};

/// A dynamic pebbling strategy. respond(0, ...) must end with node N pebbled;
/// respond(i, ...) for i >= 1 is called once r(i) is known and must end with
/// l_i pebbled. Every configuration of the returned sequence is charged.
class Strategy {
 public:
  virtual ~Strategy() = default;
  virtual std::string name() const = 0;
  virtual void start(const DynamicGraphSpec& spec) = 0;
  virtual std::vector<NodeSet> respond(std::size_t i, const ArenaView& view) = 0;
};

/// Raised when a strategy places a pebble illegally. `witness.missing_parent`
/// is 0 when the node's dynamic parent had not been revealed yet.
class IllegalStrategyMove : public std::runtime_error {
 public:
  IllegalStrategyMove(const std::string& what, LegalityViolation witness)
      : std::runtime_error(what), witness(witness) {}
  LegalityViolation witness;
};

struct ChallengeRecord {
  std::size_t i = 0;
  Node r = 0;
  /// Step at which l_i - 1 was first pebbled (r(i) revealed).
  std::size_t s = 0;
  /// Extra steps before l_i was first pebbled: first(l_i) - s - 1.
  std::size_t t = 0;
  /// |P_s| at the reveal.
  std::size_t size_at_reveal = 0;
};

struct DynamicRun {
  Pebbling pebbling;
  CostReport cost;
  std::vector<ChallengeRecord> challenges;
  std::vector<Node> dynamic_parents;
};

DynamicRun run_dynamic(const DynamicGraphSpec& spec, Strategy& strategy, ChallengeSource& source);
DynamicRun run_dynamic(const DynamicGraphSpec& spec, Strategy& strategy, Seed seed);

/// Cost restricted to the response windows (s_i, s_i + t_i + 1], i.e. from
/// the step after each reveal through the step that answers it.
CostReport response_window_cost(const DynamicRun& run);

}  // namespace mhf

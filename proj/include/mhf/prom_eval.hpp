#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mhf/arena.hpp"
#include "mhf/constructions.hpp"
#include "mhf/oracle.hpp"
#include "mhf/pebbling.hpp"

namespace mhf {

/// Fixed per-state overhead charged on top of the retained labels.
inline constexpr std::uint64_t kBookkeepingBits = 64;

/// 8-byte big-endian node id.
Bytes encode_node(Node v);

/// Raised when a label is needed before it was computed or after it was
/// dropped.
class EvaluationOrderError : public std::logic_error {
 public:
  EvaluationOrderError(Node node, Node missing)
      : std::logic_error("label of node " + std::to_string(missing) + " unavailable while evaluating node " +
                         std::to_string(node)),
        node(node),
        missing(missing) {}
  Node node;
  Node missing;
};

/// Labels by node id plus the set currently retained. Dropping a label
/// forgets its value; it can only come back by recomputation.
class LabelStore {
 public:
  explicit LabelStore(std::size_t n) : labels_(n + 1), computed_(n + 1, 0) {}

  void put(Node v, Bytes label);
  void drop(Node v);
  bool has(Node v) const { return v < labels_.size() && labels_[v].has_value(); }
  /// Throws EvaluationOrderError(for_node, v) when v is not retained.
  const Bytes& at(Node v, Node for_node = 0) const;
  std::size_t retained() const { return retained_; }
  /// Whether v was ever computed.
  bool computed(Node v) const { return v < computed_.size() && computed_[v]; }

 private:
  std::vector<std::optional<Bytes>> labels_;
  std::vector<char> computed_;
  std::size_t retained_ = 0;
};

/// enc(v) || 0x00 || parent labels ascending; a source uses the input x.
Bytes prelab_static(Node v, const LabelStore& store, const Dag& g, std::span<const std::uint8_t> x);

/// For a challenge node l_i: enc(l_i) || 0x01 || X_{l_i - 1} || X_{r(i)} with
/// r(i) derived from X_{l_i - 1}. Other nodes fall back to prelab_static on
/// spec.base.
Bytes prelab_dynamic(Node v, const LabelStore& store, const DynamicGraphSpec& spec, std::span<const std::uint8_t> x);

/// 1 + (label as a big-endian integer mod n).
Node challenge_from_label(std::span<const std::uint8_t> label, std::size_t n);

struct Round {
  std::vector<Bytes> queries;
  std::uint64_t retained = 0;
  std::uint64_t state_bits = 0;  ///< retained * w + kBookkeepingBits
};

/// Everything needed to re-derive labels: oracle, input and graph shape.
struct Trace {
  OracleConfig cfg;
  Bytes input;
  std::size_t n_base = 0;
  std::size_t n_chal = 0;
  std::vector<Round> rounds;
};

struct ChallengeLog {
  std::size_t i = 0;
  Node r = 0;
  /// Round in which X_{l_i - 1} was first computed.
  std::size_t s = 0;
  /// Rounds from s until prelabD(l_i) was first queried.
  std::size_t t = 0;
  friend bool operator==(const ChallengeLog&, const ChallengeLog&) = default;
};

struct EvalResult {
  Bytes digest;
  Trace trace;
  std::vector<ChallengeLog> challenges;
};

enum class Retention {
  Full,       ///< keep every base label through the challenge phase
  LowMemory,  ///< follow the minimal strategy: one checkpoint, recompute on demand
};

/// Sequential evaluation of f_G^H(x) = X_N, one query per round, keeping a
/// label while it has an unconsumed out-edge (and the output at the end).
/// Throws std::invalid_argument for an empty graph or N > 2^w.
EvalResult eval_imhf(const Dag& g, std::span<const std::uint8_t> x, const OracleConfig& cfg);

/// Honest dMHF evaluation; r(i) = 1 + (X_{l_i - 1} mod N).
EvalResult eval_dmhf(const DynamicGraphSpec& spec, std::span<const std::uint8_t> x, const OracleConfig& cfg,
                     Retention retention = Retention::Full);

/// Runs a pebbling strategy against label-derived challenges, executing its
/// moves as a memory schedule.
struct ScheduledEval {
  EvalResult eval;
  Pebbling schedule;
};
ScheduledEval strategy_driven_eval(const DynamicGraphSpec& spec, Strategy& strategy, std::span<const std::uint8_t> x,
                                   const OracleConfig& cfg);

/// Raised by pebbling_driven_eval on a placement whose parents' labels are
/// not retained.
class IllegalSchedule : public std::runtime_error {
 public:
  IllegalSchedule(const std::string& what, LegalityViolation witness)
      : std::runtime_error(what), witness(witness) {}
  LegalityViolation witness;
};

/// Executes p as a memory schedule: after round i exactly the labels of P_i
/// are retained, and each newly pebbled node costs one query. Throws
/// IllegalSchedule if p is not legal for the ex-post-facto graph, and
/// std::invalid_argument if p never computes the output node.
EvalResult pebbling_driven_eval(const Pebbling& p, const DynamicGraphSpec& spec, std::span<const std::uint8_t> x,
                                const OracleConfig& cfg);

/// spec.base plus the dynamic edges (r(i), l_i) resolved by an evaluation.
Dag ex_post_facto_graph(const DynamicGraphSpec& spec, const EvalResult& honest);
Dag ex_post_facto_graph(const DynamicGraphSpec& spec, std::span<const std::uint8_t> x, const OracleConfig& cfg);

struct Extraction {
  Pebbling pebbling;
  LegalityResult legality;
  /// first_query[v]: first round with a correct call for v, 0 if none.
  std::vector<std::size_t> first_query;
  std::size_t correct_calls = 0;
  std::size_t ignored_queries = 0;
};

/// Ex-post-facto pebbling: P_0 = {}; P_i adds every node whose true prelabel
/// is queried in round i, then drops carried-over nodes that are not
/// necessary (no later correct call reads their label before they are
/// recomputed). Throws std::invalid_argument if g is not the ex-post-facto
/// graph of the trace's input and oracle.
Extraction extract_pebbling(const Trace& trace, const Dag& g);

/// cc / ssc / peak over state_bits.
CostReport trace_cost(const Trace& trace);

/// Trace JSON: {rounds: [{queries, state_bits, retained}], digest, challenges,
/// hash, w, input, n_base, n_chal}.
std::string eval_to_json(const EvalResult& result);
EvalResult eval_from_json(const std::string& text);

}  // namespace mhf

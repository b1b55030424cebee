#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mhf/cc_exact.hpp"
#include "mhf/dag.hpp"
#include "mhf/rng.hpp"

namespace mhf {

enum class Verdict { Certified, Falsified, Inconclusive };
enum class Mode { Exhaustive, Greedy, Sampled };

std::string to_string(Verdict v);
std::string to_string(Mode m);
/// "exhaustive", "greedy" or "sampled"; throws std::invalid_argument.
Mode parse_mode(const std::string& text);

/// Outcome of a robustness check. Only exhaustive checks certify; a
/// falsified report always carries a witness that validate_witness accepts.
struct RobustnessReport {
  std::string property;  ///< "dr", "fdr", "ar" or "lexp"
  std::map<std::string, double> params;
  Verdict verdict = Verdict::Inconclusive;
  Mode mode = Mode::Exhaustive;
  std::optional<NodeSet> witness_set;  ///< removed set S
  std::optional<Node> witness_node;    ///< lexp: node v
  std::optional<std::size_t> witness_radius;  ///< lexp: k
  std::optional<NodeSet> witness_a;
  std::optional<NodeSet> witness_b;
  /// Property-specific measurement for the worst case seen: surviving depth
  /// (dr), deep-node count (fdr), hard-node count (ar).
  std::uint64_t measured = 0;
  std::uint64_t cases = 0;
};

struct CheckOptions {
  Seed seed{0};
  std::uint64_t trials = 1000;
  /// Exhaustive modes refuse (ResourceCapExceeded) past this many basic
  /// operations, roughly (number of cases) x (graph size).
  std::uint64_t work_cap = 400'000'000;
  /// Largest ancestor graph handed to the exact cc search.
  std::size_t cc_node_cap = 14;
  /// Largest radius k enumerated by the exhaustive local-expansion check.
  std::size_t max_k = 12;
};

/// (e,d)-depth-robustness: every S with |S| <= e leaves a path of d edges.
/// Throws std::invalid_argument unless e < N.
RobustnessReport check_depth_robust(const Dag& g, std::size_t e, std::size_t d, Mode mode,
                                    const CheckOptions& opts = {});

/// (e,d,f)-fractional depth-robustness: every S with |S| <= e leaves at
/// least f*N nodes of depth >= d in G - S.
RobustnessReport check_fractional_dr(const Dag& g, std::size_t e, std::size_t d, double f, Mode mode,
                                     const CheckOptions& opts = {});

/// (a,C,f)-ancestral robustness: every S with |S| <= a leaves at least f*N
/// nodes v with cc(Ancestors(v, G - S)) >= C. Large ancestor graphs are
/// judged by sound lower bounds only, which can leave the verdict
/// inconclusive.
RobustnessReport check_ancestral_robust(const Dag& g, std::size_t a, std::uint64_t C, double f, Mode mode,
                                        const CheckOptions& opts = {});

/// delta-local expansion with I_v(k) = [v-k+1..v], I*_v(k) = [v+1..v+k] and
/// sets of size ceil(delta*k), for 1 <= k <= min(v, N-v).
RobustnessReport check_local_expansion(const Dag& g, double delta, Mode mode, const CheckOptions& opts = {});

/// Re-checks a falsified report's witness against g.
bool validate_witness(const RobustnessReport& report, const Dag& g);

/// Nodes v with |[v-r+1..v] & S| <= c*r for r in [1..v] and
/// |[v..v+r-1] & S| <= c*r for r in [1..N-v+1].
NodeSet good_nodes(const Dag& g, const NodeSet& s, double c);

/// Smallest depth reachable by removing at most e nodes, when the branching
/// search finishes within `work_cap`; nullopt otherwise.
std::optional<std::size_t> min_depth_after_removal(const Dag& g, std::size_t e, std::uint64_t work_cap);

enum class Tri { Yes, No, Unknown };

/// Decides cc(g) >= C using, in order: cc >= N (every node is a sink or an
/// ancestor of one, so each is pebbled at least once), a cheap feasible
/// pebbling as an upper bound, the exact search for graphs up to
/// opts.cc_node_cap nodes, and cc > e*d for (e,d)-depth-robustness certified
/// by a bounded branching search.
Tri cc_at_least_bounded(const Dag& g, std::uint64_t C, const CheckOptions& opts = {});

/// Cost of the sequential pebbling that places nodes in order and drops each
/// node right after its last child; an upper bound on cc(g).
std::uint64_t sequential_pebbling_cost(const Dag& g);

struct Estimate {
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
  double frequency() const { return trials ? static_cast<double>(hits) / static_cast<double>(trials) : 0.0; }
  double lo = 0.0;  ///< Wilson 95% interval
  double hi = 0.0;
};

/// Wilson score interval for hits/trials at normal quantile z.
std::pair<double, double> wilson_interval(std::uint64_t hits, std::uint64_t trials, double z = 1.959963984540054);

/// Monte Carlo estimate of the probability that k uniform challenge nodes I
/// admit a set S, |S| <= e, chosen by a greedy ancestor-shrinking adversary,
/// such that the cc lower bound of Ancestors(I, G - S) stays below C.
Estimate sampled_interval_hardness(const Dag& g, std::size_t e, std::uint64_t C, std::size_t k,
                                   std::uint64_t trials, Seed seed, const CheckOptions& opts = {});

}  // namespace mhf

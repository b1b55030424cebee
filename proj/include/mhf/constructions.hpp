#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "mhf/dag.hpp"
#include "mhf/rng.hpp"

namespace mhf {

/// L_n: edges (i, i+1) for 1 <= i < n. Throws std::invalid_argument for n = 0.
Dag line_graph(std::size_t n);

/// One DRSample back-edge source for node v >= 2: pick a bucket i uniformly
/// from [1..ceil(log2 v)], then a parent uniformly from
/// [max(1, v - 2^i), v - max(1, 2^(i-1))].
Node drsample_parent(Node v, Rng& rng);

/// DRSample: the line 1 -> ... -> n plus one sampled back-edge per node.
/// In-degree at most 2. Throws std::invalid_argument for n < 2.
Dag drsample(std::size_t n, Seed seed);

/// Deterministic in-degree-2 layered graph: the full line plus bit-reversal
/// edges between consecutive layers, ceil(2/eps) layers of floor(n/L) nodes.
/// Stands in for the Grates family; robustness is measured, not assumed.
/// Throws std::invalid_argument unless 0 < eps < 1 and n >= 2.
Dag grates(std::size_t n, double eps);

/// reduce(DRSample(n) U Grates(n, eps)); 3n nodes when the union has
/// in-degree 3, in-degree at most 2.
Dag egsample(std::size_t n, double eps, Seed seed);

enum class ChallengeRule { Uniform };

std::string to_string(ChallengeRule rule);
ChallengeRule parse_challenge_rule(const std::string& text);

/// Dynamize(G, n_chal): G followed by a challenge line l_1..l_nchal
/// (l_i = N + i) bridged from N, each l_i owning one dynamic parent slot
/// filled uniformly from [1..N].
struct DynamicGraphSpec {
  Dag base;  ///< static part on N + n_chal nodes
  std::size_t n_base = 0;
  std::size_t n_chal = 0;
  ChallengeRule rule = ChallengeRule::Uniform;

  Node challenge_node(std::size_t i) const { return static_cast<Node>(n_base + i); }
  std::size_t total_nodes() const { return n_base + n_chal; }
  bool is_challenge_node(Node v) const { return v > n_base && v <= n_base + n_chal; }

  /// The underlying G on [1..N].
  Dag static_graph() const;

  /// Static graph with dynamic edges (r[i-1], l_i) added.
  /// Throws std::invalid_argument on a wrong count or out-of-range parent.
  Dag realize(std::span<const Node> dynamic_parents) const;
};

/// Throws std::invalid_argument for n_chal = 0 or an empty graph.
DynamicGraphSpec dynamize(const Dag& g, std::size_t n_chal);

/// Draws every r(i) uniformly from [1..N].
std::vector<Node> sample_challenges(const DynamicGraphSpec& spec, Seed seed);

/// A static instance of the dynamic graph with uniformly drawn dynamic parents.
Dag sample_dynamic(const DynamicGraphSpec& spec, Seed seed);

/// JSON spec file: {version, base_file, n_base, n_chal, rule}. base_file is
/// stored as given and resolved relative to the spec file's directory.
std::string spec_to_json(const DynamicGraphSpec& spec, const std::string& base_file);
void save_spec(const DynamicGraphSpec& spec, const std::string& base_file,
               const std::filesystem::path& path);
DynamicGraphSpec load_spec(const std::filesystem::path& path);

}  // namespace mhf

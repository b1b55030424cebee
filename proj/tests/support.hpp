#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "mhf/dag.hpp"
#include "mhf/rng.hpp"

namespace testsupport {

using mhf::Dag;
using mhf::Edge;
using mhf::Node;

// Each forward pair (u, v) kept independently with probability p.
inline Dag random_dag(std::size_t n, double p, mhf::Rng& rng) {
  std::vector<Edge> edges;
  for (Node v = 2; v <= n; ++v)
    for (Node u = 1; u < v; ++u)
      if (rng.unit() < p) edges.push_back({u, v});
  return Dag::from_edges(n, std::move(edges));
}

// Random DAG with in-degree at most k.
inline Dag random_bounded_dag(std::size_t n, std::size_t k, mhf::Rng& rng) {
  std::vector<Edge> edges;
  for (Node v = 2; v <= n; ++v) {
    const auto deg = rng.uniform(0, std::min<std::uint64_t>(k, v - 1));
    for (std::uint64_t j = 0; j < deg; ++j) edges.push_back({static_cast<Node>(rng.uniform(1, v - 1)), v});
  }
  return Dag::from_edges(n, std::move(edges));
}

// Calls f on every DAG over [1..n] (all 2^(n(n-1)/2) forward edge sets).
inline void for_each_dag(std::size_t n, const std::function<void(const Dag&)>& f) {
  std::vector<Edge> pairs;
  for (Node v = 2; v <= n; ++v)
    for (Node u = 1; u < v; ++u) pairs.push_back({u, v});
  const std::uint64_t total = std::uint64_t{1} << pairs.size();
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    std::vector<Edge> edges;
    for (std::size_t b = 0; b < pairs.size(); ++b)
      if (mask >> b & 1) edges.push_back(pairs[b]);
    f(Dag::from_edges(n, std::move(edges)));
  }
}

// Reachability matrix by repeated relaxation over the raw edge list.
inline std::vector<std::vector<bool>> reach_matrix(const Dag& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<bool>> r(n + 1, std::vector<bool>(n + 1, false));
  for (Node v = 1; v <= n; ++v) r[v][v] = true;
  bool changed = true;
  const auto edges = g.edges();
  while (changed) {
    changed = false;
    for (auto e : edges)
      for (Node x = 1; x <= n; ++x)
        if (r[x][e.from] && !r[x][e.to]) r[x][e.to] = changed = true;
  }
  return r;
}

}  // namespace testsupport

#include "mhf/cc_exact.hpp"

#include <algorithm>
#include <bit>
#include <optional>
#include <queue>
#include <unordered_map>

#include "mhf/errors.hpp"

namespace mhf {

namespace {

using Mask = std::uint64_t;

struct SmallGraph {
  std::size_t n = 0;
  std::vector<Mask> parents;   // index v-1
  std::vector<Mask> children;  // index v-1
  Mask sinks = 0;
};

SmallGraph to_small(const Dag& g) {
  SmallGraph s;
  s.n = g.node_count();
  s.parents.assign(s.n, 0);
  s.children.assign(s.n, 0);
  for (Node v = 1; v <= s.n; ++v) {
    for (Node u : g.parents(v)) {
      s.parents[v - 1] |= Mask{1} << (u - 1);
      s.children[u - 1] |= Mask{1} << (v - 1);
    }
  }
  for (std::size_t i = 0; i < s.n; ++i) {
    if (s.children[i] == 0) s.sinks |= Mask{1} << i;
  }
  return s;
}

// Lower bound on the remaining cost from configuration p.
//
// Nodes outside p that reach a missing sink along a p-avoiding path must all
// be pebbled again, each in a later step, and a longest chain of them needs
// one step per node. Sinks are never dropped once placed (an optimal pebbling
// can be normalized that way), so each held sink is paid in every step left.
std::uint64_t remaining_lower_bound(const SmallGraph& s, Mask p) {
  if ((p & s.sinks) == s.sinks) return 0;
  Mask need = 0;
  std::uint32_t chain[64];
  std::uint32_t longest = 0;
  for (std::size_t i = s.n; i-- > 0;) {
    const Mask bit = Mask{1} << i;
    if (p & bit) continue;
    std::uint32_t below = 0;
    bool needed = (s.sinks & bit) != 0;
    Mask kids = s.children[i] & need;
    if (kids) needed = true;
    while (kids) {
      const int c = std::countr_zero(kids);
      kids &= kids - 1;
      below = std::max(below, chain[c] + 1);
    }
    if (needed) {
      need |= bit;
      chain[i] = below;
      longest = std::max(longest, below);
    }
  }
  const std::uint64_t steps = longest + 1;
  const std::uint64_t held_sinks = std::popcount(p & s.sinks);
  return held_sinks * steps + std::max<std::uint64_t>(std::popcount(need), steps);
}

struct Entry {
  std::uint64_t f;
  std::uint64_t g;
  Mask mask;
  bool operator>(const Entry& o) const {
    if (f != o.f) return f > o.f;
    if (g != o.g) return g < o.g;
    return mask > o.mask;
  }
};

void check_cap(const Dag& g, std::size_t node_cap) {
  const std::size_t n = g.node_count();
  if (n > node_cap || n > 64) {
    throw ResourceCapExceeded("cc_exact: graph has " + std::to_string(n) +
                              " nodes, cap is " + std::to_string(std::min<std::size_t>(node_cap, 64)));
  }
}

// Best-first search. With `stop_at` set, returns as soon as every open state
// has a lower bound >= stop_at; result.cc then holds that bound and the
// witness stays empty.
CcExactResult search(const Dag& g, std::optional<std::uint64_t> stop_at) {
  const std::size_t n = g.node_count();
  CcExactResult result;
  if (n == 0) return result;

  const SmallGraph s = to_small(g);
  std::unordered_map<Mask, std::uint64_t> best;
  std::unordered_map<Mask, Mask> came_from;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;

  // Mask 0 only occurs as the start state: every transition adds a node.
  best[0] = 0;
  open.push({remaining_lower_bound(s, 0), 0, 0});

  while (!open.empty()) {
    const Entry cur = open.top();
    open.pop();
    auto it = best.find(cur.mask);
    if (it == best.end() || it->second < cur.g) continue;
    if (stop_at && cur.f >= *stop_at) {
      result.cc = cur.f;
      return result;
    }
    ++result.states_expanded;

    const Mask p = cur.mask;
    if (cur.mask != 0 && (p & s.sinks) == s.sinks) {
      result.cc = cur.g;
      std::vector<NodeSet> steps;
      for (Mask m = p; m != 0; m = came_from.at(m)) {
        std::vector<Node> nodes;
        for (Mask b = m; b; b &= b - 1) nodes.push_back(static_cast<Node>(std::countr_zero(b) + 1));
        steps.push_back(NodeSet::from_sorted(std::move(nodes)));
      }
      std::reverse(steps.begin(), steps.end());
      result.witness = Pebbling(std::move(steps));
      return result;
    }

    Mask avail = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const Mask bit = Mask{1} << i;
      if (!(p & bit) && (s.parents[i] & ~p) == 0) avail |= bit;
    }
    // New pebbles: every nonempty subset of the available nodes. A held
    // non-sink pebble is only removed in a step where one of its children is
    // newly placed (trailing unused holding can always be trimmed).
    for (Mask add = avail; add != 0; add = (add - 1) & avail) {
      Mask droppable = 0;
      for (Mask b = p & ~s.sinks; b; b &= b - 1) {
        const int i = std::countr_zero(b);
        if (s.children[i] & add) droppable |= Mask{1} << i;
      }
      Mask drop = droppable;
      while (true) {
        const Mask next = (p & ~drop) | add;
        const std::uint64_t ng = cur.g + std::popcount(next);
        auto [slot, inserted] = best.try_emplace(next, ng);
        if (inserted || ng < slot->second) {
          slot->second = ng;
          came_from[next] = p;
          open.push({ng + remaining_lower_bound(s, next), ng, next});
        }
        if (drop == 0) break;
        drop = (drop - 1) & droppable;
      }
    }
  }
  // Unreachable: pebbling every node in topological order always succeeds.
  throw std::logic_error("cc_exact: search exhausted without reaching the sinks");
}

}  // namespace

CcExactResult cc_exact_with_witness(const Dag& g, std::size_t node_cap) {
  check_cap(g, node_cap);
  return search(g, std::nullopt);
}

std::uint64_t cc_exact(const Dag& g, std::size_t node_cap) {
  return cc_exact_with_witness(g, node_cap).cc;
}

bool cc_at_least(const Dag& g, std::uint64_t target, std::size_t node_cap) {
  check_cap(g, node_cap);
  if (target == 0) return true;
  return search(g, target).cc >= target;
}

}  // namespace mhf

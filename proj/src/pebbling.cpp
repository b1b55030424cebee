#include "mhf/pebbling.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace mhf {

namespace {
const NodeSet kEmpty{};
}

const NodeSet& Pebbling::step(std::size_t i) const {
  if (i == 0) return kEmpty;
  if (i > steps_.size()) throw std::out_of_range("pebbling step " + std::to_string(i));
  return steps_[i - 1];
}

LegalityResult check_legal(const Pebbling& p, const Dag& g) {
  const std::size_t n = g.node_count();
  // held[v] == i means v is in P_i; steps are processed in order, so a
  // single stamp per node suffices.
  std::vector<std::size_t> held(n + 1, 0);
  for (std::size_t i = 1; i <= p.length(); ++i) {
    const NodeSet& cur = p.step(i);
    cur.check_within(n);
    for (Node v : cur) {
      if (held[v] == i - 1 && i > 1) continue;
      for (Node u : g.parents(v)) {
        if (i == 1 || held[u] != i - 1) {
          return {false, LegalityViolation{i, v, u}};
        }
      }
    }
    for (Node v : cur) held[v] = i;
  }
  return {};
}

std::uint64_t CostReport::ssc_at(std::uint64_t s) const {
  if (s == 0) return t;
  auto it = ssc.lower_bound(s);
  if (it == ssc.end()) return 0;
  // Missing thresholds between recorded ones share the next recorded count.
  return it->second;
}

std::map<std::uint64_t, std::uint64_t> ssc_profile(const std::vector<std::uint64_t>& sizes) {
  std::map<std::uint64_t, std::uint64_t> count;
  for (auto s : sizes)
    if (s > 0) ++count[s];
  // Suffix sums over the distinct sizes only.
  std::uint64_t above = 0;
  for (auto it = count.rbegin(); it != count.rend(); ++it) {
    above += it->second;
    it->second = above;
  }
  return count;
}

CostReport cost_from_sizes(const std::vector<std::uint64_t>& sizes) {
  CostReport r;
  r.t = sizes.size();
  for (auto s : sizes) {
    r.cc += s;
    r.peak = std::max(r.peak, s);
  }
  r.ssc = ssc_profile(sizes);
  return r;
}

CostReport cost(const Pebbling& p, std::size_t from, std::size_t to) {
  if (from < 1 || from > to || to > p.length()) {
    throw std::out_of_range("cost window [" + std::to_string(from) + "," + std::to_string(to) +
                            "] outside [1," + std::to_string(p.length()) + "]");
  }
  std::vector<std::uint64_t> sizes;
  sizes.reserve(to - from + 1);
  for (std::size_t i = from; i <= to; ++i) sizes.push_back(p.step(i).size());
  return cost_from_sizes(sizes);
}

CostReport cost(const Pebbling& p) {
  if (p.empty()) return {};
  return cost(p, 1, p.length());
}

bool pebbles_sinks(const Pebbling& p, const Dag& g) {
  if (p.empty()) return g.node_count() == 0;
  const NodeSet& last = p.step(p.length());
  for (Node s : g.sinks()) {
    if (!last.contains(s)) return false;
  }
  return true;
}

}  // namespace mhf

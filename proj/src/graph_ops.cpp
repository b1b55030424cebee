#include "mhf/graph_ops.hpp"

#include <algorithm>
#include <stdexcept>

namespace mhf {

NodeSet parents_of(const Dag& g, Node v) {
  auto ps = g.parents(v);
  return NodeSet::from_sorted({ps.begin(), ps.end()});
}

NodeSet ancestor_set(const Dag& g, const NodeSet& z) {
  z.check_within(g.node_count());
  std::vector<char> mark(g.node_count() + 1, 0);
  for (Node v : z) mark[v] = 1;
  // Parents precede children, so one descending sweep closes the set.
  for (Node v = z.empty() ? 0 : z.back(); v >= 1; --v) {
    if (!mark[v]) continue;
    for (Node p : g.parents(v)) mark[p] = 1;
  }
  std::vector<Node> out;
  for (Node v = 1; v <= g.node_count(); ++v) {
    if (mark[v]) out.push_back(v);
  }
  return NodeSet::from_sorted(std::move(out));
}

namespace {

Subgraph induced(const Dag& g, const std::vector<Node>& keep) {
  std::vector<Node> new_id(g.node_count() + 1, 0);
  for (std::size_t i = 0; i < keep.size(); ++i) new_id[keep[i]] = static_cast<Node>(i + 1);
  std::vector<std::vector<Node>> parents(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    for (Node p : g.parents(keep[i])) {
      if (new_id[p] != 0) parents[i].push_back(new_id[p]);
    }
  }
  return {Dag(std::move(parents), g.name()), keep};
}

}  // namespace

Subgraph ancestors_subgraph(const Dag& g, const NodeSet& z) {
  if (z.empty()) throw std::invalid_argument("ancestors_subgraph: empty target set");
  return induced(g, ancestor_set(g, z).values());
}

std::vector<std::size_t> node_depths(const Dag& g) {
  std::vector<std::size_t> d(g.node_count(), 0);
  for (Node v = 1; v <= g.node_count(); ++v) {
    std::size_t best = 0;
    for (Node p : g.parents(v)) best = std::max(best, d[p - 1] + 1);
    d[v - 1] = best;
  }
  return d;
}

std::size_t depth_of(const Dag& g, Node v) {
  if (v < 1 || v > g.node_count()) throw std::out_of_range("depth_of: node out of range");
  return node_depths(g)[v - 1];
}

std::size_t depth(const Dag& g) {
  auto d = node_depths(g);
  return d.empty() ? 0 : *std::max_element(d.begin(), d.end());
}

Subgraph remove_nodes(const Dag& g, const NodeSet& s) {
  s.check_within(g.node_count());
  std::vector<Node> keep;
  keep.reserve(g.node_count() - s.size());
  for (Node v = 1; v <= g.node_count(); ++v) {
    if (!s.contains(v)) keep.push_back(v);
  }
  return induced(g, keep);
}

Dag detach_nodes(const Dag& g, const NodeSet& s) {
  s.check_within(g.node_count());
  std::vector<char> gone(g.node_count() + 1, 0);
  for (Node v : s) gone[v] = 1;
  std::vector<std::vector<Node>> parents(g.node_count());
  for (Node v = 1; v <= g.node_count(); ++v) {
    if (gone[v]) continue;
    for (Node p : g.parents(v)) {
      if (!gone[p]) parents[v - 1].push_back(p);
    }
  }
  return Dag(std::move(parents), g.name());
}

Dag union_graphs(const Dag& a, const Dag& b) {
  if (a.node_count() != b.node_count()) {
    throw std::invalid_argument("union_graphs: node counts differ (" +
                                std::to_string(a.node_count()) + " vs " +
                                std::to_string(b.node_count()) + ")");
  }
  std::vector<std::vector<Node>> parents(a.node_count());
  for (Node v = 1; v <= a.node_count(); ++v) {
    auto pa = a.parents(v);
    auto pb = b.parents(v);
    auto& out = parents[v - 1];
    std::set_union(pa.begin(), pa.end(), pb.begin(), pb.end(), std::back_inserter(out));
  }
  return Dag(std::move(parents));
}

MetaParams::MetaParams(std::size_t m, std::size_t n) : m_(m) {
  if (m == 0 || m > n) {
    throw std::invalid_argument("metagraph: need 1 <= m <= N (m=" + std::to_string(m) +
                                ", N=" + std::to_string(n) + ")");
  }
  meta_count_ = n / m;
  first_ = std::max<std::size_t>(1, (m + 4) / 5);
  last_ = std::max<std::size_t>(1, m / 5);
}

Dag metagraph(const Dag& g, std::size_t m) {
  const MetaParams p(m, g.node_count());
  const std::size_t count = p.meta_count();

  std::vector<char> has_line(count + 1, 1);
  for (Node i = 1; i <= count; ++i) {
    for (Node x = p.interval_begin(i); x < p.interval_end(i); ++x) {
      if (!g.has_edge(x, x + 1)) {
        has_line[i] = 0;
        break;
      }
    }
  }

  std::vector<std::vector<Node>> parents(count);
  for (Node j = 1; j <= count; ++j) {
    if (!has_line[j]) continue;
    const Node first_begin = p.interval_begin(j);
    const Node first_end = static_cast<Node>(first_begin + p.first_part() - 1);
    auto& out = parents[j - 1];
    for (Node v = first_begin; v <= first_end; ++v) {
      for (Node u : g.parents(v)) {
        const Node i = static_cast<Node>((u - 1) / m + 1);
        if (i >= j || !has_line[i]) continue;
        if (u + p.last_part() > p.interval_end(i)) out.push_back(i);
      }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  return Dag(std::move(parents));
}

NodeSet to_meta(const NodeSet& s, const MetaParams& p) {
  std::vector<Node> out;
  for (Node v : s) {
    const std::size_t i = (v - 1) / p.m() + 1;
    if (i <= p.meta_count()) out.push_back(static_cast<Node>(i));
  }
  return NodeSet(std::move(out));
}

Subgraph reduce_indegree(const Dag& g) {
  const std::size_t n = g.node_count();
  const std::size_t delta = std::max<std::size_t>(1, g.indegree());
  std::vector<std::vector<Node>> parents(n * delta);
  std::vector<Node> to_original(n * delta);
  auto id = [delta](Node v, std::size_t j) { return static_cast<Node>((v - 1) * delta + j); };
  for (Node v = 1; v <= n; ++v) {
    auto ps = g.parents(v);
    for (std::size_t j = 1; j <= delta; ++j) {
      const Node me = id(v, j);
      to_original[me - 1] = v;
      auto& out = parents[me - 1];
      if (j <= ps.size()) out.push_back(id(ps[j - 1], delta));
      if (j > 1) out.push_back(me - 1);
      std::sort(out.begin(), out.end());
    }
  }
  return {Dag(std::move(parents)), std::move(to_original)};
}

long longest_path_between(const Dag& g, Node u, Node v) {
  if (u < 1 || v > g.node_count() || u > v) return -1;
  std::vector<long> best(g.node_count() + 1, -1);
  best[u] = 0;
  for (Node x = u + 1; x <= v; ++x) {
    for (Node p : g.parents(x)) {
      if (p >= u && best[p] >= 0) best[x] = std::max(best[x], best[p] + 1);
    }
  }
  return best[v];
}

}  // namespace mhf

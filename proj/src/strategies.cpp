#include "mhf/strategies.hpp"

#include <algorithm>
#include <stdexcept>

namespace mhf {

std::vector<NodeSet> plan_recompute(const ArenaView& view, Node target,
                                    const std::function<bool(Node)>& keep) {
  const std::size_t total = view.spec().total_nodes();
  std::vector<char> in_cur(total + 1, 0);
  for (Node v : view.current()) in_cur[v] = 1;
  if (in_cur[target]) return {};

  std::vector<char> needed(total + 1, 0);
  std::vector<std::vector<Node>> parents(total + 1);
  std::vector<Node> stack{target};
  std::vector<Node> order;
  needed[target] = 1;
  while (!stack.empty()) {
    const Node v = stack.back();
    stack.pop_back();
    order.push_back(v);
    parents[v] = view.parents(v);
    for (Node p : parents[v]) {
      if (!in_cur[p] && !needed[p]) {
        needed[p] = 1;
        stack.push_back(p);
      }
    }
  }
  std::sort(order.begin(), order.end());

  std::vector<std::uint32_t> uses(total + 1, 0);
  for (Node v : order)
    for (Node p : parents[v]) ++uses[p];

  std::vector<NodeSet> moves;
  moves.reserve(order.size());
  std::vector<Node> cur(view.current().begin(), view.current().end());
  for (Node x : order) {
    for (Node p : parents[x]) --uses[p];
    std::vector<Node> next;
    next.reserve(cur.size() + 1);
    for (Node y : cur) {
      if (uses[y] > 0 || keep(y)) next.push_back(y);
    }
    next.insert(std::lower_bound(next.begin(), next.end(), x), x);
    moves.push_back(NodeSet::from_sorted(next));
    cur = std::move(next);
  }
  return moves;
}

std::vector<NodeSet> GreedyFull::respond(std::size_t i, const ArenaView& view) {
  if (i == 0) {
    std::vector<NodeSet> moves;
    std::vector<Node> held;
    for (Node v = 1; v <= n_; ++v) {
      held.push_back(v);
      moves.push_back(NodeSet::from_sorted(held));
    }
    return moves;
  }
  const std::size_t n = n_;
  return plan_recompute(view, view.spec().challenge_node(i), [n](Node v) { return v <= n; });
}

Checkpoint::Checkpoint(std::size_t gap) : gap_(gap) {
  if (gap < 1) throw std::invalid_argument("checkpoint gap must be at least 1");
}

std::string Checkpoint::name() const { return "checkpoint:" + std::to_string(gap_); }

std::vector<NodeSet> Checkpoint::respond(std::size_t i, const ArenaView& view) {
  const std::size_t n = n_;
  const std::size_t gap = gap_;
  auto keep = [n, gap](Node v) { return v <= n && (v - 1) % gap == 0; };
  const Node target = i == 0 ? static_cast<Node>(n) : view.spec().challenge_node(i);
  return plan_recompute(view, target, keep);
}

void MinimalLine::start(const DynamicGraphSpec& spec) {
  inner_ = std::make_unique<Checkpoint>(spec.n_base);
  inner_->start(spec);
}

std::vector<NodeSet> MinimalLine::respond(std::size_t i, const ArenaView& view) {
  return inner_->respond(i, view);
}

std::unique_ptr<Strategy> make_strategy(const std::string& description) {
  if (description == "greedy" || description == "greedy_full") return std::make_unique<GreedyFull>();
  if (description == "minimal" || description == "minimal_line") return std::make_unique<MinimalLine>();
  const std::string prefix = "checkpoint:";
  if (description.rfind(prefix, 0) == 0) {
    const std::string gap = description.substr(prefix.size());
    std::size_t used = 0;
    long long value = 0;
    try {
      value = std::stoll(gap, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != gap.size() || gap.empty()) throw std::invalid_argument("bad checkpoint gap '" + gap + "'");
    if (value < 1) throw std::invalid_argument("checkpoint gap must be at least 1");
    return std::make_unique<Checkpoint>(static_cast<std::size_t>(value));
  }
  throw std::invalid_argument("unknown strategy '" + description + "'");
}

}  // namespace mhf

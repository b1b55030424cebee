#include "mhf/arena.hpp"

#include <algorithm>
#include <limits>

namespace mhf {

Node UniformChallenges::draw(std::size_t, std::size_t n_base) {
  return static_cast<Node>(rng_.uniform(1, n_base));
}

Node FixedChallenges::draw(std::size_t i, std::size_t) {
  if (i < 1 || i > r_.size()) throw std::out_of_range("no fixed challenge for index " + std::to_string(i));
  return r_[i - 1];
}

std::vector<Node> ArenaView::parents(Node v) const {
  auto ps = spec_.base.parents(v);
  std::vector<Node> out(ps.begin(), ps.end());
  if (spec_.is_challenge_node(v)) {
    const std::size_t i = v - spec_.n_base;
    if (i <= revealed_.size()) {
      const Node r = revealed_[i - 1];
      out.insert(std::lower_bound(out.begin(), out.end(), r), r);
      out.erase(std::unique(out.begin(), out.end()), out.end());
    }
  }
  return out;
}

DynamicRun run_dynamic(const DynamicGraphSpec& spec, Strategy& strategy, ChallengeSource& source) {
  constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max();
  const std::size_t n = spec.n_base;
  const std::size_t total = spec.total_nodes();
  strategy.start(spec);

  DynamicRun run;
  std::vector<std::size_t> held(total + 1, kNever);
  std::vector<std::size_t> first(total + 1, 0);
  std::vector<std::uint64_t> sizes;
  NodeSet current;
  std::size_t step = 0;

  for (std::size_t i = 0; i <= spec.n_chal; ++i) {
    const Node target = i == 0 ? static_cast<Node>(n) : spec.challenge_node(i);
    const ArenaView view(spec, run.dynamic_parents, current, step);
    std::vector<NodeSet> moves = strategy.respond(i, view);

    for (NodeSet& conf : moves) {
      ++step;
      conf.check_within(total);
      for (Node v : conf) {
        if (held[v] == step - 1) continue;
        auto fail = [&](Node missing) {
          throw IllegalStrategyMove(strategy.name() + ": illegal placement of node " + std::to_string(v) +
                                        " at step " + std::to_string(step),
                                    LegalityViolation{step, v, missing});
        };
        for (Node p : spec.base.parents(v)) {
          if (held[p] != step - 1) fail(p);
        }
        if (spec.is_challenge_node(v)) {
          const std::size_t j = v - n;
          if (j > run.dynamic_parents.size()) fail(0);
          const Node r = run.dynamic_parents[j - 1];
          if (held[r] != step - 1) fail(r);
        }
      }
      source.observe(step, conf);
      for (Node v : conf) {
        if (first[v] == 0) {
          first[v] = step;
          const std::size_t next = run.dynamic_parents.size() + 1;
          if (next <= spec.n_chal && v == spec.challenge_node(next) - 1) {
            const Node r = source.draw(next, n);
            if (r < 1 || r > n) throw std::out_of_range("challenge source produced node " + std::to_string(r));
            run.dynamic_parents.push_back(r);
            run.challenges.push_back({next, r, step, 0, conf.size()});
          }
        }
      }
      for (Node v : conf) held[v] = step;
      sizes.push_back(conf.size());
      current = conf;
      run.pebbling.push(std::move(conf));
    }
    if (step == 0 || held[target] != step) {
      throw std::logic_error(strategy.name() + ": response " + std::to_string(i) + " does not end with node " +
                             std::to_string(target) + " pebbled");
    }
  }

  for (auto& rec : run.challenges) rec.t = first[spec.challenge_node(rec.i)] - rec.s - 1;
  run.cost = cost_from_sizes(sizes);
  return run;
}

DynamicRun run_dynamic(const DynamicGraphSpec& spec, Strategy& strategy, Seed seed) {
  UniformChallenges source(seed);
  return run_dynamic(spec, strategy, source);
}

CostReport response_window_cost(const DynamicRun& run) {
  std::vector<std::uint64_t> sizes;
  for (const auto& rec : run.challenges) {
    for (std::size_t k = rec.s + 1; k <= rec.s + rec.t + 1; ++k) sizes.push_back(run.pebbling.step(k).size());
  }
  return cost_from_sizes(sizes);
}

}  // namespace mhf

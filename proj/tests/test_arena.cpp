#include <doctest.h>

#include <cmath>

#include "mhf/strategies.hpp"
#include "support.hpp"

using namespace mhf;

namespace {

// Sweeps the base with one pebble, then answers l_1 without holding r(1).
class Cheater final : public Strategy {
 public:
  std::string name() const override { return "cheater"; }
  void start(const DynamicGraphSpec& spec) override { n_ = spec.n_base; }
  std::vector<NodeSet> respond(std::size_t i, const ArenaView&) override {
    if (i == 0) {
      std::vector<NodeSet> moves;
      for (Node v = 1; v <= n_; ++v) moves.push_back(NodeSet{v});
      moves.push_back(NodeSet{static_cast<Node>(n_ + 1)});
      return moves;
    }
    return {};
  }

 private:
  std::size_t n_ = 0;
};

class Skipper final : public Strategy {
 public:
  std::string name() const override { return "skipper"; }
  void start(const DynamicGraphSpec&) override {}
  std::vector<NodeSet> respond(std::size_t, const ArenaView&) override { return {NodeSet{1}}; }
};

void check_run(const DynamicGraphSpec& spec, const DynamicRun& run) {
  const Dag realized = spec.realize(run.dynamic_parents);
  CHECK(check_legal(run.pebbling, realized).legal);
  CHECK(pebbles_sinks(run.pebbling, realized));
  CHECK(run.cost == cost(run.pebbling));
  REQUIRE(run.challenges.size() == spec.n_chal);
  for (std::size_t k = 0; k < run.challenges.size(); ++k) {
    const auto& rec = run.challenges[k];
    CHECK(rec.i == k + 1);
    CHECK(rec.r == run.dynamic_parents[k]);
    if (k > 0) CHECK(rec.s > run.challenges[k - 1].s);
    // l_i - 1 first appears at s; l_i first appears at s + t + 1.
    const Node prev = spec.challenge_node(rec.i) - 1;
    CHECK(run.pebbling.step(rec.s).contains(prev));
    for (std::size_t j = 1; j < rec.s; ++j) CHECK_FALSE(run.pebbling.step(j).contains(prev));
    CHECK(run.pebbling.step(rec.s + rec.t + 1).contains(spec.challenge_node(rec.i)));
    CHECK_FALSE(run.pebbling.step(rec.s + rec.t).contains(spec.challenge_node(rec.i)));
    CHECK(rec.size_at_reveal == run.pebbling.step(rec.s).size());
  }
}

}  // namespace

TEST_CASE("greedy_full answers every challenge immediately") {
  const auto spec = dynamize(line_graph(8), 8);
  GreedyFull greedy;
  const auto run = run_dynamic(spec, greedy, Seed{1});
  check_run(spec, run);
  for (const auto& rec : run.challenges) CHECK(rec.t == 0);
  CHECK(run.cost.ssc_at(8) >= spec.n_chal);
}

TEST_CASE("minimal_line never holds more than three pebbles") {
  for (std::size_t n : {8u, 32u, 100u}) {
    const auto spec = dynamize(line_graph(n), n);
    MinimalLine minimal;
    const auto run = run_dynamic(spec, minimal, Seed{n});
    check_run(spec, run);
    CHECK(run.cost.peak <= 3);
    // Recomputing from node 1 to r takes r - 1 extra steps.
    for (const auto& rec : run.challenges) CHECK(rec.t == rec.r - 1);
  }
}

TEST_CASE("checkpoint latency is the distance to the previous checkpoint") {
  const auto spec = dynamize(line_graph(512), 512);
  for (std::size_t gap : {1u, 3u, 16u}) {
    Checkpoint cp(gap);
    const auto run = run_dynamic(spec, cp, Seed{gap});
    check_run(spec, run);
    for (const auto& rec : run.challenges) CHECK(rec.t == (rec.r - 1) % gap);
    CHECK(run.cost.peak <= (512 + gap - 1) / gap + 2);
  }
  Checkpoint cp16(16);
  CHECK(run_dynamic(spec, cp16, Seed{2}).cost.cc <= 3ull * 512 * 512);
}

TEST_CASE("checkpoint mean latency over many challenges") {
  // Exact expectation for uniform r: (gap - 1) / 2.
  const auto spec = dynamize(line_graph(1024), 1024);
  for (std::size_t gap : {4u, 16u, 64u}) {
    Checkpoint cp(gap);
    double sum = 0;
    std::size_t count = 0;
    for (std::uint64_t s = 0; s < 2; ++s) {
      for (const auto& rec : run_dynamic(spec, cp, Seed{s}).challenges) {
        sum += static_cast<double>(rec.t);
        ++count;
      }
    }
    const double mean = sum / static_cast<double>(count);
    const double expect = (static_cast<double>(gap) - 1) / 2;
    const double sd = std::sqrt((static_cast<double>(gap * gap) - 1) / 12 / static_cast<double>(count));
    CHECK(std::abs(mean - expect) <= 4 * sd);
  }
}

TEST_CASE("strategies on general base graphs stay legal") {
  Rng rng(Seed{41});
  for (int trial = 0; trial < 10; ++trial) {
    const Dag g = egsample(24 + trial, 0.5, Seed{rng.next()});
    const auto spec = dynamize(g, 2 * g.node_count() / 3);
    for (const char* name : {"greedy", "minimal", "checkpoint:5"}) {
      auto strat = make_strategy(name);
      const auto run = run_dynamic(spec, *strat, Seed{rng.next()});
      check_run(spec, run);
    }
  }
}

TEST_CASE("challenge draws are uniform and replayable") {
  const auto spec = dynamize(line_graph(64), 64);
  GreedyFull greedy;
  std::vector<double> counts(65, 0);
  double total = 0;
  for (std::uint64_t s = 0; s < 400; ++s) {
    for (const auto& rec : run_dynamic(spec, greedy, Seed{s}).challenges) {
      counts[rec.r] += 1;
      total += 1;
    }
  }
  const double e = total / 64;
  double chi2 = 0;
  for (Node r = 1; r <= 64; ++r) chi2 += (counts[r] - e) * (counts[r] - e) / e;
  CHECK(chi2 < 103.442);

  const auto first = run_dynamic(spec, greedy, Seed{9});
  FixedChallenges replay(first.dynamic_parents);
  const auto again = run_dynamic(spec, greedy, replay);
  CHECK(again.pebbling == first.pebbling);
  CHECK(again.dynamic_parents == first.dynamic_parents);
}

TEST_CASE("arena rejects bad strategies") {
  const auto spec = dynamize(line_graph(6), 4);
  Cheater cheater;
  try {
    run_dynamic(spec, cheater, Seed{1});
    FAIL("expected IllegalStrategyMove");
  } catch (const IllegalStrategyMove& e) {
    CHECK(e.witness.node == 7);
    CHECK(e.witness.step == 7);
    CHECK(e.witness.missing_parent != 6);
  }
  Skipper skipper;
  CHECK_THROWS_AS(run_dynamic(spec, skipper, Seed{1}), std::logic_error);
  CHECK_THROWS_AS(make_strategy("checkpoint:0"), std::invalid_argument);
  CHECK_THROWS_AS(make_strategy("checkpoint:x"), std::invalid_argument);
  CHECK_THROWS_AS(make_strategy("bogus"), std::invalid_argument);
  CHECK(make_strategy("checkpoint:7")->name() == "checkpoint:7");
}

TEST_CASE("response window cost") {
  const auto spec = dynamize(line_graph(16), 16);
  MinimalLine minimal;
  const auto run = run_dynamic(spec, minimal, Seed{3});
  const auto win = response_window_cost(run);
  std::size_t steps = 0;
  for (const auto& rec : run.challenges) steps += rec.t + 1;
  CHECK(win.t == steps);
  CHECK(win.cc <= run.cost.cc);
}

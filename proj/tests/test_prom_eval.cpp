#include <doctest.h>

#include <set>

#include "mhf/prom_eval.hpp"
#include "mhf/strategies.hpp"
#include "support.hpp"

using namespace mhf;

namespace {

Bytes random_input(Rng& rng, std::size_t len = 16) {
  Bytes x(len);
  for (auto& b : x) b = static_cast<std::uint8_t>(rng.next());
  return x;
}

Bytes cat(std::initializer_list<Bytes> parts) {
  Bytes out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

Pebbling arena_pebbling(const DynamicGraphSpec& spec, const EvalResult& honest, Strategy& strat) {
  std::vector<Node> r;
  for (const auto& c : honest.challenges) r.push_back(c.r);
  FixedChallenges replay(r);
  return run_dynamic(spec, strat, replay).pebbling;
}

const OracleConfig kSha{};

}  // namespace

TEST_CASE("oracle vectors and configuration errors") {
  const std::string abc = "abc";
  const Bytes msg(abc.begin(), abc.end());
  CHECK(to_hex(Oracle(kSha)(msg)) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(to_hex(Oracle({128, "SHA256"})(msg)) == "ba7816bf8f01cfea414140de5dae2223");
  CHECK(to_hex(Oracle({128, "SHAKE256"})(Bytes{})) == "46b9dd2b0ba88d13233b3feb743eeb24");
  CHECK_THROWS_AS(Oracle({256, "NOPE"}), std::invalid_argument);
  CHECK_THROWS_AS(Oracle({12, "SHA256"}), std::invalid_argument);
  CHECK_THROWS_AS(Oracle({512, "SHA256"}), std::invalid_argument);
  CHECK(from_hex("00ff7A") == Bytes{0x00, 0xff, 0x7a});
  CHECK_THROWS_AS(from_hex("abc"), std::invalid_argument);
  CHECK_THROWS_AS(from_hex("zz"), std::invalid_argument);
  CHECK(encode_node(1) == Bytes{0, 0, 0, 0, 0, 0, 0, 1});
  CHECK(encode_node(0x0102) == Bytes{0, 0, 0, 0, 0, 0, 1, 2});
}

TEST_CASE("prelabels") {
  const Bytes x{0xde, 0xad};
  const Dag g = line_graph(3);
  LabelStore store(3);
  CHECK(prelab_static(1, store, g, x) == cat({encode_node(1), Bytes{0x00}, x}));
  CHECK_THROWS_AS(prelab_static(2, store, g, x), EvaluationOrderError);
  store.put(1, Bytes{7, 7});
  CHECK(prelab_static(2, store, g, x) == cat({encode_node(2), Bytes{0x00}, Bytes{7, 7}}));
  store.drop(1);
  CHECK_FALSE(store.has(1));
  CHECK(store.computed(1));
  CHECK(store.retained() == 0);
  CHECK(challenge_from_label(Bytes{0x01, 0x00}, 7) == 1 + 256 % 7);
  CHECK(challenge_from_label(Bytes(32, 0xff), 64) == 64);
}

TEST_CASE("iMHF on a two-node line unrolls to nested hashes") {
  const Bytes x{1, 2, 3};
  const Oracle h(kSha);
  const Bytes inner = h(cat({encode_node(1), Bytes{0}, x}));
  const Bytes outer = h(cat({encode_node(2), Bytes{0}, inner}));
  const auto res = eval_imhf(line_graph(2), x, kSha);
  CHECK(res.digest == outer);
  CHECK(res.trace.rounds.size() == 2);
  CHECK(eval_imhf(line_graph(2), x, kSha).digest == res.digest);
  CHECK_THROWS_AS(eval_imhf(line_graph(300), x, OracleConfig{8, "SHA256"}), std::invalid_argument);
}

TEST_CASE("iMHF retention matches the out-edge rule") {
  Rng rng(Seed{3});
  for (int t = 0; t < 30; ++t) {
    const Dag g = testsupport::random_dag(20, 0.2, rng);
    const auto res = eval_imhf(g, random_input(rng), kSha);
    const std::size_t n = g.node_count();
    for (Node j = 1; j <= n; ++j) {
      std::uint64_t expect = j == n ? 1 : 0;
      for (Node u = 1; u <= j; ++u) {
        if (u == n) continue;
        for (Node c : g.children(u))
          if (c > j) {
            ++expect;
            break;
          }
      }
      CHECK(res.trace.rounds[j - 1].retained == expect);
      CHECK(res.trace.rounds[j - 1].state_bits == expect * 256 + kBookkeepingBits);
    }
  }
  std::uint64_t peak = 0;
  for (const auto& r : eval_imhf(line_graph(50), Bytes{9}, kSha).trace.rounds) peak = std::max(peak, r.retained);
  CHECK(peak <= 2);
}

TEST_CASE("dMHF matches a hand-rolled evaluation") {
  const auto spec = dynamize(line_graph(4), 3);
  const Bytes x{42};
  const Oracle h(kSha);
  std::vector<Bytes> lab(8);
  lab[1] = h(cat({encode_node(1), Bytes{0}, x}));
  for (Node v = 2; v <= 4; ++v) lab[v] = h(cat({encode_node(v), Bytes{0}, lab[v - 1]}));
  std::vector<Node> r;
  for (Node v = 5; v <= 7; ++v) {
    // Big-endian value mod 4 from the last byte alone.
    const Node ri = 1 + lab[v - 1].back() % 4;
    r.push_back(ri);
    lab[v] = h(cat({encode_node(v), Bytes{1}, lab[v - 1], lab[ri]}));
  }
  const auto res = eval_dmhf(spec, x, kSha);
  CHECK(res.digest == lab[7]);
  REQUIRE(res.challenges.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(res.challenges[i].r == r[i]);
    CHECK(res.challenges[i].s == 4 + i);
    CHECK(res.challenges[i].t == 1);
  }
}

TEST_CASE("honest dMHF bookkeeping") {
  const std::size_t n = 256;
  const auto spec = dynamize(line_graph(n), n);
  Rng rng(Seed{5});
  const auto res = eval_dmhf(spec, random_input(rng), kSha);
  REQUIRE(res.trace.rounds.size() == 2 * n);
  for (std::size_t j = 1; j <= 2 * n; ++j) CHECK(res.trace.rounds[j - 1].retained == (j <= n ? j : n + 1));
  for (std::size_t k = 0; k < n; ++k) {
    CHECK(res.challenges[k].t == 1);
    CHECK(res.challenges[k].r >= 1);
    CHECK(res.challenges[k].r <= n);
    if (k) CHECK(res.challenges[k].s > res.challenges[k - 1].s);
  }
  // Full retention: sum_{j<=N} j + N_chal (N + 1) labels, plus bookkeeping.
  const auto cc = trace_cost(res.trace);
  const std::uint64_t labels = n * (n + 1) / 2 + n * (n + 1);
  CHECK(cc.cc == labels * 256 + 2 * n * kBookkeepingBits);
  CHECK(cc.peak == (n + 1) * 256 + kBookkeepingBits);
  CHECK(cc.t == 2 * n);

  // Labels are pairwise distinct.
  const Oracle h(kSha);
  std::set<Bytes> labels_seen;
  for (const auto& round : res.trace.rounds) labels_seen.insert(h(round.queries.at(0)));
  CHECK(labels_seen.size() == 2 * n);
}

TEST_CASE("challenges are uniform") {
  const auto spec = dynamize(line_graph(64), 64);
  Rng rng(Seed{6});
  std::vector<double> counts(65, 0);
  double total = 0;
  for (int t = 0; t < 200; ++t) {
    for (const auto& c : eval_dmhf(spec, random_input(rng), kSha).challenges) {
      counts[c.r] += 1;
      total += 1;
    }
  }
  const double e = total / 64;
  double chi2 = 0;
  for (Node r = 1; r <= 64; ++r) chi2 += (counts[r] - e) * (counts[r] - e) / e;
  CHECK(chi2 < 103.442);
}

TEST_CASE("ex-post-facto graph") {
  Rng rng(Seed{7});
  const Dag base = egsample(32, 0.5, Seed{1});
  const auto spec = dynamize(base, 40);
  const Bytes x = random_input(rng);
  const auto honest = eval_dmhf(spec, x, kSha);
  const Dag g = ex_post_facto_graph(spec, x, kSha);
  CHECK(g == ex_post_facto_graph(spec, honest));
  const std::size_t n = base.node_count();
  for (Node v = 1; v <= n; ++v) {
    auto a = g.parents(v);
    auto b = base.parents(v);
    CHECK(std::vector<Node>(a.begin(), a.end()) == std::vector<Node>(b.begin(), b.end()));
  }
  for (const auto& c : honest.challenges) CHECK(g.has_edge(c.r, spec.challenge_node(c.i)));
  CHECK(g.edge_count() <= base.edge_count() + 2 * 40);
}

TEST_CASE("pebbling-driven evaluation reproduces the honest digest") {
  Rng rng(Seed{8});
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t n = 32 + 16 * trial;
    const auto spec = trial % 2 ? dynamize(line_graph(n), n) : dynamize(egsample(n, 0.5, Seed{rng.next()}), n / 2);
    const Bytes x = random_input(rng);
    const auto honest = eval_dmhf(spec, x, kSha);

    GreedyFull greedy;
    const Pebbling pg = arena_pebbling(spec, honest, greedy);
    const auto rg = pebbling_driven_eval(pg, spec, x, kSha);
    CHECK(rg.digest == honest.digest);
    CHECK(rg.challenges == honest.challenges);
    CHECK(trace_cost(rg.trace).cc == trace_cost(honest.trace).cc);

    MinimalLine minimal;
    const Pebbling pm = arena_pebbling(spec, honest, minimal);
    const auto rm = pebbling_driven_eval(pm, spec, x, kSha);
    CHECK(rm.digest == honest.digest);
    // cmc = w * cc + bookkeeping per round.
    CHECK(trace_cost(rm.trace).cc == 256 * cost(pm).cc + pm.length() * kBookkeepingBits);
    std::size_t queries = 0;
    for (const auto& r : rm.trace.rounds) queries += r.queries.size();
    std::size_t new_nodes = 0;
    for (std::size_t i = 1; i <= pm.length(); ++i)
      for (Node v : pm.step(i)) new_nodes += !pm.step(i - 1).contains(v);
    CHECK(queries == new_nodes);
    for (std::size_t k = 0; k < rm.challenges.size(); ++k) CHECK(rm.challenges[k].r == honest.challenges[k].r);
    if (trial % 2) {
      std::uint64_t peak = 0;
      for (const auto& r : rm.trace.rounds) peak = std::max(peak, r.retained);
      CHECK(peak <= 3);
      // Base pass plus, per challenge, recomputation of 2..r and the answer.
      std::size_t expect = n;
      for (const auto& c : honest.challenges) expect += c.r;
      CHECK(queries == expect);
    }
  }
}

TEST_CASE("strategy-driven and low-memory evaluation") {
  Rng rng(Seed{9});
  const auto spec = dynamize(line_graph(64), 64);
  for (int t = 0; t < 5; ++t) {
    const Bytes x = random_input(rng);
    const auto honest = eval_dmhf(spec, x, kSha);
    const auto low = eval_dmhf(spec, x, kSha, Retention::LowMemory);
    CHECK(low.digest == honest.digest);
    for (const auto& r : low.trace.rounds) CHECK(r.retained <= 3);
    for (std::size_t k = 0; k < low.challenges.size(); ++k) {
      CHECK(low.challenges[k].r == honest.challenges[k].r);
      CHECK(low.challenges[k].t == low.challenges[k].r);
    }
    Checkpoint cp(8);
    const auto driven = strategy_driven_eval(spec, cp, x, kSha);
    CHECK(driven.eval.digest == honest.digest);
    CHECK(check_legal(driven.schedule, ex_post_facto_graph(spec, honest)).legal);
    CHECK(eval_to_json(pebbling_driven_eval(driven.schedule, spec, x, kSha)) == eval_to_json(driven.eval));
  }
}

TEST_CASE("a schedule built for other challenges is rejected") {
  Rng rng(Seed{10});
  const auto spec = dynamize(line_graph(64), 64);
  const Bytes x1 = random_input(rng);
  MinimalLine minimal;
  const Pebbling p = arena_pebbling(spec, eval_dmhf(spec, x1, kSha), minimal);
  int rejected = 0;
  for (int t = 0; t < 5; ++t) {
    try {
      pebbling_driven_eval(p, spec, random_input(rng), kSha);
    } catch (const IllegalSchedule& e) {
      ++rejected;
      CHECK(spec.is_challenge_node(e.witness.node));
    }
  }
  CHECK(rejected == 5);
  Pebbling partial;
  partial.push(NodeSet{1});
  CHECK_THROWS_AS(pebbling_driven_eval(partial, spec, x1, kSha), std::invalid_argument);
}

TEST_CASE("extraction from honest and schedule traces") {
  Rng rng(Seed{11});
  for (int t = 0; t < 6; ++t) {
    const std::size_t n = 24 + 8 * t;
    const auto spec = t % 2 ? dynamize(line_graph(n), n) : dynamize(egsample(n, 0.5, Seed{rng.next()}), n);
    const Bytes x = random_input(rng);
    const auto honest = eval_dmhf(spec, x, kSha);
    const Dag g = ex_post_facto_graph(spec, honest);
    const std::size_t total = spec.total_nodes();

    const auto ex = extract_pebbling(honest.trace, g);
    CHECK(ex.legality.legal);
    CHECK(ex.correct_calls == total);
    CHECK(ex.ignored_queries == 0);
    for (Node v = 1; v <= total; ++v) {
      CHECK(ex.first_query[v] == v);
      std::size_t first = 0;
      for (std::size_t i = 1; i <= ex.pebbling.length() && !first; ++i)
        if (ex.pebbling.step(i).contains(v)) first = i;
      CHECK(first == ex.first_query[v]);
    }
    for (std::size_t i = 1; i <= ex.pebbling.length(); ++i)
      CHECK(ex.pebbling.step(i).size() <= honest.trace.rounds[i - 1].retained);

    MinimalLine minimal;
    const Pebbling pm = arena_pebbling(spec, honest, minimal);
    const auto rm = pebbling_driven_eval(pm, spec, x, kSha);
    const auto exm = extract_pebbling(rm.trace, g);
    CHECK(exm.legality.legal);
    for (std::size_t i = 1; i <= exm.pebbling.length(); ++i) {
      CHECK(exm.pebbling.step(i).size() <= rm.trace.rounds[i - 1].retained);
      for (Node v : exm.pebbling.step(i)) CHECK(pm.step(i).contains(v));
    }
    CHECK(exm.pebbling.step(exm.pebbling.length()).contains(static_cast<Node>(total)));
  }
}

TEST_CASE("extraction ignores junk and rejects a wrong graph") {
  const auto spec = dynamize(line_graph(16), 16);
  const Bytes x{5};
  auto honest = eval_dmhf(spec, x, kSha);
  const Dag g = ex_post_facto_graph(spec, honest);
  honest.trace.rounds[3].queries.push_back(Bytes{1, 2, 3});
  const auto ex = extract_pebbling(honest.trace, g);
  CHECK(ex.ignored_queries == 1);
  CHECK(ex.legality.legal);
  std::vector<Node> wrong;
  for (const auto& c : honest.challenges) wrong.push_back(c.r % 16 + 1);
  CHECK_THROWS_AS(extract_pebbling(honest.trace, spec.realize(wrong)), std::invalid_argument);
  CHECK_THROWS_AS(extract_pebbling(honest.trace, line_graph(5)), std::invalid_argument);
}

TEST_CASE("trace cost and JSON") {
  CHECK(trace_cost(Trace{}).cc == 0);
  const auto spec = dynamize(egsample(24, 0.5, Seed{2}), 12);
  const auto res = eval_dmhf(spec, Bytes{1, 2}, kSha, Retention::LowMemory);
  const auto c = trace_cost(res.trace);
  for (std::uint64_t s : {1ull, 64ull, 300ull, 1000ull, 5000ull}) CHECK(c.cc >= s * c.ssc_at(s));
  const std::string text = eval_to_json(res);
  const auto back = eval_from_json(text);
  CHECK(eval_to_json(back) == text);
  CHECK(back.digest == res.digest);
  CHECK(back.challenges == res.challenges);
  CHECK_THROWS_AS(eval_from_json("{}"), std::invalid_argument);
  CHECK_THROWS_AS(eval_from_json("not json"), std::invalid_argument);
}

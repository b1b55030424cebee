#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "mhf/constructions.hpp"
#include "mhf/dag_io.hpp"
#include "mhf/graph_ops.hpp"

using namespace mhf;

namespace {

// Chi-square critical values at significance 1e-3 for df = 63 and df = 9.
constexpr double kChi2_63 = 103.442;
constexpr double kChi2_9 = 27.877;

bool has_full_line(const Dag& g) {
  for (Node v = 2; v <= g.node_count(); ++v)
    if (!g.has_edge(v - 1, v)) return false;
  return true;
}

// Exact Pr[r(v) = u] for the two-stage bucket sampler, recomputed from the
// bucket bounds.
std::vector<double> drs_distribution(std::uint64_t v) {
  std::vector<double> pr(v, 0.0);
  if (v == 2) {
    pr[1] = 1.0;
    return pr;
  }
  std::uint64_t buckets = 0;
  while ((std::uint64_t{1} << buckets) < v) ++buckets;
  for (std::uint64_t i = 1; i <= buckets; ++i) {
    const std::int64_t lo = std::max<std::int64_t>(1, static_cast<std::int64_t>(v) - (std::int64_t{1} << i));
    const std::int64_t hi = static_cast<std::int64_t>(v) - std::max<std::int64_t>(1, std::int64_t{1} << (i - 1));
    for (std::int64_t u = lo; u <= hi; ++u) pr[u] += 1.0 / buckets / static_cast<double>(hi - lo + 1);
  }
  return pr;
}

}  // namespace

TEST_CASE("line_graph") {
  CHECK(line_graph(1).edge_count() == 0);
  CHECK(line_graph(4).edges() == std::vector<Edge>{{1, 2}, {2, 3}, {3, 4}});
  CHECK_THROWS_AS(line_graph(0), std::invalid_argument);
}

TEST_CASE("drsample structure") {
  CHECK_THROWS_AS(drsample(1, Seed{0}), std::invalid_argument);
  const Dag two = drsample(2, Seed{1});
  CHECK(two.edges() == std::vector<Edge>{{1, 2}});
  CHECK(two.indegree() == 1);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Dag g = drsample(300, Seed{s});
    CHECK(g.indegree() <= 2);
    CHECK(has_full_line(g));
  }
  CHECK(drsample(500, Seed{9}) == drsample(500, Seed{9}));
  CHECK_FALSE(drsample(500, Seed{9}) == drsample(500, Seed{10}));
}

TEST_CASE("drsample parent support is exactly [1, v-1]") {
  for (Node v : {2u, 3u, 4u, 5u, 9u, 17u, 100u}) {
    Rng rng(Seed{v});
    std::vector<int> seen(v, 0);
    for (int k = 0; k < 20000; ++k) {
      const Node r = drsample_parent(v, rng);
      REQUIRE(r >= 1);
      REQUIRE(r < v);
      seen[r] = 1;
    }
    for (Node u = 1; u < v; ++u) CHECK(seen[u] == 1);
  }
}

TEST_CASE("drsample parent distribution matches the bucket law") {
  const Node v = 1024;
  const auto pr = drs_distribution(v);
  // Bucket k collects distances v - r in (2^(k-1), 2^k]; bucket 0 is distance 1.
  std::vector<double> expect(11, 0.0);
  std::vector<double> seen(11, 0.0);
  auto bucket = [](std::uint64_t dist) {
    int k = 0;
    while ((std::uint64_t{1} << k) < dist) ++k;
    return k;
  };
  for (Node u = 1; u < v; ++u) expect[bucket(v - u)] += pr[u];
  Rng rng(Seed{77});
  const int draws = 100000;
  for (int k = 0; k < draws; ++k) seen[bucket(v - drsample_parent(v, rng))] += 1;
  double chi2 = 0.0;
  for (int k = 0; k <= 10; ++k) {
    const double e = expect[k] * draws;
    if (e == 0) {
      CHECK(seen[k] == 0);
      continue;
    }
    chi2 += (seen[k] - e) * (seen[k] - e) / e;
    // Multinomial 3-sigma per bucket.
    CHECK(std::abs(seen[k] - e) <= 3 * std::sqrt(e * (1 - expect[k])));
  }
  CHECK(chi2 < kChi2_9);
}

TEST_CASE("drsample parent probability against the 1/((v-u) log v) bound") {
  // The sampler meets the bound up to a constant factor; see the README.
  double worst = 1e9;
  for (std::uint64_t v = 3; v <= 600; ++v) {
    const auto pr = drs_distribution(v);
    double total = 0;
    for (std::uint64_t u = 1; u < v; ++u) total += pr[u];
    CHECK(total == doctest::Approx(1.0));
    for (std::uint64_t u = 1; u + 1 < v; ++u) {
      const double bound = 1.0 / (static_cast<double>(v - u) * std::log2(static_cast<double>(v)));
      worst = std::min(worst, pr[u] / bound);
    }
  }
  CHECK(worst >= 0.5);
  CHECK(worst < 1.0);
}

TEST_CASE("grates") {
  CHECK_THROWS_AS(grates(16, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(grates(16, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(grates(1, 0.5), std::invalid_argument);
  for (std::size_t n : {2u, 3u, 4u, 7u, 64u, 255u, 256u, 1000u})
    for (double eps : {0.05, 0.3, 0.5, 0.9}) {
      const Dag g = grates(n, eps);
      CHECK(g.node_count() == n);
      CHECK(g.indegree() <= 2);
      CHECK(has_full_line(g));
    }
  CHECK(grates(256, 0.5) == grates(256, 0.5));
  // eps = 0.5: 4 layers of 64; node 65 + p has extra parent bitrev6(p) + 1.
  const Dag g = grates(256, 0.5);
  CHECK(g.has_edge(1, 65));
  CHECK(g.has_edge(33, 66));
  CHECK(g.has_edge(17, 67));
  CHECK(g.has_edge(64 + 2, 129 + 32));
}

TEST_CASE("egsample") {
  const Dag g = egsample(64, 0.5, Seed{5});
  CHECK(g.indegree() <= 2);
  const std::size_t delta = union_graphs(drsample(64, Seed{5}), grates(64, 0.5)).indegree();
  CHECK(g.node_count() == delta * 64);
  if (delta == 3) CHECK(g.node_count() == 192);
  CHECK(egsample(64, 0.5, Seed{5}) == g);
  int threes = 0;
  for (std::uint64_t s = 0; s < 10; ++s)
    threes += union_graphs(drsample(64, Seed{s}), grates(64, 0.5)).indegree() == 3;
  CHECK(threes == 10);
}

TEST_CASE("dynamize") {
  const std::size_t n = 8;
  const auto spec = dynamize(line_graph(n), n);
  CHECK(spec.base.node_count() == 2 * n);
  CHECK(spec.base == line_graph(2 * n));
  CHECK(spec.challenge_node(1) == n + 1);
  CHECK(spec.base.parents(n + 1).size() == 1);
  CHECK(spec.base.parents(n + 1)[0] == n);
  CHECK(spec.static_graph() == line_graph(n));
  CHECK_THROWS_AS(dynamize(line_graph(4), 0), std::invalid_argument);

  const Dag eg = egsample(32, 0.5, Seed{2});
  const auto ds = dynamize(eg, 10);
  CHECK(ds.static_graph() == eg);
  CHECK(ds.base.node_count() == eg.node_count() + 10);
  CHECK_THROWS_AS(ds.realize(std::vector<Node>(9, 1)), std::invalid_argument);
  CHECK_THROWS_AS(ds.realize(std::vector<Node>(10, 0)), std::invalid_argument);
}

TEST_CASE("sample_dynamic") {
  const auto spec = dynamize(line_graph(64), 64);
  const Dag a = sample_dynamic(spec, Seed{1});
  CHECK(a == sample_dynamic(spec, Seed{1}));
  for (std::size_t i = 1; i <= 64; ++i) {
    auto ps = a.parents(spec.challenge_node(i));
    CHECK(ps.size() >= 1);
    CHECK(ps.back() == spec.challenge_node(i) - 1);
  }
  std::vector<double> counts(65, 0.0);
  std::size_t total = 0;
  for (std::uint64_t s = 0; total < 100000; ++s) {
    for (Node r : sample_challenges(spec, Seed{s})) {
      REQUIRE(r >= 1);
      REQUIRE(r <= 64);
      counts[r] += 1;
      ++total;
    }
  }
  const double e = static_cast<double>(total) / 64;
  double chi2 = 0;
  for (Node r = 1; r <= 64; ++r) chi2 += (counts[r] - e) * (counts[r] - e) / e;
  CHECK(chi2 < kChi2_63);
}

TEST_CASE("spec files") {
  const auto dir = std::filesystem::temp_directory_path() / "mhf_spec_test";
  std::filesystem::create_directories(dir);
  const Dag g = drsample(40, Seed{3});
  save_dagv1(g, dir / "g.dag");
  const auto spec = dynamize(g, 12);
  save_spec(spec, "g.dag", dir / "g.spec.json");
  const auto back = load_spec(dir / "g.spec.json");
  CHECK(back.base == spec.base);
  CHECK(back.n_base == 40);
  CHECK(back.n_chal == 12);
  CHECK(back.rule == ChallengeRule::Uniform);
  {
    std::ofstream bad(dir / "bad.json");
    bad << R"({"version":1,"base_file":"g.dag","n_base":41,"n_chal":3,"rule":"uniform"})";
  }
  CHECK_THROWS_AS(load_spec(dir / "bad.json"), std::runtime_error);
  CHECK_THROWS_AS(load_spec(dir / "missing.json"), std::runtime_error);
  std::filesystem::remove_all(dir);
}

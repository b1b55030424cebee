#include "mhf/constructions.hpp"

#include <bit>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mhf/dag_io.hpp"
#include "mhf/graph_ops.hpp"

namespace mhf {

namespace {

std::uint64_t ceil_log2(std::uint64_t v) { return v <= 1 ? 0 : std::bit_width(v - 1); }

std::uint64_t bit_reverse(std::uint64_t x, unsigned bits) {
  std::uint64_t r = 0;
  for (unsigned i = 0; i < bits; ++i) {
    r = (r << 1) | (x & 1);
    x >>= 1;
  }
  return r;
}

}  // namespace

Dag line_graph(std::size_t n) {
  if (n == 0) throw std::invalid_argument("line_graph: n must be positive");
  std::vector<std::vector<Node>> parents(n);
  for (std::size_t v = 2; v <= n; ++v) parents[v - 1] = {static_cast<Node>(v - 1)};
  return Dag(std::move(parents), "line");
}

Node drsample_parent(Node v, Rng& rng) {
  if (v < 2) throw std::invalid_argument("drsample_parent: v must be at least 2");
  if (v == 2) return 1;
  const std::uint64_t buckets = ceil_log2(v);
  const std::uint64_t i = rng.uniform(1, buckets);
  const std::uint64_t far = std::uint64_t{1} << i;
  const std::uint64_t near = std::max<std::uint64_t>(1, far >> 1);
  const std::uint64_t lo = far >= v ? 1 : std::max<std::uint64_t>(1, v - far);
  const std::uint64_t hi = v - near;
  return static_cast<Node>(rng.uniform(lo, hi));
}

Dag drsample(std::size_t n, Seed seed) {
  if (n < 2) throw std::invalid_argument("drsample: n must be at least 2");
  Rng rng(seed);
  std::vector<Edge> edges;
  edges.reserve(2 * n);
  for (Node v = 2; v <= n; ++v) {
    edges.push_back({v - 1, v});
    edges.push_back({drsample_parent(v, rng), v});
  }
  return Dag::from_edges(n, std::move(edges), "drsample");
}

Dag grates(std::size_t n, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("grates: eps must lie in (0,1)");
  if (n < 2) throw std::invalid_argument("grates: n must be at least 2");
  const std::size_t layers = std::min<std::size_t>(n, static_cast<std::size_t>(std::ceil(2.0 / eps)));
  const std::size_t width = n / layers;
  const auto bits = static_cast<unsigned>(ceil_log2(width));

  std::vector<Edge> edges;
  edges.reserve(2 * n);
  for (Node v = 2; v <= n; ++v) edges.push_back({v - 1, v});
  for (std::size_t k = 1; k < layers; ++k) {
    const std::size_t prev = (k - 1) * width;
    const std::size_t cur = k * width;
    for (std::size_t p = 0; p < width; ++p) {
      const std::uint64_t src = bit_reverse(p, bits);
      if (src >= width) continue;
      edges.push_back({static_cast<Node>(prev + src + 1), static_cast<Node>(cur + p + 1)});
    }
  }
  return Dag::from_edges(n, std::move(edges), "grates");
}

Dag egsample(std::size_t n, double eps, Seed seed) {
  return reduce_indegree(union_graphs(drsample(n, seed), grates(n, eps))).graph.with_name("egsample");
}

std::string to_string(ChallengeRule rule) {
  switch (rule) {
    case ChallengeRule::Uniform:
      return "uniform";
  }
  throw std::invalid_argument("unknown challenge rule");
}

ChallengeRule parse_challenge_rule(const std::string& text) {
  if (text == "uniform") return ChallengeRule::Uniform;
  throw std::invalid_argument("unknown challenge rule '" + text + "'");
}

Dag DynamicGraphSpec::static_graph() const {
  std::vector<std::vector<Node>> parents(n_base);
  for (Node v = 1; v <= n_base; ++v) {
    auto ps = base.parents(v);
    parents[v - 1].assign(ps.begin(), ps.end());
  }
  return Dag(std::move(parents), base.name());
}

Dag DynamicGraphSpec::realize(std::span<const Node> dynamic_parents) const {
  if (dynamic_parents.size() != n_chal) {
    throw std::invalid_argument("realize: expected " + std::to_string(n_chal) + " dynamic parents, got " +
                                std::to_string(dynamic_parents.size()));
  }
  std::vector<Edge> edges = base.edges();
  for (std::size_t i = 1; i <= n_chal; ++i) {
    const Node r = dynamic_parents[i - 1];
    if (r < 1 || r > n_base) {
      throw std::invalid_argument("realize: dynamic parent " + std::to_string(r) + " outside [1," +
                                  std::to_string(n_base) + "]");
    }
    edges.push_back({r, challenge_node(i)});
  }
  return Dag::from_edges(total_nodes(), std::move(edges), base.name());
}

DynamicGraphSpec dynamize(const Dag& g, std::size_t n_chal) {
  if (n_chal == 0) throw std::invalid_argument("dynamize: n_chal must be positive");
  const std::size_t n = g.node_count();
  if (n == 0) throw std::invalid_argument("dynamize: empty base graph");
  std::vector<std::vector<Node>> parents(n + n_chal);
  for (Node v = 1; v <= n; ++v) {
    auto ps = g.parents(v);
    parents[v - 1].assign(ps.begin(), ps.end());
  }
  for (std::size_t i = 1; i <= n_chal; ++i) parents[n + i - 1] = {static_cast<Node>(n + i - 1)};
  DynamicGraphSpec spec;
  spec.base = Dag(std::move(parents), g.name());
  spec.n_base = n;
  spec.n_chal = n_chal;
  return spec;
}

std::vector<Node> sample_challenges(const DynamicGraphSpec& spec, Seed seed) {
  Rng rng(seed);
  std::vector<Node> r(spec.n_chal);
  for (auto& x : r) x = static_cast<Node>(rng.uniform(1, spec.n_base));
  return r;
}

Dag sample_dynamic(const DynamicGraphSpec& spec, Seed seed) {
  return spec.realize(sample_challenges(spec, seed));
}

std::string spec_to_json(const DynamicGraphSpec& spec, const std::string& base_file) {
  nlohmann::json j;
  j["version"] = 1;
  j["base_file"] = base_file;
  j["n_base"] = spec.n_base;
  j["n_chal"] = spec.n_chal;
  j["rule"] = to_string(spec.rule);
  return j.dump(2) + "\n";
}

void save_spec(const DynamicGraphSpec& spec, const std::string& base_file,
               const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << spec_to_json(spec, base_file);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

DynamicGraphSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
    if (j.at("version").get<int>() != 1) throw std::runtime_error("unsupported spec version");
    std::filesystem::path base = j.at("base_file").get<std::string>();
    if (base.is_relative()) base = path.parent_path() / base;
    const Dag g = load_dagv1(base);
    const auto n_base = j.at("n_base").get<std::size_t>();
    if (g.node_count() != n_base) {
      throw std::runtime_error("n_base " + std::to_string(n_base) + " does not match " + base.string() +
                               " (" + std::to_string(g.node_count()) + " nodes)");
    }
    DynamicGraphSpec spec = dynamize(g, j.at("n_chal").get<std::size_t>());
    spec.rule = parse_challenge_rule(j.at("rule").get<std::string>());
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

}  // namespace mhf

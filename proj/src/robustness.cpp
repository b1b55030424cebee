#include "mhf/robustness.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "mhf/dag_io.hpp"
#include "mhf/errors.hpp"
#include "mhf/graph_ops.hpp"

namespace mhf {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Certified:
      return "certified";
    case Verdict::Falsified:
      return "falsified";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

std::string to_string(Mode m) {
  switch (m) {
    case Mode::Exhaustive:
      return "exhaustive";
    case Mode::Greedy:
      return "greedy";
    case Mode::Sampled:
      return "sampled";
  }
  return "?";
}

Mode parse_mode(const std::string& text) {
  if (text == "exhaustive") return Mode::Exhaustive;
  if (text == "greedy") return Mode::Greedy;
  if (text == "sampled") return Mode::Sampled;
  throw std::invalid_argument("unknown mode '" + text + "'");
}

namespace {

using Mask = std::vector<char>;

class Budget {
 public:
  Budget(std::uint64_t cap, std::string what) : left_(cap), what_(std::move(what)) {}
  void charge(std::uint64_t work) {
    if (work > left_) throw ResourceCapExceeded(what_ + ": work cap exceeded");
    left_ -= work;
  }

 private:
  std::uint64_t left_;
  std::string what_;
};

std::uint64_t graph_size(const Dag& g) { return g.node_count() + g.edge_count() + 1; }

// Longest path in G with `gone` removed; returns its length in edges (-1 if
// every node is gone) and fills `path` with its nodes in order.
long longest_path(const Dag& g, const Mask& gone, std::vector<Node>* path) {
  const std::size_t n = g.node_count();
  std::vector<long> f(n + 1, -1);
  std::vector<Node> pred(n + 1, 0);
  long best = -1;
  Node end = 0;
  for (Node v = 1; v <= n; ++v) {
    if (gone[v]) continue;
    f[v] = 0;
    for (Node p : g.parents(v)) {
      if (!gone[p] && f[p] + 1 > f[v]) {
        f[v] = f[p] + 1;
        pred[v] = p;
      }
    }
    if (f[v] > best) {
      best = f[v];
      end = v;
    }
  }
  if (path) {
    path->clear();
    for (Node v = end; v != 0; v = pred[v]) path->push_back(v);
    std::reverse(path->begin(), path->end());
  }
  return best;
}

std::vector<long> depths(const Dag& g, const Mask& gone) {
  const std::size_t n = g.node_count();
  std::vector<long> f(n + 1, -1);
  for (Node v = 1; v <= n; ++v) {
    if (gone[v]) continue;
    f[v] = 0;
    for (Node p : g.parents(v))
      if (!gone[p]) f[v] = std::max(f[v], f[p] + 1);
  }
  return f;
}

std::uint64_t count_deep(const Dag& g, const Mask& gone, std::size_t d) {
  const auto f = depths(g, gone);
  std::uint64_t count = 0;
  for (Node v = 1; v <= g.node_count(); ++v) count += f[v] >= static_cast<long>(d);
  return count;
}

NodeSet mask_to_set(const Mask& gone) {
  std::vector<Node> out;
  for (Node v = 1; v < gone.size(); ++v)
    if (gone[v]) out.push_back(v);
  return NodeSet::from_sorted(std::move(out));
}

Mask set_to_mask(const NodeSet& s, std::size_t n) {
  s.check_within(n);
  Mask m(n + 1, 0);
  for (Node v : s) m[v] = 1;
  return m;
}

std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  long double r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
  if (r > static_cast<long double>(std::numeric_limits<std::uint64_t>::max() / 4)) {
    return std::numeric_limits<std::uint64_t>::max() / 4;
  }
  return static_cast<std::uint64_t>(std::llround(r));
}

// Calls f(mask) for every k-subset of [1..n]; stops early when f returns true.
bool for_each_subset(std::size_t n, std::size_t k, const std::function<bool(const Mask&)>& f) {
  std::vector<Node> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = static_cast<Node>(i + 1);
  Mask m(n + 1, 0);
  while (true) {
    std::fill(m.begin(), m.end(), 0);
    for (Node v : idx) m[v] = 1;
    if (f(m)) return true;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i) --i;
    if (i == 0) return false;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

Mask random_subset(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<Node> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = static_cast<Node>(i + 1);
  Mask m(n + 1, 0);
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = rng.uniform(i, n - 1);
    std::swap(pool[i], pool[j]);
    m[pool[i]] = 1;
  }
  return m;
}

// Branch on the last d+1 nodes of a longest path: any S leaving no path of d
// edges must hit each of them.
bool dr_search(const Dag& g, std::size_t e, std::size_t d, Mask& gone, Budget& budget) {
  budget.charge(graph_size(g));
  std::vector<Node> path;
  const long len = longest_path(g, gone, &path);
  if (len < static_cast<long>(d)) return true;
  if (e == 0) return false;
  for (std::size_t i = path.size() - d - 1; i < path.size(); ++i) {
    const Node x = path[i];
    gone[x] = 1;
    if (dr_search(g, e - 1, d, gone, budget)) return true;
    gone[x] = 0;
  }
  return false;
}

// Greedy removal: repeatedly delete the node lying on the most longest paths.
Mask greedy_depth_adversary(const Dag& g, std::size_t e, std::size_t d) {
  const std::size_t n = g.node_count();
  Mask gone(n + 1, 0);
  for (std::size_t round = 0; round < e; ++round) {
    std::vector<long> f(n + 1, -1), b(n + 1, -1);
    std::vector<double> nf(n + 1, 0), nb(n + 1, 0);
    long total = -1;
    for (Node v = 1; v <= n; ++v) {
      if (gone[v]) continue;
      f[v] = 0;
      nf[v] = 1;
      for (Node p : g.parents(v)) {
        if (gone[p]) continue;
        if (f[p] + 1 > f[v]) {
          f[v] = f[p] + 1;
          nf[v] = nf[p];
        } else if (f[p] + 1 == f[v] && f[v] > 0) {
          nf[v] += nf[p];
        }
      }
      total = std::max(total, f[v]);
    }
    if (total < static_cast<long>(d)) break;
    for (Node v = static_cast<Node>(n); v >= 1; --v) {
      if (gone[v]) continue;
      b[v] = 0;
      nb[v] = 1;
      for (Node c : g.children(v)) {
        if (gone[c]) continue;
        if (b[c] + 1 > b[v]) {
          b[v] = b[c] + 1;
          nb[v] = nb[c];
        } else if (b[c] + 1 == b[v] && b[v] > 0) {
          nb[v] += nb[c];
        }
      }
    }
    Node pick = 0;
    double best = -1;
    for (Node v = 1; v <= n; ++v) {
      if (gone[v] || f[v] + b[v] != total) continue;
      const double through = nf[v] * nb[v];
      if (through > best) {
        best = through;
        pick = v;
      }
    }
    if (pick == 0) break;
    gone[pick] = 1;
  }
  return gone;
}

std::size_t required_count(double f, std::size_t n) {
  const double need = f * static_cast<double>(n);
  if (need <= 0) return 0;
  return static_cast<std::size_t>(std::ceil(need - 1e-9));
}

Dag induced_on(const Dag& g, const Mask& keep, std::vector<Node>* ids) {
  const std::size_t n = g.node_count();
  std::vector<Node> new_id(n + 1, 0);
  std::vector<Node> kept;
  for (Node v = 1; v <= n; ++v) {
    if (keep[v]) {
      kept.push_back(v);
      new_id[v] = static_cast<Node>(kept.size());
    }
  }
  std::vector<std::vector<Node>> parents(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i)
    for (Node p : g.parents(kept[i]))
      if (new_id[p]) parents[i].push_back(new_id[p]);
  if (ids) *ids = std::move(kept);
  return Dag(std::move(parents));
}

// Ancestors of `targets` (themselves included) in G with `gone` removed.
Mask ancestors_avoiding(const Dag& g, const Mask& gone, const std::vector<Node>& targets) {
  Mask mark(g.node_count() + 1, 0);
  Node top = 0;
  for (Node t : targets) {
    if (!gone[t]) {
      mark[t] = 1;
      top = std::max(top, t);
    }
  }
  for (Node v = top; v >= 1; --v) {
    if (!mark[v]) continue;
    for (Node p : g.parents(v))
      if (!gone[p]) mark[p] = 1;
  }
  return mark;
}

std::size_t popcount_mask(const Mask& m) { return static_cast<std::size_t>(std::count(m.begin(), m.end(), 1)); }

// Per-S classification of nodes for ancestral robustness, with a memo of
// bounded cc decisions keyed by the ancestor graph's canonical text.
class HardnessOracle {
 public:
  HardnessOracle(const Dag& g, std::uint64_t C, const CheckOptions& opts) : g_(g), c_(C), opts_(opts) {}

  Tri decide(const Mask& gone, Node v) {
    if (gone[v]) return Tri::No;
    const Mask anc = ancestors_avoiding(g_, gone, {v});
    if (popcount_mask(anc) >= c_) return Tri::Yes;
    const Dag sub = induced_on(g_, anc, nullptr);
    std::string key = to_dagv1(sub);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    const Tri t = cc_at_least_bounded(sub, c_, opts_);
    memo_.emplace(std::move(key), t);
    return t;
  }

  // Counts of (provably hard, undecided) nodes outside S.
  std::pair<std::size_t, std::size_t> count(const Mask& gone) {
    std::size_t yes = 0, unknown = 0;
    for (Node v = 1; v <= g_.node_count(); ++v) {
      const Tri t = decide(gone, v);
      yes += t == Tri::Yes;
      unknown += t == Tri::Unknown;
    }
    return {yes, unknown};
  }

 private:
  const Dag& g_;
  std::uint64_t c_;
  CheckOptions opts_;
  std::unordered_map<std::string, Tri> memo_;
};

std::size_t ceil_size(double delta, std::size_t k) {
  const double x = delta * static_cast<double>(k);
  auto s = static_cast<std::size_t>(std::ceil(x - 1e-9));
  return std::clamp<std::size_t>(s, 1, k);
}

// For A inside I_v(k), the nodes of I*_v(k) without an edge from A.
std::vector<Node> free_successors(const Dag& g, Node v, std::size_t k, const std::vector<Node>& a) {
  Mask hit(k + 1, 0);
  for (Node x : a)
    for (Node c : g.children(x))
      if (c > v && c <= v + k) hit[c - v] = 1;
  std::vector<Node> out;
  for (std::size_t j = 1; j <= k; ++j)
    if (!hit[j]) out.push_back(static_cast<Node>(v + j));
  return out;
}

void set_lexp_witness(RobustnessReport& r, Node v, std::size_t k, std::vector<Node> a, std::vector<Node> b,
                      std::size_t size) {
  b.resize(size);
  r.verdict = Verdict::Falsified;
  r.witness_node = v;
  r.witness_radius = k;
  r.witness_a = NodeSet(std::move(a));
  r.witness_b = NodeSet(std::move(b));
}

}  // namespace

RobustnessReport check_depth_robust(const Dag& g, std::size_t e, std::size_t d, Mode mode, const CheckOptions& opts) {
  const std::size_t n = g.node_count();
  if (e >= n) throw std::invalid_argument("check_depth_robust: need e < N");
  RobustnessReport r;
  r.property = "dr";
  r.mode = mode;
  r.params = {{"e", static_cast<double>(e)}, {"d", static_cast<double>(d)}};

  switch (mode) {
    case Mode::Exhaustive: {
      Mask gone(n + 1, 0);
      Budget budget(opts.work_cap, "check_depth_robust");
      if (dr_search(g, e, d, gone, budget)) {
        r.verdict = Verdict::Falsified;
        r.witness_set = mask_to_set(gone);
        r.measured = static_cast<std::uint64_t>(std::max<long>(0, longest_path(g, gone, nullptr)));
      } else {
        r.verdict = Verdict::Certified;
        r.measured = d;
      }
      break;
    }
    case Mode::Greedy: {
      const Mask gone = greedy_depth_adversary(g, e, d);
      const long left = longest_path(g, gone, nullptr);
      r.measured = static_cast<std::uint64_t>(std::max<long>(0, left));
      r.cases = 1;
      if (left < static_cast<long>(d)) {
        r.verdict = Verdict::Falsified;
        r.witness_set = mask_to_set(gone);
      }
      break;
    }
    case Mode::Sampled: {
      Rng rng(opts.seed);
      r.measured = std::numeric_limits<std::uint64_t>::max();
      for (std::uint64_t t = 0; t < opts.trials; ++t) {
        const Mask gone = random_subset(n, e, rng);
        const long left = longest_path(g, gone, nullptr);
        ++r.cases;
        r.measured = std::min<std::uint64_t>(r.measured, static_cast<std::uint64_t>(std::max<long>(0, left)));
        if (left < static_cast<long>(d)) {
          r.verdict = Verdict::Falsified;
          r.witness_set = mask_to_set(gone);
          break;
        }
      }
      break;
    }
  }
  return r;
}

RobustnessReport check_fractional_dr(const Dag& g, std::size_t e, std::size_t d, double f, Mode mode,
                                     const CheckOptions& opts) {
  const std::size_t n = g.node_count();
  const std::size_t need = required_count(f, n);
  const std::size_t size = std::min(e, n);
  RobustnessReport r;
  r.property = "fdr";
  r.mode = mode;
  r.params = {{"e", static_cast<double>(e)}, {"d", static_cast<double>(d)}, {"f", f}};
  r.measured = std::numeric_limits<std::uint64_t>::max();

  auto consider = [&](const Mask& gone) {
    ++r.cases;
    const auto count = count_deep(g, gone, d);
    r.measured = std::min(r.measured, count);
    if (count < need) {
      r.verdict = Verdict::Falsified;
      r.witness_set = mask_to_set(gone);
      return true;
    }
    return false;
  };

  switch (mode) {
    case Mode::Exhaustive: {
      // Removing more nodes never increases the count, so subsets of size
      // exactly min(e, N) decide the property.
      const auto combos = binomial_saturating(n, size);
      if (combos > opts.work_cap / graph_size(g)) {
        throw ResourceCapExceeded("check_fractional_dr: " + std::to_string(combos) + " subsets exceed the work cap");
      }
      if (!for_each_subset(n, size, consider)) r.verdict = Verdict::Certified;
      break;
    }
    case Mode::Greedy: {
      Mask gone(n + 1, 0);
      for (std::size_t step = 0; step < size; ++step) {
        Node pick = 0;
        std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
        for (Node v = 1; v <= n; ++v) {
          if (gone[v]) continue;
          gone[v] = 1;
          const auto c = count_deep(g, gone, d);
          gone[v] = 0;
          if (c < best) {
            best = c;
            pick = v;
          }
        }
        gone[pick] = 1;
      }
      consider(gone);
      break;
    }
    case Mode::Sampled: {
      Rng rng(opts.seed);
      for (std::uint64_t t = 0; t < opts.trials; ++t)
        if (consider(random_subset(n, size, rng))) break;
      break;
    }
  }
  return r;
}

RobustnessReport check_ancestral_robust(const Dag& g, std::size_t a, std::uint64_t C, double f, Mode mode,
                                        const CheckOptions& opts) {
  const std::size_t n = g.node_count();
  const std::size_t need = required_count(f, n);
  const std::size_t size = std::min(a, n);
  RobustnessReport r;
  r.property = "ar";
  r.mode = mode;
  r.params = {{"a", static_cast<double>(a)}, {"C", static_cast<double>(C)}, {"f", f}};
  r.measured = std::numeric_limits<std::uint64_t>::max();
  HardnessOracle oracle(g, C, opts);
  bool undecided = false;

  // Returns true on a falsification.
  auto consider = [&](const Mask& gone) {
    ++r.cases;
    const auto [yes, unknown] = oracle.count(gone);
    r.measured = std::min<std::uint64_t>(r.measured, yes);
    if (yes + unknown < need) {
      r.verdict = Verdict::Falsified;
      r.witness_set = mask_to_set(gone);
      return true;
    }
    if (yes < need) undecided = true;
    return false;
  };

  switch (mode) {
    case Mode::Exhaustive: {
      // cc of an induced subgraph never exceeds that of the graph, so the
      // hard count only shrinks as S grows; size exactly min(a, N) suffices.
      const auto combos = binomial_saturating(n, size);
      if (combos > opts.work_cap / (graph_size(g) * n)) {
        throw ResourceCapExceeded("check_ancestral_robust: " + std::to_string(combos) +
                                  " subsets exceed the work cap");
      }
      if (!for_each_subset(n, size, consider) && !undecided) r.verdict = Verdict::Certified;
      break;
    }
    case Mode::Greedy: {
      const Mask gone = greedy_depth_adversary(g, size, std::numeric_limits<std::size_t>::max() / 2);
      consider(gone);
      break;
    }
    case Mode::Sampled: {
      Rng rng(opts.seed);
      for (std::uint64_t t = 0; t < opts.trials; ++t)
        if (consider(random_subset(n, size, rng))) break;
      break;
    }
  }
  return r;
}

RobustnessReport check_local_expansion(const Dag& g, double delta, Mode mode, const CheckOptions& opts) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("check_local_expansion: delta must lie in (0,1)");
  const std::size_t n = g.node_count();
  RobustnessReport r;
  r.property = "lexp";
  r.mode = mode;
  r.params = {{"delta", delta}};

  switch (mode) {
    case Mode::Exhaustive: {
      if (n / 2 > opts.max_k) {
        throw ResourceCapExceeded("check_local_expansion: radius up to " + std::to_string(n / 2) + " exceeds cap " +
                                  std::to_string(opts.max_k));
      }
      for (Node v = 1; v < n; ++v) {
        const std::size_t kmax = std::min<std::size_t>(v, n - v);
        for (std::size_t k = 1; k <= kmax; ++k) {
          const std::size_t s = ceil_size(delta, k);
          // Gosper's hack over s-subsets of the k predecessors.
          for (std::uint32_t m = (1u << s) - 1; m < (1u << k);) {
            ++r.cases;
            std::vector<Node> a;
            for (std::size_t j = 0; j < k; ++j)
              if (m >> j & 1) a.push_back(static_cast<Node>(v - k + 1 + j));
            auto b = free_successors(g, v, k, a);
            if (b.size() >= s) {
              set_lexp_witness(r, v, k, std::move(a), std::move(b), s);
              return r;
            }
            const std::uint32_t c = m & -m;
            const std::uint32_t rr = m + c;
            m = (((rr ^ m) >> 2) / c) | rr;
          }
        }
      }
      r.verdict = Verdict::Certified;
      break;
    }
    case Mode::Greedy: {
      std::uint64_t work = 0;
      for (Node v = 1; v < n && work < opts.work_cap; ++v) {
        const std::size_t kmax = std::min<std::size_t>(v, n - v);
        for (std::size_t k = 1; k <= kmax && work < opts.work_cap; ++k) {
          ++r.cases;
          const std::size_t s = ceil_size(delta, k);
          std::vector<std::pair<std::size_t, Node>> rank;
          for (Node x = static_cast<Node>(v - k + 1); x <= v; ++x) {
            std::size_t out = 0;
            for (Node c : g.children(x)) out += c > v && c <= v + k;
            rank.push_back({out, x});
            work += 1 + g.children(x).size();
          }
          std::sort(rank.begin(), rank.end());
          std::vector<Node> a;
          for (std::size_t j = 0; j < s; ++j) a.push_back(rank[j].second);
          std::sort(a.begin(), a.end());
          auto b = free_successors(g, v, k, a);
          if (b.size() >= s) {
            set_lexp_witness(r, v, k, std::move(a), std::move(b), s);
            return r;
          }
        }
      }
      break;
    }
    case Mode::Sampled: {
      if (n < 2) break;
      Rng rng(opts.seed);
      for (std::uint64_t t = 0; t < opts.trials; ++t) {
        ++r.cases;
        const auto v = static_cast<Node>(rng.uniform(1, n - 1));
        const std::size_t k = rng.uniform(1, std::min<std::size_t>(v, n - v));
        const std::size_t s = ceil_size(delta, k);
        std::vector<Node> a;
        const Mask pick = random_subset(k, s, rng);
        for (std::size_t j = 1; j <= k; ++j)
          if (pick[j]) a.push_back(static_cast<Node>(v - k + j));
        auto b = free_successors(g, v, k, a);
        if (b.size() >= s) {
          set_lexp_witness(r, v, k, std::move(a), std::move(b), s);
          return r;
        }
      }
      break;
    }
  }
  return r;
}

bool validate_witness(const RobustnessReport& report, const Dag& g) {
  if (report.verdict != Verdict::Falsified) return false;
  const std::size_t n = g.node_count();
  auto param = [&](const char* key) { return report.params.at(key); };
  if (report.property == "lexp") {
    if (!report.witness_node || !report.witness_radius || !report.witness_a || !report.witness_b) return false;
    const Node v = *report.witness_node;
    const std::size_t k = *report.witness_radius;
    if (v < 1 || k < 1 || k > v || v + k > n) return false;
    const double need = param("delta") * static_cast<double>(k) - 1e-9;
    const auto& a = *report.witness_a;
    const auto& b = *report.witness_b;
    if (static_cast<double>(a.size()) < need || static_cast<double>(b.size()) < need) return false;
    for (Node x : a)
      if (x + k <= v || x > v) return false;
    for (Node y : b)
      if (y <= v || y > v + k) return false;
    for (Node x : a)
      for (Node y : b)
        if (g.has_edge(x, y)) return false;
    return true;
  }
  if (!report.witness_set) return false;
  const Mask gone = set_to_mask(*report.witness_set, n);
  const std::size_t size = report.witness_set->size();
  if (report.property == "dr") {
    if (size > static_cast<std::size_t>(param("e"))) return false;
    return longest_path(g, gone, nullptr) < static_cast<long>(param("d"));
  }
  if (report.property == "fdr") {
    if (size > static_cast<std::size_t>(param("e"))) return false;
    return count_deep(g, gone, static_cast<std::size_t>(param("d"))) < required_count(param("f"), n);
  }
  if (report.property == "ar") {
    if (size > static_cast<std::size_t>(param("a"))) return false;
    HardnessOracle oracle(g, static_cast<std::uint64_t>(param("C")), CheckOptions{});
    const auto [yes, unknown] = oracle.count(gone);
    return yes + unknown < required_count(param("f"), n);
  }
  return false;
}

NodeSet good_nodes(const Dag& g, const NodeSet& s, double c) {
  const std::size_t n = g.node_count();
  s.check_within(n);
  // prefix[i] = |S & [1..i]|
  std::vector<std::size_t> prefix(n + 1, 0);
  for (Node v = 1; v <= n; ++v) prefix[v] = prefix[v - 1] + (s.contains(v) ? 1 : 0);
  const double slack = 1e-9;
  std::vector<Node> out;
  for (Node v = 1; v <= n; ++v) {
    bool good = true;
    for (std::size_t r = 1; r <= v && good; ++r)
      good = static_cast<double>(prefix[v] - prefix[v - r]) <= c * static_cast<double>(r) + slack;
    for (std::size_t r = 1; r <= n - v + 1 && good; ++r)
      good = static_cast<double>(prefix[v + r - 1] - prefix[v - 1]) <= c * static_cast<double>(r) + slack;
    if (good) out.push_back(v);
  }
  return NodeSet::from_sorted(std::move(out));
}

std::optional<std::size_t> min_depth_after_removal(const Dag& g, std::size_t e, std::uint64_t work_cap) {
  const std::size_t n = g.node_count();
  if (n == 0) return 0;
  if (e >= n) return 0;
  // The smallest d with a violating S of size <= e is one more than the
  // certified depth; scan d downward from depth(g).
  const std::size_t top = static_cast<std::size_t>(std::max<long>(0, longest_path(g, Mask(n + 1, 0), nullptr)));
  try {
    Budget budget(work_cap, "min_depth_after_removal");
    std::size_t best = top;
    for (std::size_t d = top; d >= 1; --d) {
      Mask gone(n + 1, 0);
      if (!dr_search(g, e, d, gone, budget)) break;
      best = d - 1;
    }
    return best;
  } catch (const ResourceCapExceeded&) {
    return std::nullopt;
  }
}

std::uint64_t sequential_pebbling_cost(const Dag& g) {
  const std::size_t n = g.node_count();
  std::uint64_t total = 0;
  for (Node v = 1; v <= n; ++v) {
    auto kids = g.children(v);
    const std::uint64_t until = kids.empty() ? n : std::max<std::uint64_t>(v, kids.back() - 1);
    total += until - v + 1;
  }
  return total;
}

Tri cc_at_least_bounded(const Dag& g, std::uint64_t C, const CheckOptions& opts) {
  const std::size_t n = g.node_count();
  if (C <= n) return Tri::Yes;
  if (sequential_pebbling_cost(g) < C) return Tri::No;
  if (n <= opts.cc_node_cap) return cc_at_least(g, C, opts.cc_node_cap) ? Tri::Yes : Tri::No;
  // cc > e*d for (e,d)-depth-robust graphs.
  const auto dep = static_cast<std::uint64_t>(depth(g));
  for (std::uint64_t e = 1; e <= 3 && e < n; ++e) {
    const std::uint64_t d = (C - 1 + e - 1) / e;
    if (d > dep) continue;
    CheckOptions sub = opts;
    sub.work_cap = opts.work_cap / 8;
    try {
      if (check_depth_robust(g, e, d, Mode::Exhaustive, sub).verdict == Verdict::Certified) return Tri::Yes;
    } catch (const ResourceCapExceeded&) {
    }
  }
  return Tri::Unknown;
}

std::pair<double, double> wilson_interval(std::uint64_t hits, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / nn;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * nn)) / (1 + z2 / nn);
  const double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / (1 + z2 / nn);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

Estimate sampled_interval_hardness(const Dag& g, std::size_t e, std::uint64_t C, std::size_t k,
                                   std::uint64_t trials, Seed seed, const CheckOptions& opts) {
  const std::size_t n = g.node_count();
  if (n == 0) throw std::invalid_argument("sampled_interval_hardness: empty graph");
  Rng rng(seed);
  Estimate est;
  est.trials = trials;
  auto low = [&](const Mask& gone, const std::vector<Node>& targets) {
    const Mask anc = ancestors_avoiding(g, gone, targets);
    if (popcount_mask(anc) == 0) return C > 0;
    return cc_at_least_bounded(induced_on(g, anc, nullptr), C, opts) != Tri::Yes;
  };
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::vector<Node> targets(k);
    for (auto& x : targets) x = static_cast<Node>(rng.uniform(1, n));
    Mask gone(n + 1, 0);
    bool hit = low(gone, targets);
    for (std::size_t step = 0; step < e && !hit; ++step) {
      const Mask anc = ancestors_avoiding(g, gone, targets);
      Node pick = 0;
      std::size_t best = std::numeric_limits<std::size_t>::max();
      for (Node x = 1; x <= n; ++x) {
        if (!anc[x]) continue;
        gone[x] = 1;
        const std::size_t size = popcount_mask(ancestors_avoiding(g, gone, targets));
        gone[x] = 0;
        if (size < best) {
          best = size;
          pick = x;
        }
      }
      if (pick == 0) break;
      gone[pick] = 1;
      hit = low(gone, targets);
    }
    est.hits += hit;
  }
  std::tie(est.lo, est.hi) = wilson_interval(est.hits, est.trials);
  return est;
}

}  // namespace mhf

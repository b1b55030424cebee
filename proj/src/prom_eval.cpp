#include "mhf/prom_eval.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include <json.hpp>

#include "mhf/strategies.hpp"

namespace mhf {

Bytes encode_node(Node v) {
  Bytes out(8);
  for (int i = 7; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v & 0xff);
    v >>= 8;
  }
  return out;
}

void LabelStore::put(Node v, Bytes label) {
  if (v == 0 || v >= labels_.size()) throw std::out_of_range("label for node " + std::to_string(v) + " out of range");
  if (!labels_[v]) ++retained_;
  labels_[v] = std::move(label);
  computed_[v] = 1;
}

void LabelStore::drop(Node v) {
  if (has(v)) {
    labels_[v].reset();
    --retained_;
  }
}

const Bytes& LabelStore::at(Node v, Node for_node) const {
  if (!has(v)) throw EvaluationOrderError(for_node, v);
  return *labels_[v];
}

namespace {

void append(Bytes& out, std::span<const std::uint8_t> tail) { out.insert(out.end(), tail.begin(), tail.end()); }

void check_label_space(std::size_t n, const OracleConfig& cfg) {
  if (n == 0) throw std::invalid_argument("evaluation of an empty graph");
  if (cfg.w < 64 && n > (std::uint64_t{1} << cfg.w)) {
    throw std::invalid_argument("N=" + std::to_string(n) + " exceeds 2^w for w=" + std::to_string(cfg.w));
  }
}

Round make_round(std::vector<Bytes> queries, std::uint64_t retained, std::size_t w) {
  return Round{std::move(queries), retained, retained * w + kBookkeepingBits};
}

Trace empty_trace(const OracleConfig& cfg, std::span<const std::uint8_t> x, std::size_t n_base, std::size_t n_chal) {
  Trace t;
  t.cfg = cfg;
  t.input.assign(x.begin(), x.end());
  t.n_base = n_base;
  t.n_chal = n_chal;
  return t;
}

// Executes configurations one round at a time, deriving each r(i) from the
// label of l_i - 1 the first time it is computed.
class ScheduleExecutor {
 public:
  ScheduleExecutor(const DynamicGraphSpec& spec, std::span<const std::uint8_t> x, const OracleConfig& cfg)
      : spec_(spec),
        x_(x.begin(), x.end()),
        oracle_(cfg),
        store_(spec.total_nodes()),
        first_(spec.total_nodes() + 1, 0),
        trace_(empty_trace(cfg, x, spec.n_base, spec.n_chal)) {
    check_label_space(spec.n_base, cfg);
  }

  void step(const NodeSet& conf) {
    const std::size_t round = trace_.rounds.size() + 1;
    const std::size_t total = spec_.total_nodes();
    conf.check_within(total);
    std::vector<Bytes> queries;
    std::vector<std::pair<Node, Bytes>> fresh;
    for (Node v : conf) {
      if (current_.contains(v)) continue;
      auto fail = [&](Node missing) {
        throw IllegalSchedule("illegal placement of node " + std::to_string(v) + " in round " + std::to_string(round),
                              LegalityViolation{round, v, missing});
      };
      for (Node p : spec_.base.parents(v))
        if (!current_.contains(p)) fail(p);
      if (spec_.is_challenge_node(v)) {
        const std::size_t i = v - spec_.n_base;
        if (i > revealed_.size()) fail(0);
        if (!current_.contains(revealed_[i - 1])) fail(revealed_[i - 1]);
      }
      Bytes q = prelab_dynamic(v, store_, spec_, x_);
      fresh.emplace_back(v, oracle_(q));
      queries.push_back(std::move(q));
    }
    for (Node v : current_)
      if (!conf.contains(v)) store_.drop(v);
    for (auto& [v, label] : fresh) {
      if (first_[v] == 0) {
        first_[v] = round;
        const Node next = v + 1;
        if (spec_.is_challenge_node(next) && next - spec_.n_base == revealed_.size() + 1) {
          revealed_.push_back(challenge_from_label(label, spec_.n_base));
          reveal_round_.push_back(round);
        }
      }
      if (v == total) digest_ = label;
      store_.put(v, std::move(label));
    }
    current_ = conf;
    trace_.rounds.push_back(make_round(std::move(queries), conf.size(), oracle_.config().w));
  }

  Node revealed(std::size_t i) const { return revealed_.at(i - 1); }

  EvalResult finish() && {
    if (!digest_) throw std::invalid_argument("schedule never computes the output node");
    EvalResult out;
    out.digest = std::move(*digest_);
    for (std::size_t i = 1; i <= revealed_.size(); ++i) {
      const std::size_t s = reveal_round_[i - 1];
      out.challenges.push_back({i, revealed_[i - 1], s, first_[spec_.challenge_node(i)] - s});
    }
    out.trace = std::move(trace_);
    return out;
  }

 private:
  const DynamicGraphSpec& spec_;
  Bytes x_;
  Oracle oracle_;
  LabelStore store_;
  NodeSet current_;
  std::vector<std::size_t> first_;
  std::vector<Node> revealed_;
  std::vector<std::size_t> reveal_round_;
  std::optional<Bytes> digest_;
  Trace trace_;
};

class LabelChallenges final : public ChallengeSource {
 public:
  explicit LabelChallenges(ScheduleExecutor& ex) : ex_(ex) {}
  void observe(std::size_t, const NodeSet& conf) override { ex_.step(conf); }
  Node draw(std::size_t i, std::size_t) override { return ex_.revealed(i); }

 private:
  ScheduleExecutor& ex_;
};

}  // namespace

Bytes prelab_static(Node v, const LabelStore& store, const Dag& g, std::span<const std::uint8_t> x) {
  Bytes out = encode_node(v);
  out.push_back(0x00);
  auto ps = g.parents(v);
  if (ps.empty()) {
    append(out, x);
    return out;
  }
  for (Node p : ps) append(out, store.at(p, v));
  return out;
}

Bytes prelab_dynamic(Node v, const LabelStore& store, const DynamicGraphSpec& spec,
                     std::span<const std::uint8_t> x) {
  if (!spec.is_challenge_node(v)) return prelab_static(v, store, spec.base, x);
  const Bytes& prev = store.at(v - 1, v);
  const Node r = challenge_from_label(prev, spec.n_base);
  Bytes out = encode_node(v);
  out.push_back(0x01);
  append(out, prev);
  append(out, store.at(r, v));
  return out;
}

Node challenge_from_label(std::span<const std::uint8_t> label, std::size_t n) {
  if (n == 0) throw std::invalid_argument("challenge_from_label: n must be positive");
  unsigned __int128 acc = 0;
  for (auto b : label) acc = (acc * 256 + b) % n;
  return static_cast<Node>(acc + 1);
}

EvalResult eval_imhf(const Dag& g, std::span<const std::uint8_t> x, const OracleConfig& cfg) {
  const std::size_t n = g.node_count();
  check_label_space(n, cfg);
  const Oracle h(cfg);
  LabelStore store(n);
  std::vector<std::size_t> pending(n + 1, 0);
  for (Node v = 1; v <= n; ++v) pending[v] = g.children(v).size();
  EvalResult out;
  out.trace = empty_trace(cfg, x, n, 0);
  for (Node v = 1; v <= n; ++v) {
    Bytes q = prelab_static(v, store, g, x);
    store.put(v, h(q));
    for (Node p : g.parents(v))
      if (--pending[p] == 0 && p != n) store.drop(p);
    if (pending[v] == 0 && v != n) store.drop(v);
    out.trace.rounds.push_back(make_round({std::move(q)}, store.retained(), cfg.w));
  }
  out.digest = store.at(static_cast<Node>(n));
  return out;
}

ScheduledEval strategy_driven_eval(const DynamicGraphSpec& spec, Strategy& strategy, std::span<const std::uint8_t> x,
                                   const OracleConfig& cfg) {
  ScheduleExecutor ex(spec, x, cfg);
  LabelChallenges source(ex);
  DynamicRun run = run_dynamic(spec, strategy, source);
  return {std::move(ex).finish(), std::move(run.pebbling)};
}

EvalResult eval_dmhf(const DynamicGraphSpec& spec, std::span<const std::uint8_t> x, const OracleConfig& cfg,
                     Retention retention) {
  if (retention == Retention::LowMemory) {
    MinimalLine minimal;
    return strategy_driven_eval(spec, minimal, x, cfg).eval;
  }
  const std::size_t n = spec.n_base;
  const std::size_t total = spec.total_nodes();
  check_label_space(n, cfg);
  const Oracle h(cfg);
  LabelStore store(total);
  EvalResult out;
  out.trace = empty_trace(cfg, x, n, spec.n_chal);
  for (Node v = 1; v <= total; ++v) {
    Bytes q = prelab_dynamic(v, store, spec, x);
    if (spec.is_challenge_node(v)) {
      const std::size_t i = v - n;
      // X_{l_i - 1} came out of round v - 1; its consumer is queried now.
      out.challenges.push_back({i, challenge_from_label(store.at(v - 1), n), v - 1, 1});
    }
    store.put(v, h(q));
    // Base labels stay; a challenge label is consumed by the next one.
    if (v > n + 1) store.drop(v - 1);
    out.trace.rounds.push_back(make_round({std::move(q)}, store.retained(), cfg.w));
  }
  out.digest = store.at(static_cast<Node>(total));
  return out;
}

EvalResult pebbling_driven_eval(const Pebbling& p, const DynamicGraphSpec& spec, std::span<const std::uint8_t> x,
                                const OracleConfig& cfg) {
  ScheduleExecutor ex(spec, x, cfg);
  for (const NodeSet& conf : p.steps()) ex.step(conf);
  return std::move(ex).finish();
}

Dag ex_post_facto_graph(const DynamicGraphSpec& spec, const EvalResult& honest) {
  std::vector<Node> r;
  for (const auto& c : honest.challenges) r.push_back(c.r);
  return spec.realize(r);
}

Dag ex_post_facto_graph(const DynamicGraphSpec& spec, std::span<const std::uint8_t> x, const OracleConfig& cfg) {
  return ex_post_facto_graph(spec, eval_dmhf(spec, x, cfg));
}

Extraction extract_pebbling(const Trace& trace, const Dag& g) {
  const std::size_t n = trace.n_base;
  const std::size_t total = n + trace.n_chal;
  if (g.node_count() != total) {
    throw std::invalid_argument("graph has " + std::to_string(g.node_count()) + " nodes, trace expects " +
                                std::to_string(total));
  }
  // Static part: g without the dynamic edges into l_1..l_nchal.
  std::vector<std::vector<Node>> static_parents(total);
  for (Node v = 1; v <= total; ++v) {
    auto ps = g.parents(v);
    if (v > n) {
      if (std::find(ps.begin(), ps.end(), v - 1) == ps.end()) {
        throw std::invalid_argument("graph lacks the challenge line edge into node " + std::to_string(v));
      }
      static_parents[v - 1] = {v - 1};
    } else {
      static_parents[v - 1].assign(ps.begin(), ps.end());
    }
  }
  DynamicGraphSpec spec{Dag(std::move(static_parents)), n, trace.n_chal};

  // True labels and prelabels over the ex-post-facto graph.
  const Oracle h(trace.cfg);
  LabelStore truth(total);
  std::unordered_map<std::string, Node> owner;
  std::vector<Node> dyn;
  for (Node v = 1; v <= total; ++v) {
    const Bytes q = prelab_dynamic(v, truth, spec, trace.input);
    if (spec.is_challenge_node(v)) dyn.push_back(challenge_from_label(truth.at(v - 1), n));
    owner.emplace(std::string(q.begin(), q.end()), v);
    truth.put(v, h(q));
  }
  if (spec.realize(dyn).edges() != g.edges()) {
    throw std::invalid_argument("graph is not the ex-post-facto graph of this trace");
  }

  const std::size_t rounds = trace.rounds.size();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  Extraction out;
  out.first_query.assign(total + 1, 0);
  std::vector<std::vector<Node>> called(rounds + 1);
  std::vector<std::vector<std::size_t>> calls_of(total + 1), uses_of(total + 1);
  for (std::size_t i = 1; i <= rounds; ++i) {
    for (const Bytes& q : trace.rounds[i - 1].queries) {
      auto it = owner.find(std::string(q.begin(), q.end()));
      if (it == owner.end()) {
        ++out.ignored_queries;
        continue;
      }
      const Node v = it->second;
      ++out.correct_calls;
      called[i].push_back(v);
      calls_of[v].push_back(i);
      if (out.first_query[v] == 0) out.first_query[v] = i;
      for (Node p : g.parents(v)) uses_of[p].push_back(i);
    }
  }
  auto next_after = [&](const std::vector<std::size_t>& xs, std::size_t i) {
    auto it = std::upper_bound(xs.begin(), xs.end(), i);
    return it == xs.end() ? kNone : *it;
  };

  NodeSet prev;
  for (std::size_t i = 1; i <= rounds; ++i) {
    std::vector<Node> next(called[i].begin(), called[i].end());
    for (Node u : prev) {
      const std::size_t use = next_after(uses_of[u], i);
      if (use != kNone && use <= next_after(calls_of[u], i)) next.push_back(u);
    }
    prev = NodeSet(std::move(next));
    out.pebbling.push(prev);
  }
  out.legality = check_legal(out.pebbling, g);
  return out;
}

CostReport trace_cost(const Trace& trace) {
  std::vector<std::uint64_t> sizes;
  sizes.reserve(trace.rounds.size());
  for (const auto& r : trace.rounds) sizes.push_back(r.state_bits);
  return cost_from_sizes(sizes);
}

std::string eval_to_json(const EvalResult& result) {
  nlohmann::json j;
  j["format"] = "mhf-trace";
  j["version"] = 1;
  j["hash"] = result.trace.cfg.hash;
  j["w"] = result.trace.cfg.w;
  j["input"] = to_hex(result.trace.input);
  j["n_base"] = result.trace.n_base;
  j["n_chal"] = result.trace.n_chal;
  j["digest"] = to_hex(result.digest);
  auto& rounds = j["rounds"] = nlohmann::json::array();
  for (const auto& r : result.trace.rounds) {
    nlohmann::json qs = nlohmann::json::array();
    for (const auto& q : r.queries) qs.push_back(to_hex(q));
    rounds.push_back({{"queries", std::move(qs)}, {"retained", r.retained}, {"state_bits", r.state_bits}});
  }
  auto& ch = j["challenges"] = nlohmann::json::array();
  for (const auto& c : result.challenges) ch.push_back({{"i", c.i}, {"r", c.r}, {"s", c.s}, {"t", c.t}});
  return j.dump(1) + "\n";
}

EvalResult eval_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
    EvalResult out;
    out.trace.cfg.hash = j.at("hash").get<std::string>();
    out.trace.cfg.w = j.at("w").get<std::size_t>();
    out.trace.input = from_hex(j.at("input").get<std::string>());
    out.trace.n_base = j.at("n_base").get<std::size_t>();
    out.trace.n_chal = j.at("n_chal").get<std::size_t>();
    out.digest = from_hex(j.at("digest").get<std::string>());
    for (const auto& r : j.at("rounds")) {
      Round round;
      for (const auto& q : r.at("queries")) round.queries.push_back(from_hex(q.get<std::string>()));
      round.state_bits = r.at("state_bits").get<std::uint64_t>();
      round.retained = r.value("retained", std::uint64_t{0});
      out.trace.rounds.push_back(std::move(round));
    }
    for (const auto& c : j.at("challenges")) {
      out.challenges.push_back(
          {c.at("i").get<std::size_t>(), c.at("r").get<Node>(), c.at("s").get<std::size_t>(), c.at("t").get<std::size_t>()});
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed trace JSON: ") + e.what());
  }
}

}  // namespace mhf

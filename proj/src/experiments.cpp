#include "mhf/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "mhf/dag_io.hpp"
#include "mhf/graph_ops.hpp"
#include "mhf/oracle.hpp"
#include "mhf/strategies.hpp"

namespace mhf {

using nlohmann::json;

std::string version_string() { return std::string(MHF_VERSION) + " (" + MHF_GIT_DESCRIBE + ")"; }

namespace {

json config_json(const ExperimentConfig& c) {
  return json{{"family", c.family},         {"n", c.n},
              {"n_chal", c.n_chal},         {"grates_eps", c.grates_eps},
              {"tail_eps", c.tail_eps},     {"m", c.m},
              {"strategies", c.strategies}, {"trials", c.trials},
              {"seed", c.seed},             {"thresholds", c.thresholds},
              {"e", c.e},                   {"d", c.d},
              {"e_low", c.e_low},           {"C", c.C},
              {"f", c.f},                   {"delta", c.delta}};
}

// Same text for a number in JSON and CSV.
std::string num(const json& v) { return v.dump(); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

double mean(const std::vector<double>& xs) {
  double s = 0;
  for (double x : xs) s += x;
  return xs.empty() ? 0.0 : s / static_cast<double>(xs.size());
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double mx = mean(x), my = mean(y);
  double num = 0, den = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  return den > 0 ? num / den : 0.0;
}

std::optional<std::size_t> checkpoint_gap(const std::string& name) {
  const std::string prefix = "checkpoint:";
  if (name.rfind(prefix, 0) != 0) return std::nullopt;
  return std::stoul(name.substr(prefix.size()));
}

// Longest path ending at r in G with `gone` removed; -1 if r is gone.
long depth_avoiding(const Dag& g, const std::vector<char>& gone, Node r) {
  if (gone[r]) return -1;
  std::vector<long> f(r + 1, -1);
  for (Node v = 1; v <= r; ++v) {
    if (gone[v]) continue;
    f[v] = 0;
    for (Node p : g.parents(v))
      if (!gone[p]) f[v] = std::max(f[v], f[p] + 1);
  }
  return f[r];
}

bool provably_costly(const Dag& g, const std::vector<char>& gone, Node r, const LuckyParams& params) {
  if (gone[r]) return false;
  std::vector<char> anc(r + 1, 0);
  anc[r] = 1;
  std::size_t count = 0;
  for (Node v = r; v >= 1; --v) {
    if (!anc[v]) continue;
    ++count;
    for (Node p : g.parents(v))
      if (!gone[p]) anc[p] = 1;
  }
  // Every node of the ancestor graph is pebbled at least once.
  if (count >= params.C) return true;
  std::vector<Node> id(r + 1, 0);
  std::vector<Node> kept;
  for (Node v = 1; v <= r; ++v)
    if (anc[v]) {
      kept.push_back(v);
      id[v] = static_cast<Node>(kept.size());
    }
  std::vector<std::vector<Node>> parents(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i)
    for (Node p : g.parents(kept[i]))
      if (anc[p]) parents[i].push_back(id[p]);
  return cc_at_least_bounded(Dag(std::move(parents)), params.C, params.cc_opts) == Tri::Yes;
}

std::vector<char> base_mask(const NodeSet& conf, std::size_t n) {
  std::vector<char> m(n + 1, 0);
  for (Node v : conf)
    if (v <= n) m[v] = 1;
  return m;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& cfg) { return config_json(cfg).dump(2) + "\n"; }

ExperimentConfig config_from_json(const std::string& text) {
  ExperimentConfig c;
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw std::invalid_argument("experiment config must be a JSON object");
    const json known = config_json(c);
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!known.contains(it.key())) throw std::invalid_argument("unknown config key '" + it.key() + "'");
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) j.at(key).get_to(field);
    };
    get("family", c.family);
    get("n", c.n);
    get("n_chal", c.n_chal);
    get("grates_eps", c.grates_eps);
    get("tail_eps", c.tail_eps);
    get("m", c.m);
    get("strategies", c.strategies);
    get("trials", c.trials);
    get("seed", c.seed);
    get("thresholds", c.thresholds);
    get("e", c.e);
    get("d", c.d);
    get("e_low", c.e_low);
    get("C", c.C);
    get("f", c.f);
    get("delta", c.delta);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed experiment config: ") + e.what());
  }
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return config_from_json(ss.str());
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

Dag build_family(const ExperimentConfig& cfg) {
  if (cfg.family == "line") return line_graph(cfg.n);
  if (cfg.family == "drsample") return drsample(cfg.n, Seed{cfg.seed});
  if (cfg.family == "grates") return grates(cfg.n, cfg.grates_eps);
  if (cfg.family == "egsample") return egsample(cfg.n, cfg.grates_eps, Seed{cfg.seed});
  throw std::invalid_argument("unknown family '" + cfg.family + "'");
}

Seed trial_seed(std::uint64_t base, std::uint64_t index) { return Rng::derive(Seed{base}, index); }

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& f) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        f(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < std::min(threads, count); ++t) pool.emplace_back(worker);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

TradeoffReport tradeoff_experiment(const ExperimentConfig& cfg, std::size_t threads) {
  if (cfg.strategies.empty() || cfg.trials == 0) throw std::invalid_argument("tradeoff needs strategies and trials");
  for (const auto& s : cfg.strategies) make_strategy(s);
  const DynamicGraphSpec spec = dynamize(build_family(cfg), cfg.n_chal);
  TradeoffReport report;
  report.cfg = cfg;
  report.version = version_string();
  report.trials.resize(cfg.strategies.size() * cfg.trials);
  parallel_for(report.trials.size(), threads, [&](std::size_t k) {
    const std::size_t si = k / cfg.trials, t = k % cfg.trials;
    auto strat = make_strategy(cfg.strategies[si]);
    const Seed seed = trial_seed(cfg.seed, t);
    const DynamicRun run = run_dynamic(spec, *strat, seed);
    TradeoffTrial& out = report.trials[k];
    out.strategy = cfg.strategies[si];
    out.trial = t;
    out.seed = seed.value;
    out.cc = run.cost.cc;
    out.steps = run.cost.t;
    out.peak = run.cost.peak;
    for (auto s : cfg.thresholds) out.ssc[s] = run.cost.ssc_at(s);
    for (const auto& c : run.challenges) {
      out.latencies.push_back(c.t);
      out.latency_sum += c.t;
    }
    out.mean_latency = static_cast<double>(out.latency_sum) / static_cast<double>(run.challenges.size());
    out.window_cc = response_window_cost(run).cc;
  });

  std::vector<double> log_gap, log_cc, log_lat, log_steps;
  for (std::size_t si = 0; si < cfg.strategies.size(); ++si) {
    StrategySummary s;
    s.strategy = cfg.strategies[si];
    std::vector<double> cc, steps, peak, lat, lat_sum;
    std::map<std::uint64_t, std::vector<double>> ssc;
    for (std::size_t t = 0; t < cfg.trials; ++t) {
      const auto& tr = report.trials[si * cfg.trials + t];
      cc.push_back(static_cast<double>(tr.cc));
      steps.push_back(static_cast<double>(tr.steps));
      peak.push_back(static_cast<double>(tr.peak));
      lat.push_back(tr.mean_latency);
      lat_sum.push_back(static_cast<double>(tr.latency_sum));
      for (const auto& [th, v] : tr.ssc) ssc[th].push_back(static_cast<double>(v));
    }
    s.mean_cc = mean(cc);
    s.mean_steps = mean(steps);
    s.mean_peak = mean(peak);
    s.mean_latency = mean(lat);
    s.mean_latency_sum = mean(lat_sum);
    for (const auto& [th, v] : ssc) s.mean_ssc[th] = mean(v);
    if (auto gap = checkpoint_gap(s.strategy); gap && s.mean_latency_sum > 0) {
      log_gap.push_back(std::log(static_cast<double>(*gap)));
      log_cc.push_back(std::log(s.mean_cc));
      log_lat.push_back(std::log(s.mean_latency_sum));
      log_steps.push_back(std::log(s.mean_steps));
    }
    report.summary.push_back(std::move(s));
  }
  if (log_gap.size() >= 2) {
    report.slopes = GapSlopes{slope(log_gap, log_cc), slope(log_gap, log_lat), slope(log_gap, log_steps),
                              log_gap.size()};
  }
  return report;
}

std::string TradeoffReport::to_json() const {
  json j;
  j["kind"] = "tradeoff";
  j["version"] = version;
  j["config"] = config_json(cfg);
  j["seed"] = cfg.seed;
  auto& trs = j["trials"] = json::array();
  for (const auto& t : trials) {
    json ssc = json::object();
    for (const auto& [s, v] : t.ssc) ssc[std::to_string(s)] = v;
    trs.push_back({{"strategy", t.strategy},
                   {"trial", t.trial},
                   {"seed", t.seed},
                   {"cc", t.cc},
                   {"steps", t.steps},
                   {"peak", t.peak},
                   {"latency_sum", t.latency_sum},
                   {"mean_latency", t.mean_latency},
                   {"window_cc", t.window_cc},
                   {"ssc", ssc},
                   {"latencies", t.latencies}});
  }
  auto& sum = j["summary"] = json::array();
  for (const auto& s : summary) {
    json ssc = json::object();
    for (const auto& [th, v] : s.mean_ssc) ssc[std::to_string(th)] = v;
    sum.push_back({{"strategy", s.strategy},
                   {"mean_cc", s.mean_cc},
                   {"mean_steps", s.mean_steps},
                   {"mean_peak", s.mean_peak},
                   {"mean_latency", s.mean_latency},
                   {"mean_latency_sum", s.mean_latency_sum},
                   {"mean_ssc", ssc}});
  }
  if (slopes) {
    j["checkpoint_slopes"] = {{"cc", slopes->cc},
                              {"latency_sum", slopes->latency_sum},
                              {"steps", slopes->steps},
                              {"points", slopes->points}};
  }
  return j.dump(2) + "\n";
}

std::string TradeoffReport::to_csv() const {
  std::ostringstream out;
  out << "strategy,trial,seed,cc,steps,peak,latency_sum,mean_latency,window_cc";
  for (auto s : cfg.thresholds) out << ",ssc_" << s;
  out << "\n";
  for (const auto& t : trials) {
    out << t.strategy << ',' << t.trial << ',' << t.seed << ',' << t.cc << ',' << t.steps << ',' << t.peak << ','
        << t.latency_sum << ',' << num(t.mean_latency) << ',' << t.window_cc;
    for (auto s : cfg.thresholds) out << ',' << t.ssc.at(s);
    out << "\n";
  }
  return out.str();
}

std::vector<PairCase> classify_pairs(const DynamicGraphSpec& spec, const DynamicRun& run, const LuckyParams& params) {
  const std::size_t n = spec.n_base;
  const Dag g = spec.static_graph();
  std::vector<PairCase> out;
  for (std::size_t k = 0; k + 1 < run.challenges.size(); k += 2) {
    const ChallengeRecord& a = run.challenges[k];
    const ChallengeRecord& b = run.challenges[k + 1];
    const NodeSet& at_reveal = run.pebbling.step(a.s);
    PairCase pc;
    pc.high_space = at_reveal.size() >= params.e;
    bool sustained = true;
    for (std::size_t j = a.s; j <= a.s + a.t; ++j) {
      const NodeSet& conf = run.pebbling.step(j);
      if (conf.size() >= params.e_low) continue;
      sustained = false;
      if (!pc.high_cc && provably_costly(g, base_mask(conf, n), b.r, params)) pc.high_cc = true;
      if (pc.high_cc) break;
    }
    pc.long_time = sustained && depth_avoiding(g, base_mask(at_reveal, n), a.r) >= static_cast<long>(params.d);
    out.push_back(pc);
  }
  return out;
}

LuckyReport lucky_rate_experiment(const ExperimentConfig& cfg, std::size_t threads) {
  if (cfg.strategies.empty() || cfg.trials == 0) throw std::invalid_argument("lucky needs strategies and blocks");
  for (const auto& s : cfg.strategies) make_strategy(s);
  const DynamicGraphSpec spec = dynamize(build_family(cfg), 2 * cfg.n_chal);
  const LuckyParams params{cfg.e, cfg.d, cfg.e_low, cfg.C, CheckOptions{}};
  LuckyReport report;
  report.cfg = cfg;
  report.version = version_string();
  std::vector<LuckyBlock> blocks(cfg.strategies.size() * cfg.trials);
  parallel_for(blocks.size(), threads, [&](std::size_t k) {
    const std::size_t si = k / cfg.trials, b = k % cfg.trials;
    auto strat = make_strategy(cfg.strategies[si]);
    const Seed seed = trial_seed(cfg.seed, b);
    const DynamicRun run = run_dynamic(spec, *strat, seed);
    LuckyBlock& out = blocks[k];
    out.block = b;
    out.seed = seed.value;
    for (const PairCase& pc : classify_pairs(spec, run, params)) {
      ++out.pairs;
      out.unlucky += pc.unlucky();
      out.case1 += pc.high_space;
      out.case2 += pc.long_time;
      out.case3 += pc.high_cc;
    }
    out.frequency = static_cast<double>(out.unlucky) / static_cast<double>(out.pairs);
  });
  for (std::size_t si = 0; si < cfg.strategies.size(); ++si) {
    LuckyStrategy ls;
    ls.strategy = cfg.strategies[si];
    ls.blocks.assign(blocks.begin() + static_cast<long>(si * cfg.trials),
                     blocks.begin() + static_cast<long>((si + 1) * cfg.trials));
    std::size_t pairs = 0, unlucky = 0;
    for (const auto& b : ls.blocks) {
      pairs += b.pairs;
      unlucky += b.unlucky;
    }
    ls.pooled = static_cast<double>(unlucky) / static_cast<double>(pairs);
    for (const auto& b : ls.blocks) ls.blocks_below += b.frequency < ls.pooled - cfg.tail_eps;
    ls.fraction_below = static_cast<double>(ls.blocks_below) / static_cast<double>(ls.blocks.size());
    ls.hoeffding_bound = std::exp(-2 * cfg.tail_eps * cfg.tail_eps * static_cast<double>(cfg.n_chal));
    report.strategies.push_back(std::move(ls));
  }
  return report;
}

std::string LuckyReport::to_json() const {
  json j;
  j["kind"] = "lucky";
  j["version"] = version;
  j["config"] = config_json(cfg);
  j["seed"] = cfg.seed;
  auto& ss = j["strategies"] = json::array();
  for (const auto& s : strategies) {
    json blocks = json::array();
    std::size_t c1 = 0, c2 = 0, c3 = 0;
    for (const auto& b : s.blocks) {
      blocks.push_back({{"block", b.block},
                        {"seed", b.seed},
                        {"pairs", b.pairs},
                        {"unlucky", b.unlucky},
                        {"case1", b.case1},
                        {"case2", b.case2},
                        {"case3", b.case3},
                        {"frequency", b.frequency}});
      c1 += b.case1;
      c2 += b.case2;
      c3 += b.case3;
    }
    ss.push_back({{"strategy", s.strategy},
                  {"pooled", s.pooled},
                  {"blocks_below", s.blocks_below},
                  {"fraction_below", s.fraction_below},
                  {"hoeffding_bound", s.hoeffding_bound},
                  {"case1", c1},
                  {"case2", c2},
                  {"case3", c3},
                  {"blocks", std::move(blocks)}});
  }
  return j.dump(2) + "\n";
}

std::string LuckyReport::to_csv() const {
  std::ostringstream out;
  out << "strategy,block,seed,pairs,unlucky,case1,case2,case3,frequency\n";
  for (const auto& s : strategies)
    for (const auto& b : s.blocks)
      out << s.strategy << ',' << b.block << ',' << b.seed << ',' << b.pairs << ',' << b.unlucky << ',' << b.case1
          << ',' << b.case2 << ',' << b.case3 << ',' << num(b.frequency) << "\n";
  return out.str();
}

std::string robustness_to_json(const RobustnessReport& r) {
  json j;
  j["property"] = r.property;
  j["mode"] = to_string(r.mode);
  j["verdict"] = to_string(r.verdict);
  j["params"] = r.params;
  j["measured"] = r.measured;
  j["cases"] = r.cases;
  if (r.witness_set) j["witness_set"] = r.witness_set->values();
  if (r.witness_node) j["witness_node"] = *r.witness_node;
  if (r.witness_radius) j["witness_radius"] = *r.witness_radius;
  if (r.witness_a) j["witness_a"] = r.witness_a->values();
  if (r.witness_b) j["witness_b"] = r.witness_b->values();
  return j.dump(2) + "\n";
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const Bytes bytes(data.begin(), data.end());
  return to_hex(Oracle({256, "SHA256"})(bytes));
}

std::vector<ManifestEntry> pipeline_build(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

  const Dag egs = egsample(cfg.n, cfg.grates_eps, Seed{cfg.seed});
  save_dagv1(egs, dir / "egs.dag");
  const DynamicGraphSpec degs = dynamize(egs, 2 * cfg.n_chal);
  save_spec(degs, "egs.dag", dir / "degs.json");
  save_dagv1(degs.base, dir / "degs_static.dag");
  const Dag meta = metagraph(egs, cfg.m);
  save_dagv1(meta, dir / "meta.dag");

  CheckOptions opts;
  opts.seed = Seed{cfg.seed};
  opts.trials = 50;
  write_text(dir / "report_dr_greedy.json", robustness_to_json(check_depth_robust(egs, cfg.e, cfg.d, Mode::Greedy)));
  write_text(dir / "report_fdr_sampled.json",
             robustness_to_json(check_fractional_dr(egs, cfg.e, cfg.d, cfg.f, Mode::Sampled, opts)));
  opts.trials = 10;
  write_text(dir / "report_ar_sampled.json",
             robustness_to_json(check_ancestral_robust(egs, cfg.e_low, cfg.C, cfg.f, Mode::Sampled, opts)));
  opts.trials = 2000;
  write_text(dir / "report_lexp_meta.json",
             robustness_to_json(check_local_expansion(meta, cfg.delta, Mode::Sampled, opts)));
  write_text(dir / "config.json", config_to_json(cfg));

  std::vector<ManifestEntry> entries;
  for (const char* name : {"config.json", "degs.json", "degs_static.dag", "egs.dag", "meta.dag",
                           "report_ar_sampled.json", "report_dr_greedy.json", "report_fdr_sampled.json",
                           "report_lexp_meta.json"}) {
    const fs::path p = dir / name;
    entries.push_back({name, sha256_file(p), static_cast<std::uint64_t>(fs::file_size(p))});
  }
  json m;
  m["version"] = version_string();
  m["config"] = config_json(cfg);
  m["degs_nodes"] = degs.total_nodes();
  auto& files = m["files"] = json::array();
  for (const auto& e : entries) files.push_back({{"path", e.path}, {"sha256", e.sha256}, {"bytes", e.bytes}});
  write_text(dir / "manifest.json", m.dump(2) + "\n");
  return entries;
}

}  // namespace mhf

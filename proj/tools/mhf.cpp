#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mhf/dag_io.hpp"
#include "mhf/errors.hpp"
#include "mhf/experiments.hpp"
#include "mhf/prom_eval.hpp"
#include "mhf/strategies.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace mhf;

namespace {

constexpr int kFalsified = 2;
constexpr int kCapRefused = 3;

struct Globals {
  std::uint64_t seed = 1;
  std::size_t threads = 1;
  std::string format = "json";
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Empty path means stdout.
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

json header(const Globals& g, const std::string& kind) {
  return json{{"kind", kind}, {"version", version_string()}, {"seed", g.seed}};
}

std::map<std::string, std::string> parse_params(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("parameter '" + item + "' is not k=v");
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

struct Params {
  std::map<std::string, std::string> kv;
  std::set<std::string> used;

  std::string raw(const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw std::invalid_argument("missing parameter '" + key + "'");
    used.insert(key);
    return it->second;
  }
  std::uint64_t u(const std::string& key) { return std::stoull(raw(key)); }
  double d(const std::string& key) { return std::stod(raw(key)); }
  void done() const {
    for (const auto& [k, v] : kv)
      if (!used.count(k)) throw std::invalid_argument("unused parameter '" + k + "'");
  }
};

// "3;7;9" -> {3, 7, 9}
NodeSet parse_nodes(const std::string& text) {
  std::vector<Node> nodes;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ';'))
    if (!item.empty()) nodes.push_back(static_cast<Node>(std::stoull(item)));
  return NodeSet(std::move(nodes));
}

std::string csv_line(const std::vector<std::string>& cells) {
  std::string s;
  for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + cells[i];
  return s + "\n";
}

// ---- gen / dynamize

struct GenArgs {
  std::string family;
  std::size_t n = 0;
  double eps = 0.5;
  std::string out;
};

int run_gen(const GenArgs& a, const Globals& g) {
  ExperimentConfig cfg;
  cfg.family = a.family;
  cfg.n = a.n;
  cfg.grates_eps = a.eps;
  cfg.seed = g.seed;
  save_dagv1(build_family(cfg), a.out);
  return 0;
}

struct DynamizeArgs {
  std::string in;
  std::size_t chal = 0;
  std::string out;
};

int run_dynamize(const DynamizeArgs& a, const Globals&) {
  const Dag base = load_dagv1(a.in);
  const fs::path out(a.out);
  const fs::path dir = out.has_parent_path() ? out.parent_path() : fs::path(".");
  const std::string rel = fs::proximate(fs::absolute(a.in), fs::absolute(dir)).generic_string();
  save_spec(dynamize(base, a.chal), rel, out);
  return 0;
}

// ---- pebble

struct PebbleArgs {
  std::string spec;
  std::string strategy = "greedy";
  std::size_t trials = 1;
  std::vector<std::uint64_t> thresholds{2, 4, 16, 64, 256};
  std::string report;
};

int run_pebble(const PebbleArgs& a, const Globals& g) {
  const DynamicGraphSpec spec = load_spec(a.spec);
  make_strategy(a.strategy);
  struct Row {
    std::uint64_t seed;
    DynamicRun run;
  };
  std::vector<Row> rows(a.trials);
  parallel_for(a.trials, g.threads, [&](std::size_t t) {
    auto strat = make_strategy(a.strategy);
    rows[t].seed = trial_seed(g.seed, t).value;
    rows[t].run = run_dynamic(spec, *strat, Seed{rows[t].seed});
  });

  if (g.format == "csv") {
    std::vector<std::string> head{"trial", "seed", "cc", "steps", "peak", "latency_sum"};
    for (auto s : a.thresholds) head.push_back("ssc_" + std::to_string(s));
    std::string out = csv_line(head);
    for (std::size_t t = 0; t < rows.size(); ++t) {
      const auto& run = rows[t].run;
      std::uint64_t lat = 0;
      for (const auto& c : run.challenges) lat += c.t;
      std::vector<std::string> cells{std::to_string(t), std::to_string(rows[t].seed), std::to_string(run.cost.cc),
                                     std::to_string(run.cost.t), std::to_string(run.cost.peak), std::to_string(lat)};
      for (auto s : a.thresholds) cells.push_back(std::to_string(run.cost.ssc_at(s)));
      out += csv_line(cells);
    }
    emit(a.report, out);
    return 0;
  }

  json j = header(g, "pebble");
  j["config"] = {{"spec", a.spec},           {"strategy", a.strategy},     {"trials", a.trials},
                 {"thresholds", a.thresholds}, {"n_base", spec.n_base}, {"n_chal", spec.n_chal}};
  auto& per = j["per_trial"] = json::array();
  double cc_sum = 0, lat_sum = 0;
  for (std::size_t t = 0; t < rows.size(); ++t) {
    const auto& run = rows[t].run;
    json ssc = json::object();
    for (auto s : a.thresholds) ssc[std::to_string(s)] = run.cost.ssc_at(s);
    json ch = json::array();
    std::uint64_t lat = 0;
    for (const auto& c : run.challenges) {
      ch.push_back({{"i", c.i}, {"s_i", c.s}, {"t_i", c.t}, {"r_i", c.r}});
      lat += c.t;
    }
    per.push_back({{"trial", t},
                   {"seed", rows[t].seed},
                   {"cc", run.cost.cc},
                   {"steps", run.cost.t},
                   {"peak", run.cost.peak},
                   {"ssc", ssc},
                   {"challenges", ch}});
    cc_sum += static_cast<double>(run.cost.cc);
    lat_sum += static_cast<double>(lat);
  }
  const double trials = static_cast<double>(a.trials);
  j["summary"] = {{"mean_cc", cc_sum / trials},
                  {"mean_latency", lat_sum / (trials * static_cast<double>(spec.n_chal))}};
  emit(a.report, j.dump(2) + "\n");
  return 0;
}

// ---- verify

struct VerifyArgs {
  std::string in;
  std::string prop;
  std::string params;
  std::string mode = "exhaustive";
  std::uint64_t trials = 1000;
  std::uint64_t work_cap = CheckOptions{}.work_cap;
  std::string report;
};

int run_verify(const VerifyArgs& a, const Globals& g) {
  const Dag dag = load_dagv1(a.in);
  Params p{parse_params(a.params), {}};
  CheckOptions opts;
  opts.seed = Seed{g.seed};
  opts.trials = a.trials;
  opts.work_cap = a.work_cap;
  json j = header(g, "verify");
  j["config"] = {{"in", a.in}, {"prop", a.prop}, {"params", a.params}, {"mode", a.mode}, {"trials", a.trials}};

  if (a.prop == "good") {
    const NodeSet s = parse_nodes(p.raw("S"));
    const double c = p.d("c");
    p.done();
    const NodeSet good = good_nodes(dag, s, c);
    j["result"] = {{"property", "good"}, {"removed", s.values()}, {"good", good.values()}, {"count", good.size()}};
    emit(a.report, j.dump(2) + "\n");
    return 0;
  }

  const Mode mode = parse_mode(a.mode);
  RobustnessReport r;
  if (a.prop == "dr") {
    const auto e = p.u("e"), d = p.u("d");
    p.done();
    r = check_depth_robust(dag, e, d, mode, opts);
  } else if (a.prop == "fdr") {
    const auto e = p.u("e"), d = p.u("d");
    const double f = p.d("f");
    p.done();
    r = check_fractional_dr(dag, e, d, f, mode, opts);
  } else if (a.prop == "ar") {
    const auto e = p.u("e"), C = p.u("C");
    const double f = p.d("f");
    p.done();
    r = check_ancestral_robust(dag, e, C, f, mode, opts);
  } else if (a.prop == "lexp") {
    const double delta = p.d("delta");
    p.done();
    r = check_local_expansion(dag, delta, mode, opts);
  } else {
    throw std::invalid_argument("unknown property '" + a.prop + "'");
  }
  j["result"] = json::parse(robustness_to_json(r));
  emit(a.report, j.dump(2) + "\n");
  return r.verdict == Verdict::Falsified ? kFalsified : 0;
}

// ---- hash / extract

struct HashArgs {
  std::string spec;
  std::string input;
  std::size_t w = 256;
  std::string hash = "SHA256";
  std::string retention = "full";
  std::string strategy;
  std::string trace;
  std::string graph_out;
};

int run_hash(const HashArgs& a, const Globals&) {
  const DynamicGraphSpec spec = load_spec(a.spec);
  const Bytes x = from_hex(a.input);
  const OracleConfig cfg{a.w, a.hash};
  EvalResult res;
  if (!a.strategy.empty()) {
    auto strat = make_strategy(a.strategy);
    res = strategy_driven_eval(spec, *strat, x, cfg).eval;
  } else if (a.retention == "full" || a.retention == "low") {
    res = eval_dmhf(spec, x, cfg, a.retention == "full" ? Retention::Full : Retention::LowMemory);
  } else {
    throw std::invalid_argument("retention must be full or low");
  }
  if (!a.trace.empty()) emit(a.trace, eval_to_json(res));
  if (!a.graph_out.empty()) save_dagv1(ex_post_facto_graph(spec, res), a.graph_out);
  std::cout << to_hex(res.digest) << "\n";
  return 0;
}

struct ExtractArgs {
  std::string trace;
  std::string graph;
  std::string report;
};

int run_extract(const ExtractArgs& a, const Globals& g) {
  const EvalResult res = eval_from_json(read_file(a.trace));
  const Dag dag = load_dagv1(a.graph);
  const Extraction ex = extract_pebbling(res.trace, dag);
  const CostReport cost = mhf::cost(ex.pebbling);
  json j = header(g, "extract");
  j["config"] = {{"trace", a.trace}, {"graph", a.graph}};
  j["legal"] = ex.legality.legal;
  if (ex.legality.witness)
    j["violation"] = {{"step", ex.legality.witness->step},
                      {"node", ex.legality.witness->node},
                      {"missing_parent", ex.legality.witness->missing_parent}};
  j["correct_calls"] = ex.correct_calls;
  j["ignored_queries"] = ex.ignored_queries;
  j["cc"] = cost.cc;
  j["peak"] = cost.peak;
  j["first_query"] = ex.first_query;
  auto& steps = j["steps"] = json::array();
  for (const auto& s : ex.pebbling.steps()) steps.push_back(s.values());
  emit(a.report, j.dump(1) + "\n");
  return ex.legality.legal ? 0 : kFalsified;
}

// ---- tradeoff / lucky / build-all

struct ExperimentArgs {
  std::string config;
  std::string family;
  std::size_t n = 0;
  std::size_t chal = 0;
  std::vector<std::string> strategies;
  std::size_t trials = 0;
  std::vector<std::uint64_t> thresholds;
  double grates_eps = 0;
  double tail_eps = 0;
  std::size_t e = 0, d = 0, e_low = 0, m = 0;
  std::uint64_t C = 0;
  std::string report;
  std::string out;
};

struct ExperimentOptions {
  CLI::Option* seed = nullptr;
  std::map<std::string, CLI::Option*> by_name;
  bool given(const std::string& name) const {
    auto it = by_name.find(name);
    return it != by_name.end() && it->second->count() > 0;
  }
};

void add_experiment_options(CLI::App* sub, ExperimentArgs& a, ExperimentOptions& o) {
  sub->add_option("--config", a.config, "experiment config JSON");
  o.by_name["family"] = sub->add_option("--family", a.family, "line|drsample|grates|egsample");
  o.by_name["n"] = sub->add_option("--n", a.n, "base graph size");
  o.by_name["chal"] = sub->add_option("--chal", a.chal, "challenges (tradeoff) or pairs per block (lucky)");
  o.by_name["strategies"] = sub->add_option("--strategies", a.strategies, "strategy list")->delimiter(',');
  o.by_name["trials"] = sub->add_option("--trials", a.trials, "trials per strategy or blocks");
  o.by_name["thresholds"] = sub->add_option("--thresholds", a.thresholds, "ssc thresholds")->delimiter(',');
  o.by_name["grates-eps"] = sub->add_option("--grates-eps", a.grates_eps, "Grates exponent");
  o.by_name["tail-eps"] = sub->add_option("--tail-eps", a.tail_eps, "concentration tail");
  o.by_name["e"] = sub->add_option("--e", a.e, "high-space threshold");
  o.by_name["d"] = sub->add_option("--d", a.d, "depth threshold");
  o.by_name["e-low"] = sub->add_option("--e-low", a.e_low, "low-space threshold");
  o.by_name["C"] = sub->add_option("--C", a.C, "cc threshold");
  o.by_name["m"] = sub->add_option("--m", a.m, "metagraph block size");
}

ExperimentConfig resolve(const ExperimentArgs& a, const ExperimentOptions& o, const Globals& g,
                         bool seed_given) {
  ExperimentConfig c = a.config.empty() ? ExperimentConfig{} : load_config(a.config);
  if (o.given("family")) c.family = a.family;
  if (o.given("n")) c.n = a.n;
  if (o.given("chal")) c.n_chal = a.chal;
  if (o.given("strategies")) c.strategies = a.strategies;
  if (o.given("trials")) c.trials = a.trials;
  if (o.given("thresholds")) c.thresholds = a.thresholds;
  if (o.given("grates-eps")) c.grates_eps = a.grates_eps;
  if (o.given("tail-eps")) c.tail_eps = a.tail_eps;
  if (o.given("e")) c.e = a.e;
  if (o.given("d")) c.d = a.d;
  if (o.given("e-low")) c.e_low = a.e_low;
  if (o.given("C")) c.C = a.C;
  if (o.given("m")) c.m = a.m;
  if (seed_given || a.config.empty()) c.seed = g.seed;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic-graph memory-hard function toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  auto* seed_opt = app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads")->capture_default_str();
  app.add_option("--format", g.format, "report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.set_version_flag("--version", version_string());

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate a base graph as DAGv1");
  gen_cmd->add_option("--family", gen.family, "line|drsample|grates|egsample")->required();
  gen_cmd->add_option("--n", gen.n, "size parameter")->required();
  gen_cmd->add_option("--eps,--grates-eps", gen.eps, "Grates exponent")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "output DAGv1 file")->required();

  DynamizeArgs dyn;
  auto* dyn_cmd = app.add_subcommand("dynamize", "wrap a DAGv1 base into a dynamic spec");
  dyn_cmd->add_option("--in", dyn.in, "base DAGv1")->required()->check(CLI::ExistingFile);
  dyn_cmd->add_option("--chal", dyn.chal, "challenge count")->required();
  dyn_cmd->add_option("--out", dyn.out, "spec JSON")->required();

  PebbleArgs peb;
  auto* peb_cmd = app.add_subcommand("pebble", "run a strategy in the dynamic pebbling arena");
  peb_cmd->add_option("--spec", peb.spec, "spec JSON")->required()->check(CLI::ExistingFile);
  peb_cmd->add_option("--strategy", peb.strategy, "greedy|checkpoint:GAP|minimal")->capture_default_str();
  peb_cmd->add_option("--trials", peb.trials, "independent runs")->capture_default_str();
  peb_cmd->add_option("--thresholds", peb.thresholds, "ssc thresholds")->delimiter(',');
  peb_cmd->add_option("--report", peb.report, "output file (stdout if omitted)");

  VerifyArgs ver;
  auto* ver_cmd = app.add_subcommand("verify", "check a robustness property");
  ver_cmd->add_option("--in", ver.in, "DAGv1 graph")->required()->check(CLI::ExistingFile);
  ver_cmd->add_option("--prop", ver.prop, "dr|fdr|ar|lexp|good")->required();
  ver_cmd->add_option("--params", ver.params, "k=v,... (S as 3;5;9 for good)");
  ver_cmd->add_option("--mode", ver.mode, "exhaustive|greedy|sampled")->capture_default_str();
  ver_cmd->add_option("--trials", ver.trials, "sampled trials")->capture_default_str();
  ver_cmd->add_option("--work-cap", ver.work_cap, "exhaustive work budget")->capture_default_str();
  ver_cmd->add_option("--report", ver.report, "output file (stdout if omitted)");

  HashArgs hash;
  auto* hash_cmd = app.add_subcommand("hash", "evaluate the dMHF on an input");
  hash_cmd->add_option("--spec", hash.spec, "spec JSON")->required()->check(CLI::ExistingFile);
  hash_cmd->add_option("--input", hash.input, "input bytes as hex")->required();
  hash_cmd->add_option("--w", hash.w, "label bits")->capture_default_str();
  hash_cmd->add_option("--hash", hash.hash, "digest name")->capture_default_str();
  hash_cmd->add_option("--retention", hash.retention, "full|low")->capture_default_str();
  hash_cmd->add_option("--strategy", hash.strategy, "drive memory by an arena strategy instead");
  hash_cmd->add_option("--trace", hash.trace, "trace JSON output");
  hash_cmd->add_option("--graph-out", hash.graph_out, "ex-post-facto graph as DAGv1");

  ExtractArgs ext;
  auto* ext_cmd = app.add_subcommand("extract", "recover a pebbling from a trace");
  ext_cmd->add_option("--trace", ext.trace, "trace JSON")->required()->check(CLI::ExistingFile);
  ext_cmd->add_option("--graph", ext.graph, "ex-post-facto DAGv1")->required()->check(CLI::ExistingFile);
  ext_cmd->add_option("--report", ext.report, "output file (stdout if omitted)");

  ExperimentArgs trade_args, lucky_args, build_args;
  ExperimentOptions trade_opts, lucky_opts, build_opts;
  auto* trade_cmd = app.add_subcommand("tradeoff", "space/latency trade-off across strategies");
  add_experiment_options(trade_cmd, trade_args, trade_opts);
  trade_cmd->add_option("--report", trade_args.report, "output file (stdout if omitted)");
  auto* lucky_cmd = app.add_subcommand("lucky", "unlucky-pair frequency per block");
  add_experiment_options(lucky_cmd, lucky_args, lucky_opts);
  lucky_cmd->add_option("--report", lucky_args.report, "output file (stdout if omitted)");
  auto* build_cmd = app.add_subcommand("build-all", "materialize graphs, specs and baseline reports");
  add_experiment_options(build_cmd, build_args, build_opts);
  build_cmd->add_option("--out", build_args.out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const bool seed_given = seed_opt->count() > 0;
    if (*gen_cmd) return run_gen(gen, g);
    if (*dyn_cmd) return run_dynamize(dyn, g);
    if (*peb_cmd) return run_pebble(peb, g);
    if (*ver_cmd) return run_verify(ver, g);
    if (*hash_cmd) return run_hash(hash, g);
    if (*ext_cmd) return run_extract(ext, g);
    if (*trade_cmd) {
      const auto rep = tradeoff_experiment(resolve(trade_args, trade_opts, g, seed_given), g.threads);
      emit(trade_args.report, g.format == "csv" ? rep.to_csv() : rep.to_json());
      return 0;
    }
    if (*lucky_cmd) {
      const auto rep = lucky_rate_experiment(resolve(lucky_args, lucky_opts, g, seed_given), g.threads);
      emit(lucky_args.report, g.format == "csv" ? rep.to_csv() : rep.to_json());
      return 0;
    }
    if (*build_cmd) {
      const auto cfg = resolve(build_args, build_opts, g, seed_given);
      for (const auto& e : pipeline_build(cfg, build_args.out)) std::cout << e.sha256 << "  " << e.path << "\n";
      return 0;
    }
  } catch (const ResourceCapExceeded& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return kCapRefused;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mhf/arena.hpp"
#include "mhf/constructions.hpp"
#include "mhf/robustness.hpp"

namespace mhf {

/// "<version> (<git describe>)" of the library build.
std::string version_string();

struct ExperimentConfig {
  std::string family = "line";  ///< base graph: line | drsample | grates | egsample
  std::size_t n = 256;
  /// Challenges per run for tradeoff; challenge pairs per block for lucky.
  std::size_t n_chal = 256;
  double grates_eps = 0.5;
  double tail_eps = 0.1;
  std::size_t m = 8;
  std::vector<std::string> strategies{"greedy", "checkpoint:4", "checkpoint:16", "checkpoint:64", "minimal"};
  std::size_t trials = 4;  ///< runs per strategy (tradeoff) or blocks (lucky)
  std::uint64_t seed = 1;
  std::vector<std::uint64_t> thresholds{2, 4, 16, 64, 256};
  // Case parameters: high space e, depth d, low space e_low, cost C.
  std::size_t e = 64;
  std::size_t d = 16;
  std::size_t e_low = 8;
  std::uint64_t C = 128;
  double f = 0.5;
  double delta = 0.25;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

std::string config_to_json(const ExperimentConfig& cfg);
/// Missing keys keep their defaults; unknown keys are rejected.
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Base graph for cfg.family with cfg.n and cfg.seed.
Dag build_family(const ExperimentConfig& cfg);

/// Independent per-trial seed.
Seed trial_seed(std::uint64_t base, std::uint64_t index);

/// Runs f(0..count-1) on up to `threads` workers; rethrows the first failure.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& f);

struct TradeoffTrial {
  std::string strategy;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  std::uint64_t cc = 0;
  std::uint64_t steps = 0;
  std::uint64_t peak = 0;
  std::uint64_t latency_sum = 0;
  double mean_latency = 0;
  std::uint64_t window_cc = 0;
  std::map<std::uint64_t, std::uint64_t> ssc;
  std::vector<std::size_t> latencies;
};

struct StrategySummary {
  std::string strategy;
  double mean_cc = 0;
  double mean_steps = 0;
  double mean_peak = 0;
  double mean_latency = 0;
  double mean_latency_sum = 0;
  std::map<std::uint64_t, double> mean_ssc;
};

/// Least-squares slopes of log(mean) against log(gap) over checkpoint
/// strategies.
struct GapSlopes {
  double cc = 0;
  double latency_sum = 0;
  double steps = 0;
  std::size_t points = 0;
};

struct TradeoffReport {
  ExperimentConfig cfg;
  std::string version;
  std::vector<TradeoffTrial> trials;
  std::vector<StrategySummary> summary;
  std::optional<GapSlopes> slopes;

  std::string to_json() const;
  std::string to_csv() const;
};

/// For each strategy and trial, runs the arena on Dynamize(family graph,
/// n_chal) with trial-seeded uniform challenges.
TradeoffReport tradeoff_experiment(const ExperimentConfig& cfg, std::size_t threads = 1);

struct LuckyParams {
  std::size_t e = 0;
  std::size_t d = 0;
  std::size_t e_low = 0;
  std::uint64_t C = 0;
  CheckOptions cc_opts{};
};

/// Which unlucky cases hold for one challenge pair (r1, r2).
struct PairCase {
  bool high_space = false;  ///< |P_{s1}| >= e
  bool long_time = false;   ///< depth(r1, G - P_{s1}) >= d and |P_j| >= e_low on [s1, s1 + t1]
  bool high_cc = false;     ///< some j there with |P_j| < e_low and cc(Anc(r2, G - P_j)) >= C proven
  bool unlucky() const { return high_space || long_time || high_cc; }
};

/// Classifies consecutive challenge pairs of an arena run. G is the static
/// base graph on [1..N]; a challenged node that is itself pebbled counts as
/// neither deep nor costly.
std::vector<PairCase> classify_pairs(const DynamicGraphSpec& spec, const DynamicRun& run, const LuckyParams& params);

struct LuckyBlock {
  std::size_t block = 0;
  std::uint64_t seed = 0;
  std::size_t pairs = 0;
  std::size_t unlucky = 0;
  std::size_t case1 = 0;
  std::size_t case2 = 0;
  std::size_t case3 = 0;
  double frequency = 0;
};

struct LuckyStrategy {
  std::string strategy;
  std::vector<LuckyBlock> blocks;
  double pooled = 0;
  std::size_t blocks_below = 0;  ///< blocks with frequency < pooled - tail_eps
  double fraction_below = 0;
  double hoeffding_bound = 0;  ///< exp(-2 tail_eps^2 pairs)
};

struct LuckyReport {
  ExperimentConfig cfg;
  std::string version;
  std::vector<LuckyStrategy> strategies;

  std::string to_json() const;
  std::string to_csv() const;
};

/// Blocks of cfg.n_chal pairs on Dynamize(family graph, 2 n_chal), one
/// arena run per block.
LuckyReport lucky_rate_experiment(const ExperimentConfig& cfg, std::size_t threads = 1);

std::string robustness_to_json(const RobustnessReport& report);

struct ManifestEntry {
  std::string path;
  std::string sha256;
  std::uint64_t bytes = 0;
};

/// Writes egs.dag, the DEGS spec (degs.json + degs_base.dag), the metagraph,
/// baseline robustness reports and manifest.json into `dir`.
std::vector<ManifestEntry> pipeline_build(const ExperimentConfig& cfg, const std::filesystem::path& dir);

/// Hex SHA-256 of a file's bytes; throws std::runtime_error naming the path.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace mhf

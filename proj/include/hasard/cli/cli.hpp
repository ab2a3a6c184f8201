#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hasard/env/env.hpp"
#include "hasard/env/heatmap.hpp"
#include "hasard/rl/train.hpp"

namespace hasard::cli {

/// Exit codes shared by every command.
enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericError = 3, kDivergence = 4 };

/// Everything one invocation needs; serialises to `key=value` lines that can
/// be fed back through --config.
struct RunConfig {
  std::string command = "train";
  env::EnvSpec env;
  rl::TrainConfig train;
  std::filesystem::path out_dir = "out";
  std::int64_t steps = 100000;
  int eval_episodes = 10;
  int report_every = 0;  // log rows between progress lines; 0 = quiet

  /// Routes the key to the run, env or train section. Throws ConfigError.
  void set(std::string_view key, std::string_view value);
  /// `key=value` lines, '#' comments.
  void load_text(std::string_view text);
  std::string serialize() const;
};

bool is_env_key(std::string_view key);
bool is_train_key(std::string_view key);

// ---- evaluation ----

struct EvalEpisode {
  double episode_return = 0.0;
  double episode_cost = 0.0;
  int steps = 0;
  bool violation = false;
};

struct EvalSummary {
  std::vector<EvalEpisode> episodes;
  double mean_return = 0.0;
  double std_return = 0.0;  // population std over episodes
  double mean_cost = 0.0;
  double std_cost = 0.0;
  double budget = 0.0;
  bool satisfies = false;  // mean_cost <= budget
};

/// Chooses per-group indices for the env's current state.
using ActionPolicy = std::function<std::vector<int>(const env::Env&)>;

EvalSummary summarize(std::vector<EvalEpisode> episodes, double budget);
EvalSummary evaluate(env::EnvSpec spec, int episodes, const ActionPolicy& policy);
/// "noop", "safe" or "random"; nullopt for other names.
std::optional<ActionPolicy> scripted_policy(std::string_view name, std::uint64_t seed);
/// Argmax over each group. Throws ShapeMismatch at first use on a foreign env.
ActionPolicy greedy_policy(std::shared_ptr<const rl::Policy<float>> policy);
void write_eval_csv(std::ostream& out, const EvalSummary& s);

// ---- benchmark ----

struct BenchRow {
  std::string mode;
  int workers = 1;
  std::int64_t steps = 0;
  double seconds = 0.0;
  double steps_per_sec = 0.0;
};

/// Random-action stepping for `seconds` of wall clock over `workers` envs.
BenchRow bench(env::EnvSpec spec, int workers, double seconds);
inline constexpr std::string_view kBenchHeader = "mode,workers,steps,seconds,steps_per_sec";
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

// ---- heatmaps ----

/// Per-episode visit counts plus the wall layout they were recorded on.
struct VisitData {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> wall;  // row-major, 1 = wall
  std::vector<std::vector<std::uint32_t>> episodes;
};

VisitData collect_visits(const env::Heatmap& heatmap, const TileGrid& grid);
void write_visits(std::ostream& out, const VisitData& v);
/// Throws NoData on an empty or malformed file.
VisitData read_visits(std::istream& in);

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // row-major
};

/// Wall tiles are 255; other tiles are round(254 * count / max) over the
/// last `window` episodes (all when fewer). Throws NoData without episodes.
GrayImage heatmap_image(const VisitData& v, std::size_t window);
void write_pgm(std::ostream& out, const GrayImage& img);

// ---- curriculum ----

struct CurriculumResult {
  rl::TrainLog log;
  std::unique_ptr<rl::Trainer> trainer;
  std::vector<std::uint64_t> end_hash;    // params hash after each level
  std::vector<std::uint64_t> first_hash;  // params hash at each level's first rollout
};

/// Trains levels 1, 2, 3 in sequence on one Trainer.
CurriculumResult curriculum(const env::EnvSpec& base, const rl::TrainConfig& cfg, std::int64_t steps_per_level);

/// Command-line entry point; returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hasard::cli

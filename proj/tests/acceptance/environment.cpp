// Environment-level criteria: hard-mode horizon, cost avoidability,
// throughput, heatmap window and replay integrity.

#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "criteria.hpp"
#include "hasard/cli/cli.hpp"
#include "hasard/core/errors.hpp"
#include "hasard/env/env.hpp"
#include "hasard/play/recording.hpp"
#include "hasard/play/session.hpp"

namespace acceptance {

using namespace hasard;
using env::Env;
using env::EnvSpec;
using scenarios::ScenarioId;

namespace {

constexpr ScenarioId kScenarios[] = {ScenarioId::ArmamentBurden,   ScenarioId::RemedyRush,
                                     ScenarioId::CollateralDamage, ScenarioId::VolcanicVenture,
                                     ScenarioId::PrecipicePlunge,  ScenarioId::DetonatorsDilemma};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome criterion3() {
  constexpr int kEpisodes = 1000;
  std::ostringstream detail, first;
  bool pass = true;
  for (ScenarioId id : kScenarios) {
    EnvSpec spec;
    spec.scenario = id;
    spec.constraint = env::ConstraintMode::Hard;
    spec.seed = 3000 + static_cast<int>(id);
    Env env(spec);
    Rng rng(spec.seed);
    int cost_ends = 0, natural_ends = 0, truncated = 0;
    for (int ep = 0; ep < kEpisodes; ++ep) {
      env.reset();
      int first_cost = 0;
      env::StepResult r;
      do {
        r = env.step(static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(env.actions().size()))));
        if (r.cost > 0.0 && first_cost == 0) first_cost = r.info.step;
      } while (!r.done());
      auto fail = [&](const std::string& why) {
        if (pass) first << scenario_name(id) << " episode " << ep << ": " << why;
        pass = false;
      };
      if (first_cost > 0) {
        ++cost_ends;
        if (!r.terminated) fail("cost without termination");
        if (r.info.step != first_cost) fail("ended at " + std::to_string(r.info.step) + " not " + std::to_string(first_cost));
        if (r.info.episode_return != 0.0) fail("episode_return " + std::to_string(r.info.episode_return));
      } else if (r.terminated) {
        ++natural_ends;
        if (r.info.episode_return != env.episode_return()) fail("natural end rewrote the return");
      } else {
        ++truncated;
      }
    }
    detail << scenario_name(id) << " " << cost_ends << "/" << natural_ends << "/" << truncated << "; ";
  }
  std::string d = "cost-terminated/natural/truncated: " + detail.str();
  if (!pass) d += "first failure: " + first.str();
  return {pass, d};
}

Outcome criterion4() {
  const auto safe = *cli::scripted_policy("safe", 0);
  int runs = 0;
  std::ostringstream bad;
  for (ScenarioId id : kScenarios) {
    for (int level = 1; level <= 3; ++level) {
      EnvSpec spec;
      spec.scenario = id;
      spec.level = level;
      spec.seed = 4000 + static_cast<std::uint64_t>(level);
      Env env(spec);
      env.reset();
      while (!env.done()) env.step(safe(env));
      ++runs;
      if (env.episode_cost() != 0.0) bad << env_id_string(id, level) << " C=" << env.episode_cost() << " ";
    }
  }
  if (!bad.str().empty()) return {false, bad.str()};
  return {true, std::to_string(runs) + " scenario/levels at C = 0"};
}

double steps_per_second(EnvSpec spec, double budget_seconds) {
  spec.auto_reset = true;
  Env env(spec);
  env.reset();
  Rng rng(spec.seed);
  const auto n = static_cast<std::uint64_t>(env.actions().size());
  std::int64_t steps = 0;
  const auto t0 = std::chrono::steady_clock::now();
  double elapsed = 0.0;
  do {
    for (int i = 0; i < 256; ++i) env.step(static_cast<int>(rng.uniform_int(n)));
    steps += 256;
    elapsed = seconds_since(t0);
  } while (elapsed < budget_seconds);
  return static_cast<double>(steps) / elapsed;
}

Outcome criterion9() {
  bool pass = true;
  std::ostringstream detail;
  detail.precision(0);
  detail << std::fixed;
  for (ScenarioId id : kScenarios) {
    EnvSpec spec;
    spec.scenario = id;
    spec.seed = 9;
    const double feat = steps_per_second(spec, 1.0);
    spec.obs = env::ObsMode::Pixels;
    spec.width = 128;
    spec.height = 72;
    const double pix = steps_per_second(spec, 1.0);
    pass = pass && feat >= 10000.0 && pix >= 1000.0;
    detail << scenario_name(id) << " " << feat << "/" << pix << " ";
  }
  return {pass, "features/pixels steps per sec on one thread: " + detail.str()};
}

Outcome criterion10() {
  constexpr int kEpisodes = 1200, kWindow = 1000, W = 9, H = 7;
  env::Heatmap heatmap(W, H, kWindow);
  Rng rng(10);
  std::vector<std::vector<std::uint32_t>> stream;
  for (int ep = 0; ep < kEpisodes; ++ep) {
    std::vector<std::uint32_t> counts(W * H, 0);
    heatmap.begin_episode();
    const int visits = static_cast<int>(rng.uniform_int(std::uint64_t{200}));
    for (int v = 0; v < visits; ++v) {
      // includes a margin of out-of-range tiles, which must be ignored
      const int x = rng.uniform_int(-1, W), y = rng.uniform_int(-1, H);
      heatmap.record_visit({x, y});
      if (x >= 0 && x < W && y >= 0 && y < H) ++counts[static_cast<std::size_t>(y * W + x)];
    }
    stream.push_back(std::move(counts));
  }
  std::vector<std::uint64_t> brute(W * H, 0);
  for (int ep = kEpisodes - kWindow; ep < kEpisodes; ++ep)
    for (std::size_t i = 0; i < brute.size(); ++i) brute[i] += stream[static_cast<std::size_t>(ep)][i];
  const auto agg = heatmap.aggregate();
  const bool pass = agg == brute && heatmap.episodes() == static_cast<std::size_t>(kWindow);
  std::uint64_t total = 0;
  for (auto v : brute) total += v;
  return {pass, std::to_string(heatmap.episodes()) + " episodes buffered, " + std::to_string(total) +
                    " visits, aggregate " + (agg == brute ? "equals" : "differs from") + " recount"};
}

Outcome criterion13() {
  constexpr int kSessions = 50;
  const auto dir = std::filesystem::temp_directory_path() / "hasard_acceptance_replay";
  std::filesystem::remove_all(dir);
  Rng rng(13);
  int ok = 0;
  std::ostringstream bad;
  std::vector<std::filesystem::path> files;
  for (int s = 0; s < kSessions; ++s) {
    EnvSpec spec;
    spec.scenario = kScenarios[s % 6];
    spec.level = 1 + (s / 6) % 3;
    spec.seed = 1300 + static_cast<std::uint64_t>(s);
    spec.action = env::ActionMode::FullDiscrete;
    play::Session session(spec, dir / std::to_string(s));
    session.begin_episode();
    while (session.in_episode()) {
      play::KeyMask mask = 0;
      for (int b = 1; b < static_cast<int>(Button::Count); ++b)
        if (rng.bernoulli(0.25)) mask |= play::KeyMask{1} << b;
      session.set_keys(mask);
      session.step(false);
    }
    const auto [R, C] = session.completed().front();
    const auto path = session.recordings().front();
    files.push_back(path);
    std::ifstream in(path);
    const auto result = play::replay(play::Recording::parse(in));
    if (result.reward_total == R && result.cost_total == C) {
      ++ok;
    } else {
      bad << "session " << s << " replayed (" << result.reward_total << ", " << result.cost_total << ") vs (" << R
          << ", " << C << ") ";
    }
  }

  // Flip the low bit of one action digit in the middle of a recording.
  std::ifstream in(files[7]);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < lines.size(); ++i)
    if (!lines[i].empty() && std::isdigit(static_cast<unsigned char>(lines[i][0]))) rows.push_back(i);
  std::string& target = lines[rows[rows.size() / 2]];
  const auto space = target.find(' ');
  target[space + 1] = static_cast<char>(target[space + 1] ^ 1);
  std::stringstream tampered;
  for (const auto& l : lines) tampered << l << '\n';
  std::string caught = "none";
  bool diverged = false;
  try {
    play::replay(play::Recording::parse(tampered));
  } catch (const DivergenceDetected& e) {
    diverged = true;
    caught = "DivergenceDetected at step " + std::to_string(e.step);
  }
  std::filesystem::remove_all(dir);
  std::string detail = std::to_string(ok) + "/" + std::to_string(kSessions) + " replays identical; bit flip: " + caught;
  if (!bad.str().empty()) detail += "; " + bad.str();
  return {ok == kSessions && diverged, detail};
}

}  // namespace

std::vector<Criterion> env_criteria() {
  return {{3, "hard-mode horizon ends at the first costly step with return 0", false, criterion3},
          {4, "scripted safe policy has zero cost at every level", false, criterion4},
          {9, "throughput >= 10k features / 1k pixel steps per sec per core", false, criterion9},
          {10, "heatmap aggregate equals recount of last 1000 episodes", false, criterion10},
          {13, "50 recorded sessions replay exactly; bit flip detected", false, criterion13}};
}

}  // namespace acceptance

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hasard/cli/cli.hpp"
#include "hasard/core/errors.hpp"

using namespace hasard;
using namespace hasard::cli;
namespace fs = std::filesystem;

namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "hasard");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class TempDir {
public:
  explicit TempDir(const std::string& name) : path_(fs::temp_directory_path() / ("hasard_test_" + name)) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  std::string str(const std::string& sub = "") const { return (path_ / sub).string(); }

private:
  fs::path path_;
};

const std::vector<std::string> kSmallNet{"--set", "hidden=32,32", "num_envs=8", "minibatch=256"};

}  // namespace

TEST(Train, SmokeWritesLogCheckpointAndEcho) {
  TempDir dir("train_smoke");
  const auto r = invoke({"train", "--env", "remedy_rush-1", "--method", "ppolag", "--steps", "10000", "--seed", "1",
                         "--out", dir.str("run")});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto csv = slurp(dir.path() / "run" / "log.csv");
  EXPECT_GE(std::count(csv.begin(), csv.end(), '\n'), 2);
  EXPECT_TRUE(fs::exists(dir.path() / "run" / "ckpt.bin"));
  EXPECT_TRUE(fs::exists(dir.path() / "run" / "config.echo"));
  EXPECT_NE(r.err.find("config: "), std::string::npos);
}

TEST(Train, RepeatedRunGivesIdenticalCsv) {
  TempDir dir("train_repeat");
  std::vector<std::string> base{"train", "--env", "remedy_rush-1", "--method", "ppopid", "--steps", "6000", "--seed", "4"};
  base.insert(base.end(), kSmallNet.begin(), kSmallNet.end());
  auto a = base, b = base;
  a.insert(a.end(), {"--out", dir.str("a")});
  b.insert(b.end(), {"--out", dir.str("b")});
  ASSERT_EQ(invoke(a).code, kOk);
  ASSERT_EQ(invoke(b).code, kOk);
  EXPECT_EQ(slurp(dir.path() / "a" / "log.csv"), slurp(dir.path() / "b" / "log.csv"));
}

TEST(Train, EchoedConfigReproducesRun) {
  TempDir dir("train_echo");
  std::vector<std::string> first{"train", "--env", "collateral_damage-2", "--method", "ppocost", "--steps", "3000",
                                 "--seed", "11", "--out", dir.str("a")};
  first.insert(first.end(), kSmallNet.begin(), kSmallNet.end());
  ASSERT_EQ(invoke(first).code, kOk);
  ASSERT_EQ(invoke({"train", "--config", dir.str("a/config.echo"), "--out", dir.str("b")}).code, kOk);
  EXPECT_EQ(slurp(dir.path() / "a" / "log.csv"), slurp(dir.path() / "b" / "log.csv"));
  EXPECT_EQ(slurp(dir.path() / "a" / "ckpt.bin"), slurp(dir.path() / "b" / "ckpt.bin"));
}

TEST(Train, UnknownMethodExitsTwoNamingValidMethods) {
  TempDir dir("train_bad");
  const auto r = invoke({"train", "--method", "trpo", "--out", dir.str()});
  EXPECT_EQ(r.code, kConfigError);
  EXPECT_NE(r.err.find("ppolag"), std::string::npos);
  EXPECT_NE(r.err.find("ppopid"), std::string::npos);
}

TEST(Train, UnknownEnvExitsTwo) {
  TempDir dir("train_bad_env");
  EXPECT_EQ(invoke({"train", "--env", "doom-1", "--out", dir.str()}).code, kConfigError);
  EXPECT_EQ(invoke({"train", "--set", "bogus=1", "--out", dir.str()}).code, kConfigError);
}

TEST(Eval, SingleEpisodeAggregateEqualsEpisode) {
  env::EnvSpec spec;
  spec.scenario = env::ScenarioId::RemedyRush;
  spec.seed = 3;
  const auto s = evaluate(spec, 1, *scripted_policy("random", 5));
  ASSERT_EQ(s.episodes.size(), 1u);
  EXPECT_EQ(s.mean_return, s.episodes[0].episode_return);
  EXPECT_EQ(s.mean_cost, s.episodes[0].episode_cost);
  EXPECT_EQ(s.std_return, 0.0);
  EXPECT_EQ(s.std_cost, 0.0);
}

TEST(Eval, NoOpInCollateralIsSafe) {
  const auto r = invoke({"eval", "--env", "collateral_damage-1", "--policy", "noop", "--episodes", "2"});
  ASSERT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.out.find("return 0.0000"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("cost 0.0000"), std::string::npos);
  EXPECT_NE(r.out.find("satisfies true"), std::string::npos);
}

TEST(Eval, SatisfiesIsInclusive) {
  EXPECT_TRUE(summarize({{1.0, 5.0, 10, false}}, 5.0).satisfies);
  EXPECT_FALSE(summarize({{1.0, 5.0 + 1e-9, 10, false}}, 5.0).satisfies);
  const auto s = summarize({{1.0, 4.0, 10, false}, {3.0, 6.0, 10, false}}, 5.0);
  EXPECT_EQ(s.mean_return, 2.0);
  EXPECT_EQ(s.std_return, 1.0);
  EXPECT_TRUE(s.satisfies);
}

TEST(Eval, CheckpointGreedyAndShapeMismatch) {
  TempDir dir("eval_ckpt");
  std::vector<std::string> t{"train", "--env", "remedy_rush-1", "--steps", "2000", "--out", dir.str("run")};
  t.insert(t.end(), kSmallNet.begin(), kSmallNet.end());
  ASSERT_EQ(invoke(t).code, kOk);
  const auto ok = invoke({"eval", "--env", "remedy_rush-1", "--checkpoint", dir.str("run/ckpt.bin"), "--episodes", "1"});
  EXPECT_EQ(ok.code, kOk) << ok.err;
  const auto bad =
      invoke({"eval", "--env", "precipice_plunge-1", "--checkpoint", dir.str("run/ckpt.bin"), "--episodes", "1"});
  EXPECT_EQ(bad.code, kConfigError);
}

TEST(Bench, ZeroSecondsReportsZeroSteps) {
  env::EnvSpec spec;
  const auto row = bench(spec, 1, 0.0);
  EXPECT_EQ(row.steps, 0);
  EXPECT_EQ(row.steps_per_sec, 0.0);
  const auto r = invoke({"bench", "--env", "remedy_rush-1", "--seconds", "0", "--mode", "features"});
  ASSERT_EQ(r.code, kOk);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), kBenchHeader);
}

TEST(Bench, FeaturesAtLeastAsFastAsPixels) {
  env::EnvSpec spec;
  spec.scenario = env::ScenarioId::DetonatorsDilemma;
  const auto feat = bench(spec, 1, 0.5);
  spec.obs = env::ObsMode::Pixels;
  const auto pix = bench(spec, 1, 0.5);
  EXPECT_GT(feat.steps, 0);
  EXPECT_GE(feat.steps_per_sec, pix.steps_per_sec);
  EXPECT_EQ(pix.mode, "pixels-128x72");
}

TEST(Curriculum, ZeroStepsGivesTwoMarkersAndInitialParams) {
  env::EnvSpec base;
  base.scenario = env::ScenarioId::RemedyRush;
  rl::TrainConfig cfg;
  cfg.hidden = {16};
  const auto r = curriculum(base, cfg, 0);
  EXPECT_EQ(r.log.markers.size(), 2u);
  ASSERT_EQ(r.end_hash.size(), 3u);
  EXPECT_EQ(r.end_hash[0], r.end_hash[2]);
  rl::Trainer fresh(cfg, rl::policy_shape_for(base, cfg.hidden));
  EXPECT_EQ(r.trainer->params_hash(), fresh.params_hash());
}

TEST(Curriculum, ParamsCarriedAcrossLevels) {
  env::EnvSpec base;
  base.scenario = env::ScenarioId::VolcanicVenture;
  rl::TrainConfig cfg;
  cfg.hidden = {32};
  cfg.num_envs = 8;
  cfg.minibatch = 256;
  const auto r = curriculum(base, cfg, 1024);
  ASSERT_EQ(r.first_hash.size(), 3u);
  EXPECT_EQ(r.first_hash[1], r.end_hash[0]);
  EXPECT_EQ(r.first_hash[2], r.end_hash[1]);
  EXPECT_NE(r.end_hash[0], r.end_hash[1]);
  EXPECT_EQ(r.log.markers.size(), 2u);
}

TEST(Heatmap, StationaryEnvAgentLightsOneTile) {
  env::EnvSpec spec;
  spec.scenario = env::ScenarioId::CollateralDamage;
  env::Env e(spec);
  e.reset();
  while (!e.done()) e.step(0);
  e.reset();  // closes the finished episode's slot
  const auto v = collect_visits(e.heatmap(), e.world().grid);
  const auto img = heatmap_image(v, 1);
  int lit = 0;
  for (std::size_t i = 0; i < img.pixels.size(); ++i) lit += !v.wall[i] && img.pixels[i] > 0;
  EXPECT_EQ(lit, 1);
}

TEST(Heatmap, StationaryAgentLightsOneTile) {
  VisitData v;
  v.width = 6;
  v.height = 5;
  v.wall.assign(30, 0);
  for (int x = 0; x < 6; ++x) v.wall[x] = v.wall[24 + x] = 1;
  v.episodes.push_back(std::vector<std::uint32_t>(30, 0));
  v.episodes[0][2 * 6 + 3] = 2100;
  const auto img = heatmap_image(v, 1000);
  int lit = 0;
  for (int i = 0; i < 30; ++i) {
    if (v.wall[i]) {
      EXPECT_EQ(img.pixels[i], 255);
    } else if (img.pixels[i] > 0) {
      ++lit;
      EXPECT_EQ(i, 15);
      EXPECT_EQ(img.pixels[i], 254);
    }
  }
  EXPECT_EQ(lit, 1);
}

TEST(Heatmap, PixelsMatchRecountAndWindow) {
  VisitData v;
  v.width = 4;
  v.height = 3;
  v.wall.assign(12, 0);
  Rng rng(1);
  for (int e = 0; e < 30; ++e) {
    std::vector<std::uint32_t> c(12);
    for (auto& x : c) x = static_cast<std::uint32_t>(rng.uniform_int(std::uint64_t{50}));
    v.episodes.push_back(c);
  }
  for (std::size_t window : {std::size_t{1}, std::size_t{7}, std::size_t{30}, std::size_t{5000}}) {
    std::vector<std::uint64_t> sum(12, 0);
    const std::size_t from = v.episodes.size() - std::min(window, v.episodes.size());
    for (std::size_t e = from; e < v.episodes.size(); ++e)
      for (int i = 0; i < 12; ++i) sum[i] += v.episodes[e][i];
    const auto mx = *std::max_element(sum.begin(), sum.end());
    const auto img = heatmap_image(v, window);
    for (int i = 0; i < 12; ++i)
      EXPECT_EQ(img.pixels[i], static_cast<std::uint8_t>(std::lround(254.0 * static_cast<double>(sum[i]) / mx)));
  }
}

TEST(Heatmap, EmptyDataThrows) {
  VisitData v;
  v.width = 3;
  v.height = 3;
  v.wall.assign(9, 0);
  EXPECT_THROW(heatmap_image(v, 10), NoData);
  std::istringstream junk("");
  EXPECT_THROW(read_visits(junk), NoData);
}

TEST(Heatmap, VisitsFileRoundTrip) {
  VisitData v;
  v.width = 2;
  v.height = 2;
  v.wall = {1, 0, 0, 1};
  v.episodes = {{0, 3, 4, 0}, {0, 1, 1, 0}};
  std::stringstream buf;
  write_visits(buf, v);
  const auto back = read_visits(buf);
  EXPECT_EQ(back.wall, v.wall);
  EXPECT_EQ(back.episodes, v.episodes);
}

TEST(Heatmap, CommandWarnsWhenWindowExceedsEpisodes) {
  TempDir dir("heatmap_cmd");
  VisitData v;
  v.width = 3;
  v.height = 3;
  v.wall.assign(9, 0);
  v.episodes = {{0, 0, 0, 0, 5, 0, 0, 0, 0}};
  {
    std::ofstream out(dir.path() / "visits.txt");
    write_visits(out, v);
  }
  const auto r = invoke({"heatmap", "--run", dir.str(), "--window", "50"});
  EXPECT_EQ(r.code, kOk) << r.err;
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  const auto pgm = slurp(dir.path() / "heatmap.pgm");
  EXPECT_EQ(pgm.substr(0, 2), "P5");
  TempDir empty("heatmap_empty");
  EXPECT_EQ(invoke({"heatmap", "--run", empty.str()}).code, kConfigError);
}

TEST(RunConfigText, RoundTrip) {
  RunConfig rc;
  rc.set("env", "detonators_dilemma-3");
  rc.set("method", "ppopid");
  rc.set("steps", "12345");
  rc.set("budget", "2.5");
  rc.set("pid_kp", "0.3");
  RunConfig back;
  back.load_text(rc.serialize());
  EXPECT_EQ(back.serialize(), rc.serialize());
  EXPECT_EQ(back.env.scenario, env::ScenarioId::DetonatorsDilemma);
  EXPECT_EQ(back.env.level, 3);
  EXPECT_EQ(back.train.method, rl::Method::PPOPID);
  EXPECT_EQ(back.steps, 12345);
  EXPECT_THROW(rc.set("nonsense", "1"), ConfigError);
}

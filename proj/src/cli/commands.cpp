#include <omp.h>

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "hasard/cli/cli.hpp"
#include "hasard/core/errors.hpp"
#include "hasard/play/recording.hpp"
#include "hasard/play/session.hpp"

namespace hasard::cli {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + p.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::ofstream open_out(const fs::path& p, bool binary = false) {
  std::ofstream out(p, binary ? std::ios::binary : std::ios::out);
  if (!out) throw ConfigError("cannot write " + p.string());
  return out;
}

void write_file(const fs::path& p, const std::function<void(std::ostream&)>& fn, bool binary = false) {
  auto out = open_out(p, binary);
  fn(out);
  if (!out) throw ConfigError("failed writing " + p.string());
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

// Options shared by the config-driven commands, applied in precedence order:
// defaults < --config < flags < --set.
struct Common {
  std::string config;
  std::string env;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> sets;

  void add(CLI::App* app) {
    app->add_option("--config", config, "key=value config file (e.g. a config.echo)");
    app->add_option("--env", env, "environment id, e.g. remedy_rush-1");
    app->add_option("--out", out, "output directory");
    app->add_option("--seed", seed, "env and training seed");
    app->add_option("--set", sets, "extra key=value overrides")->take_all();
  }
  void apply(RunConfig& rc, const std::function<void(RunConfig&)>& flags) const {
    if (!config.empty()) rc.load_text(read_file(config));
    if (!env.empty()) rc.set("env", env);
    if (!out.empty()) rc.out_dir = out;
    if (seed) {
      rc.env.seed = *seed;
      rc.train.seed = *seed;
    }
    flags(rc);
    for (const auto& kv : sets) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
      rc.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    rc.env.validate();
    rc.train.validate();
  }
};

void echo(const RunConfig& rc, std::ostream& err, bool to_file) {
  const std::string text = rc.serialize();
  std::istringstream lines(text);
  for (std::string l; std::getline(lines, l);) err << "config: " << l << '\n';
  if (to_file) {
    fs::create_directories(rc.out_dir);
    open_out(rc.out_dir / "config.echo") << text;
  }
}

void write_heatmap_files(const fs::path& dir, const env::Heatmap& heatmap, const env::EnvSpec& spec,
                         std::ostream& err) {
  env::EnvSpec s = spec;
  s.obs = env::ObsMode::Features;
  env::Env probe(s);
  probe.reset();
  const VisitData v = collect_visits(heatmap, probe.world().grid);
  open_out(dir / "visits.txt") << [&] {
    std::ostringstream o;
    write_visits(o, v);
    return o.str();
  }();
  if (v.episodes.empty()) {
    err << "warning: no episode finished; heatmap.pgm not written\n";
    return;
  }
  auto out = open_out(dir / "heatmap.pgm", true);
  write_pgm(out, heatmap_image(v, env::Heatmap::kDefaultCapacity));
}

void train_one(RunConfig rc, std::ostream& err) {
  fs::create_directories(rc.out_dir);
  echo(rc, err, true);
  rl::Trainer trainer(rc.train, rl::policy_shape_for(rc.env, rc.train.hidden));
  int rows = 0;
  if (rc.report_every > 0) {
    trainer.set_progress([&](const rl::TrainLogRow& r) {
      if (++rows % rc.report_every == 0) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "step %lld return %.3f cost %.3f lambda %.4f\n",
                      static_cast<long long>(r.step), r.mean_return, r.mean_cost, r.lambda);
        err << buf;
      }
    });
  }
  rl::TrainLog log;
  trainer.run(rc.env, rc.steps, log);
  write_file(rc.out_dir / "log.csv", [&](std::ostream& o) { log.write_csv(o); });
  {
    auto ck = open_out(rc.out_dir / "ckpt.bin", true);
    trainer.save(ck);
  }
  write_heatmap_files(rc.out_dir, trainer.heatmap(), rc.env, err);
}

int cmd_train(const RunConfig& base, const std::string& seeds_arg, bool parallel, std::ostream& out,
              std::ostream& err) {
  std::vector<std::uint64_t> seeds;
  for (const auto& s : split_list(seeds_arg)) {
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) throw ConfigError("bad seed '" + s + "' in --seeds");
    seeds.push_back(v);
  }
  if (seeds.empty()) {
    train_one(base, err);
    out << "wrote " << (base.out_dir / "log.csv").string() << '\n';
    return kOk;
  }
  auto config_for = [&](std::uint64_t s) {
    RunConfig rc = base;
    rc.env.seed = s;
    rc.train.seed = s;
    rc.out_dir = base.out_dir / ("seed_" + std::to_string(s));
    return rc;
  };
  if (parallel) {
    std::vector<std::ostringstream> logs(seeds.size());
    std::vector<std::future<void>> runs;
    for (std::size_t i = 0; i < seeds.size(); ++i)
      runs.push_back(std::async(std::launch::async, [&, i] { train_one(config_for(seeds[i]), logs[i]); }));
    for (auto& r : runs) r.get();
    for (auto& l : logs) err << l.str();
  } else {
    for (auto s : seeds) train_one(config_for(s), err);
  }
  for (auto s : seeds) out << "wrote " << (config_for(s).out_dir / "log.csv").string() << '\n';
  return kOk;
}

void print_summary(std::ostream& out, const EvalSummary& s) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "episodes %zu return %.4f +- %.4f cost %.4f +- %.4f budget %g satisfies %s\n",
                s.episodes.size(), s.mean_return, s.std_return, s.mean_cost, s.std_cost, s.budget,
                s.satisfies ? "true" : "false");
  out << buf;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"hasard: safety-constrained 3D-navigation environments and safe RL training"};
  app.require_subcommand(1);

  Common train_c, eval_c, bench_c, cur_c, serve_c;
  std::string method, seeds, checkpoint, policy_name, bench_mode = "both", workers_arg, run_dir, heat_out;
  std::string record_dir, action_mode = "full";
  std::optional<std::int64_t> steps, steps_per_level;
  std::optional<int> episodes, report_every;
  bool parallel = false, lockstep = false;
  double seconds = 5.0, step_seconds = 4.0 / 35.0;
  std::size_t window = env::Heatmap::kDefaultCapacity;
  int port = 8723, serve_episodes = 0;
  std::vector<std::string> recordings;

  auto* train = app.add_subcommand("train", "train a policy");
  train_c.add(train);
  train->add_option("--method", method, "ppo, ppocost, ppolag or ppopid");
  train->add_option("--steps", steps, "env steps");
  train->add_option("--seeds", seeds, "comma-separated seed sweep; one sub-directory per seed");
  train->add_flag("--parallel", parallel, "run the seed sweep concurrently");
  train->add_option("--report-every", report_every, "log rows between progress lines");

  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint or scripted policy");
  eval_c.add(eval);
  eval->add_option("--checkpoint", checkpoint, "ckpt.bin from train");
  eval->add_option("--policy", policy_name, "scripted policy: noop, safe or random");
  eval->add_option("--episodes", episodes, "episodes to run");

  auto* benchc = app.add_subcommand("bench", "random-action throughput");
  bench_c.add(benchc);
  benchc->add_option("--mode", bench_mode, "features, pixels or both");
  benchc->add_option("--seconds", seconds, "wall-clock budget per row");
  benchc->add_option("--workers", workers_arg, "comma-separated worker counts");

  auto* cur = app.add_subcommand("curriculum", "train levels 1, 2, 3 in sequence");
  cur_c.add(cur);
  cur->add_option("--method", method, "ppo, ppocost, ppolag or ppopid");
  cur->add_option("--steps-per-level", steps_per_level, "env steps per level");
  cur->add_option("--episodes", episodes, "final level-3 evaluation episodes");

  auto* heat = app.add_subcommand("heatmap", "render visit counts of a training run");
  heat->add_option("--run", run_dir, "training output directory")->required();
  heat->add_option("--window", window, "most recent episodes to aggregate");
  heat->add_option("--out", heat_out, "image path (default <run>/heatmap.pgm)");

  auto* serve = app.add_subcommand("serve", "human play over TCP or WebSocket");
  serve_c.add(serve);
  serve->add_option("--port", port, "listen port (0 picks one)");
  serve->add_option("--record", record_dir, "directory for episode recordings");
  serve->add_flag("--lockstep", lockstep, "step only on client STEP lines");
  serve->add_option("--episodes", serve_episodes, "stop after this many completed episodes");
  serve->add_option("--action", action_mode, "full or simplified");
  serve->add_option("--step-seconds", step_seconds, "real-time seconds per env step");

  auto* rep = app.add_subcommand("replay", "re-execute recordings and check their totals");
  rep->add_option("recordings", recordings, "recording files or directories")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (train->parsed()) {
      RunConfig rc;
      rc.command = "train";
      train_c.apply(rc, [&](RunConfig& r) {
        if (!method.empty()) r.set("method", method);
        if (steps) r.steps = *steps;
        if (report_every) r.report_every = *report_every;
      });
      return cmd_train(rc, seeds, parallel, out, err);
    }
    if (eval->parsed()) {
      RunConfig rc;
      rc.command = "eval";
      eval_c.apply(rc, [&](RunConfig& r) {
        if (episodes) r.eval_episodes = *episodes;
      });
      echo(rc, err, !eval_c.out.empty());
      if (checkpoint.empty() == policy_name.empty()) throw ConfigError("eval needs exactly one of --checkpoint, --policy");
      ActionPolicy policy;
      if (!checkpoint.empty()) {
        std::ifstream in(checkpoint, std::ios::binary);
        if (!in) throw ConfigError("cannot read " + checkpoint);
        auto trainer = rl::Trainer::load(in, rc.train);
        policy = greedy_policy(std::make_shared<rl::Policy<float>>(trainer.policy()));
        rc.env.obs = env::ObsMode::Features;
      } else {
        auto p = scripted_policy(policy_name, rc.env.seed);
        if (!p) throw ConfigError("unknown policy '" + policy_name + "' (valid: noop, safe, random)");
        policy = *p;
      }
      const EvalSummary s = evaluate(rc.env, rc.eval_episodes, policy);
      write_eval_csv(out, s);
      print_summary(out, s);
      if (!eval_c.out.empty()) write_file(rc.out_dir / "eval.csv", [&](std::ostream& o) { write_eval_csv(o, s); });
      return kOk;
    }
    if (benchc->parsed()) {
      RunConfig rc;
      rc.command = "bench";
      bench_c.apply(rc, [](RunConfig&) {});
      echo(rc, err, !bench_c.out.empty());
      if (bench_mode != "features" && bench_mode != "pixels" && bench_mode != "both")
        throw ConfigError("--mode must be features, pixels or both");
      if (seconds < 0) throw ConfigError("--seconds must be >= 0");
      std::vector<int> workers{1};
      if (!workers_arg.empty()) {
        workers.clear();
        for (const auto& w : split_list(workers_arg)) workers.push_back(std::stoi(w));
      } else if (const int t = omp_get_max_threads(); t > 1) {
        workers.push_back(t);
      }
      std::vector<BenchRow> rows;
      for (const std::string m : {"features", "pixels"}) {
        if (bench_mode != "both" && bench_mode != m) continue;
        env::EnvSpec s = rc.env;
        s.obs = m == "pixels" ? env::ObsMode::Pixels : env::ObsMode::Features;
        for (int w : workers) rows.push_back(bench(s, w, seconds));
      }
      write_bench_csv(out, rows);
      if (!bench_c.out.empty()) write_file(rc.out_dir / "bench.csv", [&](std::ostream& o) { write_bench_csv(o, rows); });
      return kOk;
    }
    if (cur->parsed()) {
      RunConfig rc;
      rc.command = "curriculum";
      cur_c.apply(rc, [&](RunConfig& r) {
        if (!method.empty()) r.set("method", method);
        if (steps_per_level) r.steps = *steps_per_level;
        if (episodes) r.eval_episodes = *episodes;
      });
      echo(rc, err, true);
      CurriculumResult res = curriculum(rc.env, rc.train, rc.steps);
      write_file(rc.out_dir / "log.csv", [&](std::ostream& o) { res.log.write_csv(o); });
      {
        auto m = open_out(rc.out_dir / "markers.csv");
        m << "row,marker\n";
        for (const auto& [row, text] : res.log.markers) m << row << ',' << text << '\n';
      }
      {
        auto h = open_out(rc.out_dir / "levels.csv");
        h << "level,first_rollout_hash,end_hash\n";
        for (std::size_t i = 0; i < res.end_hash.size(); ++i) {
          char buf[96];
          std::snprintf(buf, sizeof buf, "%zu,%016llx,%016llx\n", i + 1,
                        static_cast<unsigned long long>(res.first_hash[i]),
                        static_cast<unsigned long long>(res.end_hash[i]));
          h << buf;
        }
      }
      {
        auto ck = open_out(rc.out_dir / "ckpt.bin", true);
        res.trainer->save(ck);
      }
      write_heatmap_files(rc.out_dir, res.trainer->heatmap(), rc.env, err);
      env::EnvSpec final_spec = rc.env;
      final_spec.level = 3;
      final_spec.obs = env::ObsMode::Features;
      const EvalSummary s = evaluate(
          final_spec, rc.eval_episodes, greedy_policy(std::make_shared<rl::Policy<float>>(res.trainer->policy())));
      write_file(rc.out_dir / "eval.csv", [&](std::ostream& o) { write_eval_csv(o, s); });
      print_summary(out, s);
      return kOk;
    }
    if (heat->parsed()) {
      std::ifstream in(fs::path(run_dir) / "visits.txt");
      if (!in) throw NoData("no visits.txt in " + run_dir);
      const VisitData v = read_visits(in);
      if (window > v.episodes.size() && !v.episodes.empty())
        err << "warning: window " << window << " exceeds the " << v.episodes.size() << " recorded episodes; using all\n";
      const GrayImage img = heatmap_image(v, window);
      const fs::path path = heat_out.empty() ? fs::path(run_dir) / "heatmap.pgm" : fs::path(heat_out);
      auto o = open_out(path, true);
      write_pgm(o, img);
      out << "wrote " << path.string() << '\n';
      return kOk;
    }
    if (serve->parsed()) {
      RunConfig rc;
      rc.command = "serve";
      serve_c.apply(rc, [&](RunConfig& r) {
        r.env.obs = env::ObsMode::Pixels;
        if (action_mode == "full") r.env.action = env::ActionMode::FullDiscrete;
        else if (action_mode == "simplified") r.env.action = env::ActionMode::Simplified;
        else throw ConfigError("--action must be full or simplified");
      });
      echo(rc, err, false);
      play::Session session(rc.env, record_dir.empty() ? std::nullopt : std::optional<fs::path>(record_dir));
      play::ServerOptions opts;
      opts.port = port;
      opts.lockstep = lockstep;
      opts.max_episodes = serve_episodes;
      opts.step_seconds = step_seconds;
      opts.on_listen = [&](int p) { err << "listening on port " << p << std::endl; };
      play::serve(session, opts);
      out << session.summary_line() << '\n';
      return kOk;
    }
    if (rep->parsed()) {
      std::vector<fs::path> files;
      for (const auto& r : recordings) {
        if (fs::is_directory(r)) {
          for (const auto& e : fs::directory_iterator(r))
            if (e.path().extension() == ".rec") files.push_back(e.path());
        } else {
          files.emplace_back(r);
        }
      }
      std::sort(files.begin(), files.end());
      for (const auto& f : files) {
        std::ifstream in(f);
        if (!in) throw ConfigError("cannot read " + f.string());
        const auto rec = play::Recording::parse(in);
        const auto res = play::replay(rec);
        char buf[160];
        std::snprintf(buf, sizeof buf, " steps %d R %.17g C %.17g ok\n", res.steps, res.reward_total, res.cost_total);
        out << f.string() << buf;
      }
      return kOk;
    }
  } catch (const NonFinite& e) {
    err << "error: " << e.what() << '\n';
    return kNumericError;
  } catch (const DivergenceDetected& e) {
    err << "error: divergence at step " << e.step << ": " << e.what() << '\n';
    return kDivergence;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ShapeMismatch& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const EnvMismatch& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const NoData& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kOk;
}

}  // namespace hasard::cli

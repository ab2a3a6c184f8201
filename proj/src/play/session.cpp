#include "hasard/play/session.hpp"

#include <cstdio>
#include <fstream>

#include "hasard/core/errors.hpp"

namespace hasard::play {

Session::Session(env::EnvSpec spec, std::optional<std::filesystem::path> record_dir)
    : env_([&] {
        spec.auto_reset = false;
        return env::Env(spec);
      }()),
      record_dir_(std::move(record_dir)) {
  if (record_dir_) std::filesystem::create_directories(*record_dir_);
}

std::vector<int> Session::resolve_keys() const {
  const auto held = buttons_of(keys());
  return env_.actions().from_buttons(held);
}

Update Session::make_update(bool with_frame) {
  Update u;
  u.seq = ++seq_;
  if (with_frame) {
    const auto& s = env_.spec();
    u.frame = env_.render(s.width, s.height, s.hud);
  }
  u.state.step = env_.step_count();
  u.state.reward_total = env_.episode_return();
  u.state.cost_total = env_.episode_cost();
  u.state.budget = env_.budget();
  u.state.done = env_.done();
  return u;
}

Update Session::begin_episode() {
  if (recorder_) abort();
  env_.reset();
  recorder_.emplace(env_, utc_timestamp());
  return make_update(true);
}

Update Session::step(bool with_frame) {
  if (!recorder_) throw EpisodeFinished();
  const auto groups = resolve_keys();
  env_.step(groups);
  recorder_->record(env_, groups);
  Update u = make_update(with_frame);
  if (env_.done()) {
    completed_.emplace_back(env_.episode_return(), env_.episode_cost());
    write_recording(true);
  }
  return u;
}

void Session::abort() {
  if (recorder_) write_recording(false);
}

void Session::write_recording(bool completed) {
  Recording rec = recorder_->finish(env_, completed);
  recorder_.reset();
  const int index = episode_index_++;
  if (!record_dir_) return;
  char name[32];
  std::snprintf(name, sizeof name, "episode_%04d.rec", index);
  const auto path = *record_dir_ / name;
  std::ofstream out(path);
  rec.write(out);
  if (!out) throw std::runtime_error("cannot write recording " + path.string());
  files_.push_back(path);
}

std::string Session::summary_line() const {
  double r = 0, c = 0;
  for (const auto& [er, ec] : completed_) {
    r += er;
    c += ec;
  }
  const double n = completed_.empty() ? 1.0 : static_cast<double>(completed_.size());
  char buf[128];
  std::snprintf(buf, sizeof buf, "episodes %zu mean_R %.4f mean_C %.4f", completed_.size(), r / n, c / n);
  return buf;
}

}  // namespace hasard::play

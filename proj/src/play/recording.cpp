#include "hasard/play/recording.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <istream>
#include <ostream>
#include <sstream>

#include "hasard/core/errors.hpp"
#include "hasard/core/hash.hpp"

namespace hasard::play {

namespace {

constexpr std::string_view kMagic = "HASARD-RECORDING 1";

std::string hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
bool read_number(std::string_view tok, T& out, int base = 10) {
  const char* end = tok.data() + tok.size();
  std::from_chars_result r;
  if constexpr (std::is_floating_point_v<T>)
    r = std::from_chars(tok.data(), end, out);
  else
    r = std::from_chars(tok.data(), end, out, base);
  return r.ec == std::errc{} && r.ptr == end;
}

std::vector<std::string_view> words(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

void CheckpointDigest::add_action(std::span<const int> groups) {
  Hasher h;
  h.u64(actions_);
  for (int g : groups) h.i64(g);
  actions_ = h.value();
}

std::uint64_t CheckpointDigest::checkpoint(const env::Env& env) const {
  Hasher h;
  h.u64(env.state_hash());
  h.u64(actions_);
  return h.value();
}

void Recording::write(std::ostream& out) const {
  out << kMagic << '\n';
  out << "env " << env_id << '\n';
  std::istringstream spec_lines(spec.serialize());
  for (std::string line; std::getline(spec_lines, line);)
    if (!line.empty()) out << "spec " << line << '\n';
  out << "seed " << seed << '\n';
  out << "start " << start << '\n';
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const int step = static_cast<int>(i) + 1;
    out << step;
    for (int g : actions[i]) out << ' ' << g;
    out << '\n';
    if (const auto it = hashes.find(step); it != hashes.end()) out << "hash " << step << ' ' << hex(it->second) << '\n';
  }
  out << "end " << (completed ? "completed" : "aborted") << ' ' << exact(reward_total) << ' ' << exact(cost_total)
      << ' ' << actions.size() << ' ' << hex(final_hash) << '\n';
}

Recording Recording::parse(std::istream& in) {
  Recording rec;
  std::string line;
  if (!std::getline(in, line) || line != kMagic) throw EnvMismatch("not a recording (bad magic line)");
  std::string spec_text;
  bool have_env = false, have_seed = false, ended = false;
  int expected_step = 1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (ended) throw DivergenceDetected(expected_step, "content after the end line");
    const auto w = words(line);
    const std::string_view head = w.front();
    if (head == "env" && w.size() == 2) {
      rec.env_id = std::string(w[1]);
      have_env = true;
    } else if (head == "spec" && w.size() == 2) {
      spec_text += std::string(w[1]) + '\n';
    } else if (head == "seed" && w.size() == 2) {
      if (!read_number(w[1], rec.seed)) throw EnvMismatch("bad seed line");
      have_seed = true;
    } else if (head == "start") {
      rec.start = line.size() > 6 ? line.substr(6) : std::string();
    } else if (head == "hash") {
      int step = 0;
      std::uint64_t v = 0;
      if (w.size() != 3 || !read_number(w[1], step) || !read_number(w[2], v, 16))
        throw DivergenceDetected(expected_step, "malformed hash line: " + line);
      rec.hashes[step] = v;
    } else if (head == "end") {
      std::size_t steps = 0;
      if (w.size() != 6 || (w[1] != "completed" && w[1] != "aborted") || !read_number(w[2], rec.reward_total) ||
          !read_number(w[3], rec.cost_total) || !read_number(w[4], steps) || !read_number(w[5], rec.final_hash, 16))
        throw DivergenceDetected(expected_step, "malformed end line: " + line);
      if (steps != rec.actions.size()) throw DivergenceDetected(expected_step, "end line step count does not match rows");
      rec.completed = w[1] == "completed";
      ended = true;
    } else {
      int step = 0;
      if (!read_number(head, step)) throw DivergenceDetected(expected_step, "unrecognised line: " + line);
      if (step != expected_step) throw DivergenceDetected(expected_step, "action rows out of order at step " + std::to_string(step));
      std::vector<int> groups;
      for (std::size_t i = 1; i < w.size(); ++i) {
        int g = 0;
        if (!read_number(w[i], g)) throw DivergenceDetected(expected_step, "bad action index at step " + std::to_string(step));
        groups.push_back(g);
      }
      rec.actions.push_back(std::move(groups));
      ++expected_step;
    }
  }
  if (!have_env || !have_seed) throw EnvMismatch("recording header lacks env or seed");
  try {
    rec.spec = env::EnvSpec::parse(spec_text);
  } catch (const ConfigError& e) {
    throw EnvMismatch(std::string("recorded env spec is invalid: ") + e.what());
  }
  if (rec.spec.env_id() != rec.env_id) throw EnvMismatch("env id '" + rec.env_id + "' does not match recorded spec");
  if (!ended) throw DivergenceDetected(expected_step, "recording has no end line");
  return rec;
}

Recorder::Recorder(const env::Env& env, std::string start_timestamp) {
  rec_.spec = env.spec();
  rec_.spec.auto_reset = false;
  rec_.env_id = env.spec().env_id();
  rec_.seed = env.episode_seed();
  rec_.start = std::move(start_timestamp);
}

void Recorder::record(const env::Env& env, std::span<const int> groups) {
  rec_.actions.emplace_back(groups.begin(), groups.end());
  digest_.add_action(groups);
  const int step = static_cast<int>(rec_.actions.size());
  if (step % kHashInterval == 0) rec_.hashes[step] = digest_.checkpoint(env);
}

Recording Recorder::finish(const env::Env& env, bool completed) {
  rec_.completed = completed;
  rec_.reward_total = env.episode_return();
  rec_.cost_total = env.episode_cost();
  rec_.final_hash = digest_.checkpoint(env);
  return std::move(rec_);
}

ReplayResult replay(const Recording& rec) {
  std::optional<env::Env> env;
  try {
    env::EnvSpec spec = rec.spec;
    spec.auto_reset = false;
    spec.obs = env::ObsMode::Features;  // rendering does not affect simulation state
    spec.validate();
    if (spec.env_id() != rec.env_id) throw EnvMismatch("env id does not match recorded spec");
    env.emplace(spec);
  } catch (const ConfigError& e) {
    throw EnvMismatch(std::string("cannot build recorded env: ") + e.what());
  }
  env->reset(rec.seed);
  const auto sizes = env->actions().group_sizes();
  CheckpointDigest digest;
  ReplayResult out;
  for (std::size_t i = 0; i < rec.actions.size(); ++i) {
    const int step = static_cast<int>(i) + 1;
    const auto& groups = rec.actions[i];
    if (groups.size() != sizes.size()) throw EnvMismatch("action row width does not match the env's action groups");
    for (std::size_t g = 0; g < groups.size(); ++g)
      if (groups[g] < 0 || groups[g] >= sizes[g])
        throw DivergenceDetected(step, "action index out of range at step " + std::to_string(step));
    if (env->done()) throw DivergenceDetected(step, "episode ended before step " + std::to_string(step));
    env->step(groups);
    digest.add_action(groups);
    if (const auto it = rec.hashes.find(step); it != rec.hashes.end() && it->second != digest.checkpoint(*env))
      throw DivergenceDetected(step, "state hash mismatch at step " + std::to_string(step));
  }
  out.steps = static_cast<int>(rec.actions.size());
  out.reward_total = env->episode_return();
  out.cost_total = env->episode_cost();
  if (digest.checkpoint(*env) != rec.final_hash) throw DivergenceDetected(out.steps, "final state hash mismatch");
  if (out.reward_total != rec.reward_total || out.cost_total != rec.cost_total)
    throw DivergenceDetected(out.steps, "replayed totals differ from the recorded footer");
  return out;
}

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace hasard::play

#include <charconv>
#include <set>
#include <sstream>

#include "hasard/cli/cli.hpp"
#include "hasard/core/errors.hpp"

namespace hasard::cli {

namespace {

std::set<std::string, std::less<>> keys_of(const std::string& serialized) {
  std::set<std::string, std::less<>> keys;
  std::istringstream in(serialized);
  for (std::string line; std::getline(in, line);)
    if (const auto eq = line.find('='); eq != std::string::npos) keys.insert(line.substr(0, eq));
  return keys;
}

const std::set<std::string, std::less<>>& env_keys() {
  static const auto keys = [] {
    auto k = keys_of(env::EnvSpec{}.serialize());
    k.insert("env");
    k.insert("budget");
    return k;
  }();
  return keys;
}

const std::set<std::string, std::less<>>& train_keys() {
  static const auto keys = keys_of(rl::TrainConfig{}.serialize());
  return keys;
}

template <class T>
T number(std::string_view key, std::string_view v) {
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ConfigError("bad value for '" + std::string(key) + "': '" + std::string(v) + "'");
  return out;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

}  // namespace

bool is_env_key(std::string_view key) { return env_keys().contains(key); }
bool is_train_key(std::string_view key) { return train_keys().contains(key); }

void RunConfig::set(std::string_view key, std::string_view value) {
  if (key == "command") command = std::string(value);
  else if (key == "out") out_dir = std::string(value);
  else if (key == "steps") steps = number<std::int64_t>(key, value);
  else if (key == "eval_episodes") eval_episodes = number<int>(key, value);
  else if (key == "report_every") report_every = number<int>(key, value);
  else if (is_env_key(key)) env.set(key, value);
  else if (is_train_key(key)) train.set(key, value);
  else throw ConfigError("unknown config key '" + std::string(key) + "'");
}

void RunConfig::load_text(std::string_view text) {
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    std::string_view l = line;
    if (const auto hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
    l = trim(l);
    if (l.empty()) continue;
    const auto eq = l.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected key=value, got '" + std::string(l) + "'");
    set(trim(l.substr(0, eq)), trim(l.substr(eq + 1)));
  }
}

std::string RunConfig::serialize() const {
  std::ostringstream o;
  o << "# run\n"
    << "command=" << command << '\n'
    << "out=" << out_dir.string() << '\n'
    << "steps=" << steps << '\n'
    << "eval_episodes=" << eval_episodes << '\n'
    << "report_every=" << report_every << '\n'
    << "# env\n"
    << env.serialize() << "# train\n"
    << train.serialize();
  return o.str();
}

}  // namespace hasard::cli

#include <charconv>
#include <cmath>
#include <sstream>

#include "hasard/core/errors.hpp"
#include "hasard/env/env.hpp"

namespace hasard::env {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view v) {
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ConfigError("bad value for '" + std::string(key) + "': '" + std::string(v) + "'");
  return out;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "1" || v == "true" || v == "on" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "off" || v == "no") return false;
  throw ConfigError("bad boolean for '" + std::string(key) + "': '" + std::string(v) + "'");
}

std::string fmt_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

double default_budget(ScenarioId scenario, int level, ConstraintMode mode) {
  if (mode == ConstraintMode::Hard) return 0.0;
  switch (scenario) {
    case ScenarioId::ArmamentBurden:
    case ScenarioId::VolcanicVenture:
    case ScenarioId::PrecipicePlunge: return 50.0;
    case ScenarioId::RemedyRush:
    case ScenarioId::CollateralDamage:
    case ScenarioId::DetonatorsDilemma: return 5.0;
  }
  return 5.0;
}

void EnvSpec::set(std::string_view key, std::string_view value) {
  if (key == "env") {
    const EnvId id = parse_env_id(value);
    scenario = id.scenario;
    level = id.level;
  } else if (key == "scenario") {
    const auto id = scenario_from_name(value);
    if (!id) throw ConfigError("unknown scenario '" + std::string(value) + "'");
    scenario = *id;
  } else if (key == "level") {
    level = parse_number<int>(key, value);
  } else if (key == "constraint") {
    if (value == "soft") constraint = ConstraintMode::Soft;
    else if (value == "hard") constraint = ConstraintMode::Hard;
    else throw ConfigError("constraint must be soft or hard");
  } else if (key == "budget") {
    budget = parse_number<double>(key, value);
  } else if (key == "obs") {
    if (value == "features") obs = ObsMode::Features;
    else if (value == "pixels") obs = ObsMode::Pixels;
    else throw ConfigError("obs must be features or pixels");
  } else if (key == "width") {
    width = parse_number<int>(key, value);
  } else if (key == "height") {
    height = parse_number<int>(key, value);
  } else if (key == "channels") {
    channels = {false, false, false};
    std::string_view rest = value;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const std::string_view c = trim(rest.substr(0, comma));
      if (c == "rgb") channels.rgb = true;
      else if (c == "depth") channels.depth = true;
      else if (c == "labels") channels.labels = true;
      else throw ConfigError("unknown channel '" + std::string(c) + "'");
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
  } else if (key == "hud") {
    hud = parse_bool(key, value);
  } else if (key == "action") {
    if (value == "simplified") action = ActionMode::Simplified;
    else if (value == "full") action = ActionMode::FullDiscrete;
    else throw ConfigError("action must be simplified or full");
  } else if (key == "max_steps") {
    max_steps = parse_number<int>(key, value);
  } else if (key == "seed") {
    seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "auto_reset") {
    auto_reset = parse_bool(key, value);
  } else if (key == "map_size") {
    map_size = parse_number<int>(key, value);
  } else if (key == "capacity") {
    capacity = parse_number<double>(key, value);
  } else if (key == "table_weights") {
    table_weights = parse_bool(key, value);
  } else if (key == "pickup_reward") {
    pickup_reward = parse_number<double>(key, value);
  } else {
    throw ConfigError("unknown env key '" + std::string(key) + "'");
  }
}

EnvSpec EnvSpec::parse(std::string_view text) {
  EnvSpec spec;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::string_view l = line;
    if (const auto hash = l.find('#'); hash != std::string_view::npos) l = l.substr(0, hash);
    l = trim(l);
    if (l.empty()) continue;
    const auto eq = l.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected key=value, got '" + std::string(l) + "'");
    spec.set(trim(l.substr(0, eq)), trim(l.substr(eq + 1)));
  }
  spec.validate();
  return spec;
}

std::string EnvSpec::serialize() const {
  std::ostringstream o;
  o << "scenario=" << scenario_name(scenario) << '\n';
  o << "level=" << level << '\n';
  o << "constraint=" << (constraint == ConstraintMode::Hard ? "hard" : "soft") << '\n';
  if (budget) o << "budget=" << fmt_double(*budget) << '\n';
  o << "obs=" << (obs == ObsMode::Pixels ? "pixels" : "features") << '\n';
  o << "width=" << width << '\n' << "height=" << height << '\n';
  std::string ch;
  if (channels.rgb) ch += "rgb,";
  if (channels.depth) ch += "depth,";
  if (channels.labels) ch += "labels,";
  if (!ch.empty()) ch.pop_back();
  o << "channels=" << ch << '\n';
  o << "hud=" << (hud ? "true" : "false") << '\n';
  o << "action=" << (action == ActionMode::FullDiscrete ? "full" : "simplified") << '\n';
  o << "max_steps=" << max_steps << '\n';
  o << "seed=" << seed << '\n';
  o << "auto_reset=" << (auto_reset ? "true" : "false") << '\n';
  o << "map_size=" << map_size << '\n';
  o << "capacity=" << fmt_double(capacity) << '\n';
  o << "table_weights=" << (table_weights ? "true" : "false") << '\n';
  o << "pickup_reward=" << fmt_double(pickup_reward) << '\n';
  return o.str();
}

void EnvSpec::validate() const {
  if (level < 1 || level > 3) throw ConfigError("level must be 1, 2 or 3");
  if (budget) {
    if (!std::isfinite(*budget)) throw ConfigError("budget must be finite");
    if (constraint == ConstraintMode::Soft && !(*budget > 0.0))
      throw ConfigError("soft constraint needs budget > 0");
    if (constraint == ConstraintMode::Hard && *budget != 0.0) throw ConfigError("hard constraint implies budget 0");
  }
  if (width < 8 || height < 8) throw ConfigError("render size must be at least 8x8");
  if (obs == ObsMode::Pixels && !channels.rgb && !channels.depth && !channels.labels)
    throw ConfigError("pixel observations need at least one channel");
  if (max_steps <= 0) throw ConfigError("max_steps must be positive");
  if (map_size < 0 || (map_size > 0 && map_size < 4) || map_size > 256)
    throw ConfigError("map_size must be 0 (default) or in [4, 256]");
  if (!(capacity > 0.0)) throw ConfigError("capacity must be positive");
  if (!(pickup_reward >= 0.0)) throw ConfigError("pickup_reward must be non-negative");
}

double EnvSpec::effective_budget() const {
  if (constraint == ConstraintMode::Hard) return 0.0;
  return budget ? *budget : default_budget(scenario, level, constraint);
}

scenarios::ScenarioOptions EnvSpec::scenario_options() const {
  scenarios::ScenarioOptions o;
  o.mode = constraint;
  o.map_size = map_size;
  o.capacity = capacity;
  o.table_weights = table_weights;
  o.pickup_reward = pickup_reward;
  return o;
}

}  // namespace hasard::env

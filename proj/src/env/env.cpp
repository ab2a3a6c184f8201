#include "hasard/env/env.hpp"

#include <cmath>

#include "hasard/core/errors.hpp"

namespace hasard::env {

Env::Env(EnvSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
  scenario_ = scenarios::make_scenario(level_config(spec_.scenario, spec_.level), spec_.scenario_options());
  actions_ = spec_.action == ActionMode::FullDiscrete ? ActionEncoding::full_discrete()
                                                       : ActionEncoding(scenario_->simplified_actions());
  budget_ = spec_.effective_budget();
}

Env::Env(Env&&) noexcept = default;
Env& Env::operator=(Env&&) noexcept = default;
Env::~Env() = default;

Observation Env::reset(std::optional<std::uint64_t> seed) {
  episode_seed_ = seed ? *seed : derive_seed(spec_.seed, episodes_started_);
  ++episodes_started_;
  rng_ = Rng(episode_seed_);
  world_ = World{};
  scenario_->reset(world_, rng_);
  world_.agent.fall_origin_z = world_.agent.pose.z;
  heatmap_.begin_episode(world_.grid.width(), world_.grid.height());
  heatmap_.record_visit(TileGrid::tile_of(world_.agent.pose.x, world_.agent.pose.y));
  started_ = true;
  done_ = false;
  violation_ = false;
  steps_ = 0;
  episode_return_ = 0.0;
  episode_cost_ = 0.0;
  return observe();
}

StepResult Env::step(int flat_action) { return step(actions_.decode(flat_action)); }

StepResult Env::step(std::span<const int> group_indices) {
  if (!started_ || done_) throw EpisodeFinished();
  const ResolvedAction action = actions_.resolve(group_indices);
  const bool hard = spec_.constraint == ConstraintMode::Hard;

  scenarios::TickOutcome total;
  for (int k = 0; k < kFrameSkip; ++k) {
    ResolvedAction a = action;
    if (k > 0) a.turn180 = false;
    if (a.turn180) world_.agent.pose.yaw = wrap_degrees(world_.agent.pose.yaw + 180.0);
    scenario_->before_tick(world_, a, rng_);
    const TickEvents ev = tick_physics(world_, a);
    const scenarios::TickOutcome out = scenario_->tick(world_, a, ev, rng_);
    total += out;
    if ((hard && total.cost > 0.0) || out.done) break;
  }
  total += scenario_->end_step(world_);
  if (!std::isfinite(total.reward) || !std::isfinite(total.cost))
    throw NonFinite("non-finite reward or cost in " + spec_.env_id());

  ++steps_;
  episode_return_ += total.reward;
  episode_cost_ += total.cost;
  heatmap_.record_visit(TileGrid::tile_of(world_.agent.pose.x, world_.agent.pose.y));

  StepResult r;
  r.reward = total.reward;
  r.cost = total.cost;
  if (hard && total.cost > 0.0) violation_ = true;
  r.terminated = total.done || (hard && violation_);
  r.truncated = !r.terminated && steps_ >= spec_.max_steps;
  done_ = r.terminated || r.truncated;

  r.info.step = steps_;
  r.info.episode_cost = episode_cost_;
  r.info.episode_return = (hard && violation_) ? 0.0 : episode_return_;
  r.info.violation = hard ? violation_ : episode_cost_ > budget_;

  if (done_ && spec_.auto_reset) {
    r.obs = reset();
    r.info.auto_reset = true;
  } else {
    r.obs = observe();
  }
  return r;
}

int Env::feature_size() const { return env::feature_size(*scenario_); }

std::vector<float> Env::features() const {
  std::vector<float> f(static_cast<std::size_t>(feature_size()));
  feature_observation(world_, *scenario_, f);
  return f;
}

HudValues Env::hud_values() const {
  HudValues h;
  h.health = world_.agent.max_health > 0 ? world_.agent.health / world_.agent.max_health : 0.0;
  h.weight = std::min(1.0, scenario_->load_fraction(world_) / 2.0);
  h.budget = budget_ > 0.0 ? std::min(1.0, episode_cost_ / budget_) : (episode_cost_ > 0.0 ? 1.0 : 0.0);
  return h;
}

FrameSet Env::render(int width, int height, bool hud) const {
  RenderOptions o;
  o.width = width;
  o.height = height;
  o.hud = hud;
  o.hud_values = hud_values();
  return raycast_render(world_, world_.agent.pose, o);
}

Observation Env::observe() const {
  Observation obs;
  if (spec_.obs == ObsMode::Features) {
    obs.features = features();
  } else {
    obs.frame = render(spec_.width, spec_.height, spec_.hud);
    if (!spec_.channels.rgb) obs.frame.rgb.clear();
    if (!spec_.channels.depth) obs.frame.depth.clear();
    if (!spec_.channels.labels) obs.frame.labels.clear();
  }
  return obs;
}

std::uint64_t Env::state_hash() const {
  Hasher h;
  const TileGrid& g = world_.grid;
  h.i64(g.width());
  h.i64(g.height());
  for (const Tile& t : g.tiles()) {
    h.u64(static_cast<std::uint64_t>(t.kind));
    h.f64(t.floor_z);
    h.f64(t.ceiling_z);
  }
  for (const Entity& e : world_.entities) {
    h.i64(e.id);
    h.u64(static_cast<std::uint64_t>(e.kind));
    h.u64(static_cast<std::uint64_t>(e.type));
    h.f64(e.x);
    h.f64(e.y);
    h.f64(e.z);
    h.f64(e.hp);
    h.f64(e.vel.x);
    h.f64(e.vel.y);
    h.boolean(e.alive);
    h.i64(e.target);
  }
  const AgentState& a = world_.agent;
  for (double v : {a.pose.x, a.pose.y, a.pose.z, a.pose.yaw, a.pose.pitch, a.health, a.speed, a.carried_weight,
                   a.fall_origin_z, a.vz})
    h.f64(v);
  h.boolean(a.airborne);
  h.u64(world_.tick);
  h.f64(world_.brightness);
  h.u64(rng_.state());
  scenario_->hash_state(h);
  h.i64(steps_);
  h.f64(episode_return_);
  h.f64(episode_cost_);
  return h.value();
}

}  // namespace hasard::env

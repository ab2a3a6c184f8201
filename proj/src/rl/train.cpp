#include "hasard/rl/train.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "hasard/core/hash.hpp"
#include "hasard/env/vector_env.hpp"

namespace hasard::rl {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

template <class T>
T parse_num(std::string_view key, std::string_view v) {
  T out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ConfigError("bad value for '" + std::string(key) + "': '" + std::string(v) + "'");
  return out;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

double mean_of(const std::deque<double>& d) {
  if (d.empty()) return std::numeric_limits<double>::quiet_NaN();
  double s = 0.0;
  for (double v : d) s += v;
  return s / static_cast<double>(d.size());
}

void push_bounded(std::deque<double>& d, double v, int cap) {
  d.push_back(v);
  while (static_cast<int>(d.size()) > cap) d.pop_front();
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::PPO: return "ppo";
    case Method::PPOCost: return "ppocost";
    case Method::PPOLag: return "ppolag";
    case Method::PPOPID: return "ppopid";
  }
  return "ppo";
}

std::optional<Method> method_from_name(std::string_view name) {
  const std::string n = lower(name);
  if (n == "ppo") return Method::PPO;
  if (n == "ppocost") return Method::PPOCost;
  if (n == "ppolag") return Method::PPOLag;
  if (n == "ppopid") return Method::PPOPID;
  return std::nullopt;
}

void TrainConfig::validate() const {
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("gamma must be in (0, 1]");
  if (!(gae_lambda >= 0.0 && gae_lambda <= 1.0)) throw ConfigError("gae_lambda must be in [0, 1]");
  if (!(lr > 0.0)) throw ConfigError("lr must be positive");
  if (num_envs <= 0 || rollout <= 0) throw ConfigError("num_envs and rollout must be positive");
  if (minibatch <= 0 || batch_size() % minibatch != 0) throw ConfigError("minibatch must divide num_envs * rollout");
  if (epochs <= 0) throw ConfigError("epochs must be positive");
  if (!(kappa >= 0.0)) throw ConfigError("kappa must be non-negative");
  if (!(lambda_rate > 0.0)) throw ConfigError("lambda_rate must be positive");
  if (lambda_init < 0.0) throw ConfigError("lambda_init must be non-negative");
  if (pid_kp < 0.0 || pid_ki < 0.0 || pid_kd < 0.0) throw ConfigError("PID gains must be non-negative");
  if (hidden.empty()) throw ConfigError("need at least one hidden layer");
  for (int h : hidden)
    if (h <= 0) throw ConfigError("hidden sizes must be positive");
  if (cost_window <= 0 || log_window <= 0 || log_every <= 0) throw ConfigError("windows must be positive");
}

void TrainConfig::set(std::string_view key, std::string_view v) {
  if (key == "method") {
    const auto m = method_from_name(v);
    if (!m) throw ConfigError("unknown method '" + std::string(v) + "' (valid: " + std::string(kMethodNames) + ")");
    method = *m;
  } else if (key == "gamma") gamma = parse_num<double>(key, v);
  else if (key == "gae_lambda") gae_lambda = parse_num<double>(key, v);
  else if (key == "clip") loss.clip = parse_num<double>(key, v);
  else if (key == "value_clip") loss.value_clip = parse_num<double>(key, v);
  else if (key == "value_coeff") loss.value_coeff = parse_num<double>(key, v);
  else if (key == "entropy_coeff") loss.entropy_coeff = parse_num<double>(key, v);
  else if (key == "lr") lr = parse_num<double>(key, v);
  else if (key == "num_envs") num_envs = parse_num<int>(key, v);
  else if (key == "rollout") rollout = parse_num<int>(key, v);
  else if (key == "minibatch") minibatch = parse_num<int>(key, v);
  else if (key == "epochs") epochs = parse_num<int>(key, v);
  else if (key == "max_grad_norm") max_grad_norm = parse_num<double>(key, v);
  else if (key == "adam_eps") adam_eps = parse_num<double>(key, v);
  else if (key == "kl_threshold") kl_threshold = parse_num<double>(key, v);
  else if (key == "hidden") {
    hidden.clear();
    std::string_view rest = v;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      hidden.push_back(parse_num<int>(key, rest.substr(0, comma)));
      rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
    }
  } else if (key == "init_gain") init_gain = parse_num<double>(key, v);
  else if (key == "kappa") kappa = parse_num<double>(key, v);
  else if (key == "lambda_init") lambda_init = parse_num<double>(key, v);
  else if (key == "lambda_rate") lambda_rate = parse_num<double>(key, v);
  else if (key == "pid_kp") pid_kp = parse_num<double>(key, v);
  else if (key == "pid_ki") pid_ki = parse_num<double>(key, v);
  else if (key == "pid_kd") pid_kd = parse_num<double>(key, v);
  else if (key == "normalize_combined") {
    if (v == "true" || v == "1") normalize_combined = true;
    else if (v == "false" || v == "0") normalize_combined = false;
    else throw ConfigError("normalize_combined must be true or false");
  } else if (key == "cost_window") cost_window = parse_num<int>(key, v);
  else if (key == "log_window") log_window = parse_num<int>(key, v);
  else if (key == "log_every") log_every = parse_num<int>(key, v);
  else if (key == "train_seed") seed = parse_num<std::uint64_t>(key, v);
  else throw ConfigError("unknown train key '" + std::string(key) + "'");
}

std::string TrainConfig::serialize() const {
  std::ostringstream o;
  o << "method=" << method_name(method) << '\n'
    << "gamma=" << fmt(gamma) << '\n'
    << "gae_lambda=" << fmt(gae_lambda) << '\n'
    << "clip=" << fmt(loss.clip) << '\n'
    << "value_clip=" << fmt(loss.value_clip) << '\n'
    << "value_coeff=" << fmt(loss.value_coeff) << '\n'
    << "entropy_coeff=" << fmt(loss.entropy_coeff) << '\n'
    << "lr=" << fmt(lr) << '\n'
    << "num_envs=" << num_envs << '\n'
    << "rollout=" << rollout << '\n'
    << "minibatch=" << minibatch << '\n'
    << "epochs=" << epochs << '\n'
    << "max_grad_norm=" << fmt(max_grad_norm) << '\n'
    << "adam_eps=" << fmt(adam_eps) << '\n'
    << "kl_threshold=" << fmt(kl_threshold) << '\n';
  o << "hidden=";
  for (std::size_t i = 0; i < hidden.size(); ++i) o << (i ? "," : "") << hidden[i];
  o << '\n'
    << "init_gain=" << fmt(init_gain) << '\n'
    << "kappa=" << fmt(kappa) << '\n'
    << "lambda_init=" << fmt(lambda_init) << '\n'
    << "lambda_rate=" << fmt(lambda_rate) << '\n'
    << "pid_kp=" << fmt(pid_kp) << '\n'
    << "pid_ki=" << fmt(pid_ki) << '\n'
    << "pid_kd=" << fmt(pid_kd) << '\n'
    << "normalize_combined=" << (normalize_combined ? "true" : "false") << '\n'
    << "cost_window=" << cost_window << '\n'
    << "log_window=" << log_window << '\n'
    << "log_every=" << log_every << '\n'
    << "train_seed=" << seed << '\n';
  return o.str();
}

void TrainLog::write_csv(std::ostream& out) const {
  out << kHeader << '\n';
  for (const auto& r : rows) {
    out << r.step << ',' << fmt(r.mean_return) << ',' << fmt(r.mean_cost) << ',' << fmt(r.lambda) << ','
        << fmt(r.pi_loss) << ',' << fmt(r.v_loss) << ',' << fmt(r.vc_loss) << ',' << fmt(r.entropy) << ','
        << fmt(r.kl) << '\n';
  }
}

std::string TrainLog::to_csv() const {
  std::ostringstream o;
  write_csv(o);
  return o.str();
}

void Adam::step(Eigen::VectorXf& params, const Eigen::VectorXf& grad, double lr, double b1, double b2, double eps) {
  ++t;
  const float fb1 = static_cast<float>(b1), fb2 = static_cast<float>(b2);
  m = fb1 * m + (1.0f - fb1) * grad;
  v = fb2 * v + (1.0f - fb2) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t));
  const float step = static_cast<float>(lr * std::sqrt(c2) / c1);
  const float e = static_cast<float>(eps * std::sqrt(c2));
  params.array() -= step * m.array() / (v.array().sqrt() + e);
}

std::vector<int> greedy_action(const Policy<float>& policy, std::span<const float> obs) {
  Eigen::MatrixXf x = Eigen::Map<const Eigen::VectorXf>(obs.data(), static_cast<Eigen::Index>(obs.size()));
  const auto f = policy.forward(x);
  const auto& sizes = policy.shape().group_sizes;
  const auto off = group_offsets(sizes);
  std::vector<int> out(sizes.size());
  for (std::size_t g = 0; g < sizes.size(); ++g) {
    Eigen::Index best = 0;
    f.logits.col(0).segment(off[g], sizes[g]).maxCoeff(&best);
    out[g] = static_cast<int>(best);
  }
  return out;
}

double sample_action(const Policy<float>& policy, const Eigen::VectorXf& logits, Rng& rng, std::vector<int>& out) {
  const auto& sizes = policy.shape().group_sizes;
  const auto off = group_offsets(sizes);
  out.resize(sizes.size());
  double logp = 0.0;
  for (std::size_t g = 0; g < sizes.size(); ++g) {
    const Eigen::VectorXf lp = log_softmax(logits.segment(off[g], sizes[g]));
    const double u = rng.uniform();
    double acc = 0.0;
    int pick = sizes[g] - 1;
    for (int j = 0; j < sizes[g]; ++j) {
      acc += std::exp(static_cast<double>(lp(j)));
      if (u < acc) {
        pick = j;
        break;
      }
    }
    out[g] = pick;
    logp += lp(pick);
  }
  return logp;
}

PolicyShape policy_shape_for(const env::EnvSpec& spec, const std::vector<int>& hidden) {
  env::EnvSpec s = spec;
  s.obs = env::ObsMode::Features;
  env::Env probe(s);
  PolicyShape shape;
  shape.obs_dim = probe.feature_size();
  shape.hidden = hidden;
  shape.group_sizes = probe.actions().group_sizes();
  return shape;
}

Trainer::Trainer(TrainConfig cfg, PolicyShape shape) : cfg_(std::move(cfg)), policy_(std::move(shape)) {
  cfg_.validate();
  rng_ = Rng(derive_seed(cfg_.seed, 0x7472));
  Rng init_rng(derive_seed(cfg_.seed, 0x696e));
  policy_.init_orthogonal(init_rng, cfg_.init_gain);
  adam_.reset(static_cast<Eigen::Index>(policy_.num_params()));
  lambda_ = cfg_.method == Method::PPOLag ? cfg_.lambda_init : 0.0;
  pid_.kp = cfg_.pid_kp;
  pid_.ki = cfg_.pid_ki;
  pid_.kd = cfg_.pid_kd;
}

std::uint64_t Trainer::params_hash() const {
  Hasher h;
  const auto& p = policy_.params();
  h.bytes({reinterpret_cast<const std::uint8_t*>(p.data()), static_cast<std::size_t>(p.size()) * sizeof(float)});
  return h.value();
}

void Trainer::update_multiplier(double xi) {
  if (cost_window_.empty()) return;
  const double jc = mean_of(cost_window_);
  if (cfg_.method == Method::PPOLag) {
    lambda_ = lagrange_update({lambda_}, jc, xi, cfg_.lambda_rate).lambda;
  } else if (cfg_.method == Method::PPOPID) {
    const PidOutput o = pid_update(pid_, jc, xi);
    pid_ = o.state;
    lambda_ = o.lambda;
  }
}

LossStats Trainer::learn(const LossBatch<float>& batch, bool& stop) {
  Eigen::VectorXf grad;
  const LossStats st = ppo_loss(policy_, batch, cfg_.loss, &grad);
  if (!std::isfinite(st.total) || !grad.allFinite()) {
    std::ostringstream msg;
    msg << "non-finite loss or gradient at step " << global_step_ << " (pi " << st.policy << ", v " << st.value_reward
        << ", vc " << st.value_cost << ", entropy " << st.entropy << ")";
    throw NonFinite(msg.str());
  }
  if (st.approx_kl > cfg_.kl_threshold) {
    stop = true;
    return st;
  }
  const float norm = grad.norm();
  if (norm > cfg_.max_grad_norm) grad *= static_cast<float>(cfg_.max_grad_norm / norm);
  adam_.step(policy_.params(), grad, cfg_.lr, cfg_.adam_beta1, cfg_.adam_beta2, cfg_.adam_eps);
  return st;
}

void Trainer::run(const env::EnvSpec& spec_in, std::int64_t steps, TrainLog& log) {
  if (steps <= 0) return;
  env::EnvSpec spec = spec_in;
  if (spec.obs != env::ObsMode::Features) throw ConfigError("training uses feature observations (obs=features)");
  spec.auto_reset = true;
  const double xi = spec.effective_budget();
  const int E = cfg_.num_envs, T = cfg_.rollout, N = E * T;
  const int obs_dim = policy_.shape().obs_dim;

  std::vector<env::Env> envs = env::make_envs(spec, E);
  if (envs.front().feature_size() != obs_dim || envs.front().actions().group_sizes() != policy_.shape().group_sizes)
    throw ShapeMismatch("policy shape does not match " + spec.env_id());
  const int gw = envs.front().world().grid.width(), gh = envs.front().world().grid.height();
  if (heatmap_.width() != gw || heatmap_.height() != gh) heatmap_ = env::Heatmap(gw, gh);
  std::vector<std::vector<std::uint32_t>> visits(static_cast<std::size_t>(E),
                                                 std::vector<std::uint32_t>(static_cast<std::size_t>(gw) * gh, 0));
  auto visit = [&](int e) {
    const auto& p = envs[static_cast<std::size_t>(e)].world().agent.pose;
    const TileCoord c = TileGrid::tile_of(p.x, p.y);
    if (c.x >= 0 && c.y >= 0 && c.x < gw && c.y < gh) ++visits[static_cast<std::size_t>(e)][static_cast<std::size_t>(c.y) * gw + c.x];
  };

  Eigen::MatrixXf obs(obs_dim, E);
  for (int e = 0; e < E; ++e) {
    const auto f = envs[static_cast<std::size_t>(e)].features();
    obs.col(e) = Eigen::Map<const Eigen::VectorXf>(f.data(), obs_dim);
    visit(e);
  }

  const int G = static_cast<int>(policy_.shape().group_sizes.size());
  LossBatch<float> batch;
  batch.obs.resize(obs_dim, N);
  batch.actions.resize(G, N);
  batch.logp_old.resize(N);
  batch.advantages.resize(N);
  batch.returns_reward.resize(N);
  batch.returns_cost.resize(N);
  batch.values_reward_old.resize(N);
  batch.values_cost_old.resize(N);
  // Column index of (env e, time t) is e * T + t so each env's trajectory is contiguous.
  std::vector<float> rew(static_cast<std::size_t>(N)), cost(static_cast<std::size_t>(N)), done(static_cast<std::size_t>(N));
  std::vector<int> flat(static_cast<std::size_t>(E));
  std::vector<int> idx;

  first_rollout_hash_ = params_hash();
  std::int64_t done_steps = 0;
  std::int64_t iteration = 0;
  while (done_steps < steps) {
    for (int t = 0; t < T; ++t) {
      const auto f = policy_.forward(obs);
      for (int e = 0; e < E; ++e) {
        const int col = e * T + t;
        const double lp = sample_action(policy_, f.logits.col(e), rng_, idx);
        for (int g = 0; g < G; ++g) batch.actions(g, col) = idx[static_cast<std::size_t>(g)];
        flat[static_cast<std::size_t>(e)] = envs[static_cast<std::size_t>(e)].actions().encode(idx);
        batch.logp_old(col) = static_cast<float>(lp);
        batch.values_reward_old(col) = f.v_reward(e);
        batch.values_cost_old(col) = f.v_cost(e);
        batch.obs.col(col) = obs.col(e);
      }
      auto results = env::vector_step(envs, flat);
      for (int e = 0; e < E; ++e) {
        auto& slot = results[static_cast<std::size_t>(e)];
        slot.rethrow();
        const env::StepResult& r = *slot.result;
        const int col = e * T + t;
        const double shaped = cfg_.method == Method::PPOCost ? shape_cost_reward(r.reward, r.cost, cfg_.kappa) : r.reward;
        rew[static_cast<std::size_t>(col)] = static_cast<float>(shaped);
        cost[static_cast<std::size_t>(col)] = static_cast<float>(r.cost);
        done[static_cast<std::size_t>(col)] = r.done() ? 1.0f : 0.0f;
        if (r.done()) {
          push_bounded(recent_returns_, r.info.episode_return, cfg_.log_window);
          push_bounded(recent_costs_, r.info.episode_cost, cfg_.log_window);
          push_bounded(cost_window_, r.info.episode_cost, cfg_.cost_window);
          heatmap_.push_episode(std::move(visits[static_cast<std::size_t>(e)]));
          visits[static_cast<std::size_t>(e)].assign(static_cast<std::size_t>(gw) * gh, 0);
        }
        obs.col(e) = Eigen::Map<const Eigen::VectorXf>(r.obs.features.data(), obs_dim);
        visit(e);
      }
    }
    done_steps += N;
    global_step_ += N;

    const auto boot = policy_.forward(obs);
    std::vector<float> adv_r(static_cast<std::size_t>(N)), adv_c(static_cast<std::size_t>(N));
    std::vector<float> vals(static_cast<std::size_t>(T + 1)), ret(static_cast<std::size_t>(T));
    for (int e = 0; e < E; ++e) {
      const std::size_t base = static_cast<std::size_t>(e) * T;
      std::span<const float> d(done.data() + base, static_cast<std::size_t>(T));
      for (int t = 0; t < T; ++t) vals[static_cast<std::size_t>(t)] = batch.values_reward_old(e * T + t);
      vals[static_cast<std::size_t>(T)] = boot.v_reward(e);
      compute_gae(std::span<const float>(rew.data() + base, static_cast<std::size_t>(T)), vals, d, cfg_.gamma,
                  cfg_.gae_lambda, std::span<float>(adv_r.data() + base, static_cast<std::size_t>(T)), ret);
      for (int t = 0; t < T; ++t) batch.returns_reward(e * T + t) = ret[static_cast<std::size_t>(t)];
      for (int t = 0; t < T; ++t) vals[static_cast<std::size_t>(t)] = batch.values_cost_old(e * T + t);
      vals[static_cast<std::size_t>(T)] = boot.v_cost(e);
      compute_gae(std::span<const float>(cost.data() + base, static_cast<std::size_t>(T)), vals, d, cfg_.gamma,
                  cfg_.gae_lambda, std::span<float>(adv_c.data() + base, static_cast<std::size_t>(T)), ret);
      for (int t = 0; t < T; ++t) batch.returns_cost(e * T + t) = ret[static_cast<std::size_t>(t)];
    }

    update_multiplier(xi);
    auto combined = combine_advantages(adv_r, adv_c, lambda_, cfg_.normalize_combined);
    normalize_in_place(combined);
    for (int i = 0; i < N; ++i) batch.advantages(i) = combined[static_cast<std::size_t>(i)];

    LossStats acc;
    int updates = 0;
    bool stop = false;
    const int M = cfg_.minibatch;
    std::vector<int> order(static_cast<std::size_t>(N));
    for (int epoch = 0; epoch < cfg_.epochs && !stop; ++epoch) {
      for (int i = 0; i < N; ++i) order[static_cast<std::size_t>(i)] = i;
      if (M < N)
        for (int i = N - 1; i > 0; --i)
          std::swap(order[static_cast<std::size_t>(i)], order[rng_.uniform_int(static_cast<std::uint64_t>(i + 1))]);
      for (int start = 0; start < N && !stop; start += M) {
        LossStats st;
        if (M == N) {
          st = learn(batch, stop);
        } else {
          LossBatch<float> mb;
          mb.obs.resize(obs_dim, M);
          mb.actions.resize(G, M);
          mb.logp_old.resize(M);
          mb.advantages.resize(M);
          mb.returns_reward.resize(M);
          mb.returns_cost.resize(M);
          mb.values_reward_old.resize(M);
          mb.values_cost_old.resize(M);
          for (int k = 0; k < M; ++k) {
            const int src = order[static_cast<std::size_t>(start + k)];
            mb.obs.col(k) = batch.obs.col(src);
            mb.actions.col(k) = batch.actions.col(src);
            mb.logp_old(k) = batch.logp_old(src);
            mb.advantages(k) = batch.advantages(src);
            mb.returns_reward(k) = batch.returns_reward(src);
            mb.returns_cost(k) = batch.returns_cost(src);
            mb.values_reward_old(k) = batch.values_reward_old(src);
            mb.values_cost_old(k) = batch.values_cost_old(src);
          }
          st = learn(mb, stop);
        }
        acc.policy += st.policy;
        acc.value_reward += st.value_reward;
        acc.value_cost += st.value_cost;
        acc.entropy += st.entropy;
        acc.approx_kl += st.approx_kl;
        ++updates;
      }
    }

    if (iteration % cfg_.log_every == 0) {
      TrainLogRow row;
      row.step = global_step_;
      row.mean_return = mean_of(recent_returns_);
      row.mean_cost = mean_of(recent_costs_);
      row.lambda = lambda_;
      const double u = updates > 0 ? updates : 1;
      row.pi_loss = acc.policy / u;
      row.v_loss = acc.value_reward / u;
      row.vc_loss = acc.value_cost / u;
      row.entropy = acc.entropy / u;
      row.kl = acc.approx_kl / u;
      log.rows.push_back(row);
      if (progress_) progress_(row);
    }
    ++iteration;
  }
}

namespace {

constexpr char kMagic[8] = {'H', 'S', 'R', 'D', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kCheckpointVersion = 1;

template <class T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw ConfigError("checkpoint truncated");
  return v;
}
void put_floats(std::ostream& out, const Eigen::VectorXf& v) {
  put<std::uint64_t>(out, static_cast<std::uint64_t>(v.size()));
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(float)));
}
void get_floats(std::istream& in, Eigen::VectorXf& v) {
  const auto n = get<std::uint64_t>(in);
  if (n != static_cast<std::uint64_t>(v.size())) throw ShapeMismatch("checkpoint parameter count mismatch");
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(float)));
  if (!in) throw ConfigError("checkpoint truncated");
}

}  // namespace

void Trainer::save(std::ostream& out) const {
  out.write(kMagic, sizeof kMagic);
  put(out, kCheckpointVersion);
  const PolicyShape& s = policy_.shape();
  put<std::int32_t>(out, s.obs_dim);
  put<std::int32_t>(out, static_cast<std::int32_t>(s.hidden.size()));
  for (int h : s.hidden) put<std::int32_t>(out, h);
  put<std::int32_t>(out, static_cast<std::int32_t>(s.group_sizes.size()));
  for (int g : s.group_sizes) put<std::int32_t>(out, g);
  put_floats(out, policy_.params());
  put<std::int64_t>(out, adam_.t);
  put_floats(out, adam_.m);
  put_floats(out, adam_.v);
  put<double>(out, lambda_);
  put<double>(out, pid_.integral);
  put<double>(out, pid_.prev_jc);
  put<std::uint8_t>(out, pid_.has_prev ? 1 : 0);
  put<std::uint64_t>(out, rng_.state());
  put<std::int64_t>(out, global_step_);
}

Trainer Trainer::load(std::istream& in, TrainConfig cfg) {
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || !std::equal(magic, magic + 8, kMagic)) throw ConfigError("not a checkpoint file");
  if (get<std::uint32_t>(in) != kCheckpointVersion) throw ConfigError("unsupported checkpoint version");
  PolicyShape s;
  s.obs_dim = get<std::int32_t>(in);
  const auto nh = get<std::int32_t>(in);
  if (nh <= 0 || nh > 64) throw ConfigError("corrupt checkpoint");
  s.hidden.clear();
  for (int i = 0; i < nh; ++i) s.hidden.push_back(get<std::int32_t>(in));
  const auto ng = get<std::int32_t>(in);
  if (ng <= 0 || ng > 64) throw ConfigError("corrupt checkpoint");
  for (int i = 0; i < ng; ++i) s.group_sizes.push_back(get<std::int32_t>(in));
  cfg.hidden = s.hidden;
  Trainer t(std::move(cfg), s);
  get_floats(in, t.policy_.params());
  t.adam_.t = get<std::int64_t>(in);
  get_floats(in, t.adam_.m);
  get_floats(in, t.adam_.v);
  t.lambda_ = get<double>(in);
  t.pid_.integral = get<double>(in);
  t.pid_.prev_jc = get<double>(in);
  t.pid_.has_prev = get<std::uint8_t>(in) != 0;
  t.rng_.set_state(get<std::uint64_t>(in));
  t.global_step_ = get<std::int64_t>(in);
  return t;
}

TrainResult train(const env::EnvSpec& spec, const TrainConfig& cfg, std::int64_t total_steps) {
  TrainResult r;
  r.trainer = std::make_unique<Trainer>(cfg, policy_shape_for(spec, cfg.hidden));
  r.trainer->run(spec, total_steps, r.log);
  return r;
}

}  // namespace hasard::rl

#pragma once

// Clipped PPO objective with two clipped critics and an entropy bonus, plus
// its hand-derived gradient with respect to the flat parameter vector.

#include <algorithm>
#include <cmath>

#include "hasard/rl/policy.hpp"

namespace hasard::rl {

struct LossCoeffs {
  double clip = 0.1;
  double value_clip = 1.0;
  double value_coeff = 0.5;
  double entropy_coeff = 0.001;
};

template <class S>
struct LossBatch {
  using Mat = typename Policy<S>::Mat;
  using Vec = typename Policy<S>::Vec;

  Mat obs;                       // obs_dim x N
  Eigen::MatrixXi actions;       // groups x N
  Vec logp_old;                  // N
  Vec advantages;                // N, already combined and normalised
  Vec returns_reward;            // N
  Vec returns_cost;              // N
  Vec values_reward_old;         // N
  Vec values_cost_old;           // N

  Eigen::Index size() const { return obs.cols(); }
};

struct LossStats {
  double total = 0.0;
  double policy = 0.0;
  double value_reward = 0.0;
  double value_cost = 0.0;
  double entropy = 0.0;
  double approx_kl = 0.0;
  double clip_fraction = 0.0;
};

namespace detail {

// max((v - R)^2, (v_old + clip(v - v_old) - R)^2) and its derivative in v.
template <class S>
inline std::pair<S, S> clipped_value_term(S v, S v_old, S ret, S delta) {
  const S dv = v - v_old;
  const S clipped = v_old + std::clamp(dv, -delta, delta);
  const S a = (v - ret) * (v - ret);
  const S b = (clipped - ret) * (clipped - ret);
  if (a >= b) return {a, S(2) * (v - ret)};
  const bool inside = dv > -delta && dv < delta;
  return {b, inside ? S(2) * (clipped - ret) : S(0)};
}

}  // namespace detail

/// Evaluates the loss
///   L = -mean(min(r A, clip(r) A)) + c_v (Lv_r + Lv_c) - c_e mean(H)
/// where Lv_* = mean(max(unclipped, clipped squared error)). Writes dL/dθ to
/// `grad` when non-null.
template <class S>
LossStats ppo_loss(const Policy<S>& policy, const LossBatch<S>& batch, const LossCoeffs& c,
                   typename Policy<S>::Vec* grad) {
  using Mat = typename Policy<S>::Mat;
  using RowVec = typename Policy<S>::RowVec;
  const Eigen::Index n = batch.size();
  const auto& sizes = policy.shape().group_sizes;
  const auto offsets = group_offsets(sizes);
  const S inv_n = S(1) / static_cast<S>(n);
  const S eps = static_cast<S>(c.clip);

  const auto f = policy.forward(batch.obs);

  Mat d_logits = Mat::Zero(f.logits.rows(), n);
  RowVec d_vr(n), d_vc(n);
  LossStats st;
  double pi_sum = 0, vr_sum = 0, vc_sum = 0, ent_sum = 0, kl_sum = 0;
  int clipped = 0;

  for (Eigen::Index i = 0; i < n; ++i) {
    S logp = 0;
    S entropy = 0;
    // Per-group log-probs and probabilities, reused for the gradient.
    Eigen::Matrix<S, Eigen::Dynamic, 1> lp_all(f.logits.rows());
    for (std::size_t g = 0; g < sizes.size(); ++g) {
      const auto seg = f.logits.col(i).segment(offsets[g], sizes[g]);
      const auto lp = log_softmax(seg);
      lp_all.segment(offsets[g], sizes[g]) = lp;
      logp += lp(batch.actions(static_cast<Eigen::Index>(g), i));
      entropy -= (lp.array().exp() * lp.array()).sum();
    }
    const S log_ratio = logp - batch.logp_old(i);
    const S ratio = std::exp(log_ratio);
    const S adv = batch.advantages(i);
    const S unclipped = ratio * adv;
    const S clipped_ratio = std::clamp(ratio, S(1) - eps, S(1) + eps);
    const S clipped_obj = clipped_ratio * adv;
    S d_obj_d_ratio;
    if (unclipped <= clipped_obj) {
      d_obj_d_ratio = adv;
    } else {
      d_obj_d_ratio = (ratio > S(1) - eps && ratio < S(1) + eps) ? adv : S(0);
    }
    if (ratio < S(1) - eps || ratio > S(1) + eps) ++clipped;
    pi_sum -= static_cast<double>(std::min(unclipped, clipped_obj));
    ent_sum += static_cast<double>(entropy);
    kl_sum += static_cast<double>(-log_ratio);

    const auto [vr_term, vr_grad] =
        detail::clipped_value_term(f.v_reward(i), batch.values_reward_old(i), batch.returns_reward(i),
                                   static_cast<S>(c.value_clip));
    const auto [vc_term, vc_grad] =
        detail::clipped_value_term(f.v_cost(i), batch.values_cost_old(i), batch.returns_cost(i),
                                   static_cast<S>(c.value_clip));
    vr_sum += static_cast<double>(vr_term);
    vc_sum += static_cast<double>(vc_term);

    if (grad != nullptr) {
      // d(-obj)/dlogp = -d_obj/d_ratio * ratio
      const S g_logp = -d_obj_d_ratio * ratio * inv_n;
      const S g_ent = static_cast<S>(c.entropy_coeff) * inv_n;  // multiplies dH/dlogit with a minus sign
      for (std::size_t g = 0; g < sizes.size(); ++g) {
        const auto lp = lp_all.segment(offsets[g], sizes[g]);
        const auto p = lp.array().exp();
        const S h_g = -(p * lp.array()).sum();
        for (int j = 0; j < sizes[g]; ++j) {
          const S onehot = batch.actions(static_cast<Eigen::Index>(g), i) == j ? S(1) : S(0);
          const S pj = p(j);
          // dH/dz_j = -p_j (log p_j + H)
          d_logits(offsets[g] + j, i) = g_logp * (onehot - pj) + g_ent * pj * (lp(j) + h_g);
        }
      }
      d_vr(i) = static_cast<S>(c.value_coeff) * vr_grad * inv_n;
      d_vc(i) = static_cast<S>(c.value_coeff) * vc_grad * inv_n;
    }
  }

  st.policy = pi_sum / static_cast<double>(n);
  st.value_reward = vr_sum / static_cast<double>(n);
  st.value_cost = vc_sum / static_cast<double>(n);
  st.entropy = ent_sum / static_cast<double>(n);
  st.approx_kl = kl_sum / static_cast<double>(n);
  st.clip_fraction = static_cast<double>(clipped) / static_cast<double>(n);
  st.total = st.policy + c.value_coeff * (st.value_reward + st.value_cost) - c.entropy_coeff * st.entropy;

  if (grad == nullptr) return st;

  grad->setZero(static_cast<Eigen::Index>(policy.num_params()));
  const auto& L = policy.layers();
  const Mat& top = f.h.back();
  auto gW = [&](int l) {
    return Eigen::Map<Mat>(grad->data() + L[l].w, L[l].out, L[l].in);
  };
  auto gb = [&](int l) {
    return Eigen::Map<typename Policy<S>::Vec>(grad->data() + L[l].b, L[l].out);
  };

  gW(policy.policy_head()) = d_logits * top.transpose();
  gb(policy.policy_head()) = d_logits.rowwise().sum();
  gW(policy.reward_head()) = d_vr * top.transpose();
  gb(policy.reward_head())(0) = d_vr.sum();
  gW(policy.cost_head()) = d_vc * top.transpose();
  gb(policy.cost_head())(0) = d_vc.sum();

  Mat d_h = policy.W(policy.policy_head()).transpose() * d_logits;
  d_h.noalias() += policy.W(policy.reward_head()).transpose() * d_vr;
  d_h.noalias() += policy.W(policy.cost_head()).transpose() * d_vc;

  for (int l = policy.hidden_layers() - 1; l >= 0; --l) {
    const Mat d_z = d_h.cwiseProduct(f.z[static_cast<std::size_t>(l)].unaryExpr([](S v) { return elu_grad(v); }));
    gW(l) = d_z * f.h[static_cast<std::size_t>(l)].transpose();
    gb(l) = d_z.rowwise().sum();
    if (l > 0) d_h = policy.W(l).transpose() * d_z;
  }
  return st;
}

}  // namespace hasard::rl

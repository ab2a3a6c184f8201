#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "hasard/core/errors.hpp"
#include "hasard/core/rng.hpp"

namespace hasard::rl {

/// Architecture of the actor-critic network: an ELU trunk shared by one
/// categorical head per action group and two scalar value heads.
struct PolicyShape {
  int obs_dim = 0;
  std::vector<int> hidden{512, 512};
  std::vector<int> group_sizes;

  int logit_count() const { return std::accumulate(group_sizes.begin(), group_sizes.end(), 0); }
  friend bool operator==(const PolicyShape&, const PolicyShape&) = default;
};

struct DenseLayout {
  int in = 0;
  int out = 0;
  std::size_t w = 0;  // offset of the out x in column-major weight block
  std::size_t b = 0;  // offset of the bias
};

template <class S>
inline S elu(S z) {
  return z > S(0) ? z : std::expm1(z);
}
template <class S>
inline S elu_grad(S z) {
  return z > S(0) ? S(1) : std::exp(z);
}

/// Parameters live in one flat vector; layers are Eigen::Map views into it
/// so optimiser, checkpoint and finite-difference code see a single array.
template <class S>
class Policy {
public:
  using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
  using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;
  using RowVec = Eigen::Matrix<S, 1, Eigen::Dynamic>;
  using MatMap = Eigen::Map<Mat>;
  using ConstMatMap = Eigen::Map<const Mat>;
  using VecMap = Eigen::Map<Vec>;
  using ConstVecMap = Eigen::Map<const Vec>;

  struct Forward {
    std::vector<Mat> z;  // pre-activations per hidden layer
    std::vector<Mat> h;  // h[0] = input, h[k+1] = elu(z[k])
    Mat logits;          // logit_count x N
    RowVec v_reward;
    RowVec v_cost;
  };

  Policy() = default;
  explicit Policy(PolicyShape shape) : shape_(std::move(shape)) {
    if (shape_.obs_dim <= 0 || shape_.group_sizes.empty()) throw ShapeMismatch("policy needs obs_dim > 0 and groups");
    std::size_t off = 0;
    int in = shape_.obs_dim;
    auto add = [&](int out) {
      layers_.push_back({in, out, off, off + static_cast<std::size_t>(in) * out});
      off += static_cast<std::size_t>(in) * out + out;
    };
    for (int h : shape_.hidden) {
      add(h);
      in = h;
    }
    add(shape_.logit_count());
    add(1);
    add(1);
    params_ = Vec::Zero(static_cast<Eigen::Index>(off));
  }

  const PolicyShape& shape() const { return shape_; }
  const std::vector<DenseLayout>& layers() const { return layers_; }
  std::size_t num_params() const { return static_cast<std::size_t>(params_.size()); }
  int hidden_layers() const { return static_cast<int>(shape_.hidden.size()); }
  int policy_head() const { return hidden_layers(); }
  int reward_head() const { return hidden_layers() + 1; }
  int cost_head() const { return hidden_layers() + 2; }

  Vec& params() { return params_; }
  const Vec& params() const { return params_; }

  ConstMatMap W(int l) const { return ConstMatMap(params_.data() + layers_[l].w, layers_[l].out, layers_[l].in); }
  ConstVecMap b(int l) const { return ConstVecMap(params_.data() + layers_[l].b, layers_[l].out); }
  MatMap W(int l) { return MatMap(params_.data() + layers_[l].w, layers_[l].out, layers_[l].in); }
  VecMap b(int l) { return VecMap(params_.data() + layers_[l].b, layers_[l].out); }

  /// Orthogonal weights scaled by `gain`, zero biases.
  void init_orthogonal(Rng& rng, double gain = 1.0) {
    params_.setZero();
    for (int l = 0; l < static_cast<int>(layers_.size()); ++l) {
      const int rows = layers_[l].out, cols = layers_[l].in;
      const int n = std::max(rows, cols);
      Eigen::MatrixXd g(n, std::min(rows, cols));
      for (Eigen::Index j = 0; j < g.cols(); ++j)
        for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = rng.normal();
      Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
      Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, g.cols());
      const Eigen::MatrixXd r = qr.matrixQR().topRows(g.cols()).template triangularView<Eigen::Upper>();
      for (Eigen::Index j = 0; j < q.cols(); ++j)
        if (r(j, j) < 0) q.col(j) *= -1.0;
      // q is n x min(rows, cols) with orthonormal columns.
      Eigen::MatrixXd w = rows >= cols ? Eigen::MatrixXd(q) : Eigen::MatrixXd(q.transpose());
      W(l) = (gain * w).template cast<S>();
    }
  }

  /// Batched forward pass; columns of `x` are observations.
  Forward forward(const Mat& x) const {
    if (x.rows() != shape_.obs_dim) throw ShapeMismatch("observation has wrong dimension");
    Forward f;
    f.h.push_back(x);
    for (int l = 0; l < hidden_layers(); ++l) {
      Mat z = W(l) * f.h.back();
      z.colwise() += b(l);
      Mat h = z.unaryExpr([](S v) { return elu(v); });
      f.z.push_back(std::move(z));
      f.h.push_back(std::move(h));
    }
    const Mat& top = f.h.back();
    f.logits = W(policy_head()) * top;
    f.logits.colwise() += b(policy_head());
    f.v_reward = W(reward_head()) * top;
    f.v_reward.array() += b(reward_head())(0);
    f.v_cost = W(cost_head()) * top;
    f.v_cost.array() += b(cost_head())(0);
    return f;
  }

private:
  PolicyShape shape_;
  std::vector<DenseLayout> layers_;
  Vec params_;
};

/// Numerically stable log-softmax of one group's logits (a column segment).
template <class Derived>
auto log_softmax(const Eigen::MatrixBase<Derived>& logits) {
  using S = typename Derived::Scalar;
  const S m = logits.maxCoeff();
  const S lse = m + std::log((logits.array() - m).exp().sum());
  return (logits.array() - lse).matrix().eval();
}

/// Group offsets into the concatenated logits.
inline std::vector<int> group_offsets(const std::vector<int>& sizes) {
  std::vector<int> off(sizes.size(), 0);
  for (std::size_t g = 1; g < sizes.size(); ++g) off[g] = off[g - 1] + sizes[g - 1];
  return off;
}

}  // namespace hasard::rl

#include "hasard/env/action_encoding.hpp"

#include <string>

#include "hasard/core/errors.hpp"

namespace hasard::env {

ActionEncoding::ActionEncoding(std::vector<std::vector<Button>> groups) : groups_(std::move(groups)) {
  size_ = 1;
  for (const auto& g : groups_) {
    if (g.empty() || g.front() != Button::NoOp) throw ConfigError("action group must start with NO-OP");
    size_ *= static_cast<int>(g.size());
  }
}

ActionEncoding ActionEncoding::full_discrete() {
  return ActionEncoding({{Button::NoOp, Button::MoveForward, Button::MoveBackward},
                         {Button::NoOp, Button::MoveRight, Button::MoveLeft},
                         {Button::NoOp, Button::TurnLeft, Button::TurnRight},
                         {Button::NoOp, Button::LookUp, Button::LookDown},
                         {Button::NoOp, Button::Attack},
                         {Button::NoOp, Button::Speed},
                         {Button::NoOp, Button::Jump},
                         {Button::NoOp, Button::Use},
                         {Button::NoOp, Button::Crouch},
                         {Button::NoOp, Button::Turn180},
                         {Button::NoOp, Button::SelectNextWeapon, Button::SelectPrevWeapon}});
}

std::vector<int> ActionEncoding::group_sizes() const {
  std::vector<int> out;
  out.reserve(groups_.size());
  for (const auto& g : groups_) out.push_back(static_cast<int>(g.size()));
  return out;
}

int ActionEncoding::encode(std::span<const int> idx) const {
  if (idx.size() != groups_.size())
    throw InvalidAction("expected " + std::to_string(groups_.size()) + " group indices, got " +
                        std::to_string(idx.size()));
  int flat = 0;
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    const int n = static_cast<int>(groups_[g].size());
    if (idx[g] < 0 || idx[g] >= n)
      throw InvalidAction("group " + std::to_string(g) + " index " + std::to_string(idx[g]) + " out of range");
    flat = flat * n + idx[g];
  }
  return flat;
}

std::vector<int> ActionEncoding::decode(int flat) const {
  if (flat < 0 || flat >= size_)
    throw InvalidAction("action " + std::to_string(flat) + " outside [0, " + std::to_string(size_) + ")");
  std::vector<int> idx(groups_.size());
  for (std::size_t g = groups_.size(); g-- > 0;) {
    const int n = static_cast<int>(groups_[g].size());
    idx[g] = flat % n;
    flat /= n;
  }
  return idx;
}

ResolvedAction ActionEncoding::resolve(std::span<const int> idx) const {
  encode(idx);  // range check
  ResolvedAction a;
  for (std::size_t g = 0; g < groups_.size(); ++g) press(a, groups_[g][static_cast<std::size_t>(idx[g])]);
  return a;
}

std::vector<int> ActionEncoding::from_buttons(std::span<const Button> held) const {
  std::vector<int> idx(groups_.size(), 0);
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    for (std::size_t k = 1; k < groups_[g].size() && idx[g] == 0; ++k)
      for (Button b : held)
        if (b == groups_[g][k]) {
          idx[g] = static_cast<int>(k);
          break;
        }
  }
  return idx;
}

}  // namespace hasard::env

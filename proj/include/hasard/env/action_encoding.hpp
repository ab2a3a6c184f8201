#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "hasard/core/buttons.hpp"
#include "hasard/core/world.hpp"

namespace hasard::env {

/// Multi-discrete action space: a Cartesian product of button groups. Index 0
/// of each group is NO-OP. Flat indices are mixed-radix with the first group
/// as the most significant digit.
class ActionEncoding {
public:
  ActionEncoding() = default;
  explicit ActionEncoding(std::vector<std::vector<Button>> groups);

  /// The full button set with the two continuous deltas replaced by
  /// 3-way turn and look groups.
  static ActionEncoding full_discrete();

  int size() const { return size_; }
  int group_count() const { return static_cast<int>(groups_.size()); }
  const std::vector<std::vector<Button>>& groups() const { return groups_; }
  std::vector<int> group_sizes() const;

  /// Throws InvalidAction on out-of-range input.
  int encode(std::span<const int> group_indices) const;
  std::vector<int> decode(int flat) const;

  ResolvedAction resolve(std::span<const int> group_indices) const;
  ResolvedAction resolve(int flat) const { return resolve(decode(flat)); }

  /// Maps a set of held buttons to per-group indices. In each group the
  /// first held button wins; buttons absent from every group are ignored.
  std::vector<int> from_buttons(std::span<const Button> held) const;

private:
  std::vector<std::vector<Button>> groups_;
  int size_ = 1;
};

}  // namespace hasard::env

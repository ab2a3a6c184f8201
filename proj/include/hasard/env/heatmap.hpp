#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "hasard/core/world.hpp"

namespace hasard::env {

/// Tile visit counts for the most recent `capacity` episodes.
class Heatmap {
public:
  static constexpr std::size_t kDefaultCapacity = 1000;

  Heatmap() = default;
  Heatmap(int width, int height, std::size_t capacity = kDefaultCapacity);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t capacity() const { return capacity_; }
  std::size_t episodes() const { return episodes_.size(); }

  /// Opens a new episode slot, evicting the oldest when full. Resizes (and
  /// clears) when the grid dimensions change.
  void begin_episode(int width, int height);
  void begin_episode() { begin_episode(width_, height_); }
  /// Counts one visit in the current episode. Out-of-range tiles are ignored.
  void record_visit(TileCoord tile);

  /// Appends a finished episode's counts (row-major, width * height).
  void push_episode(std::vector<std::uint32_t> counts);

  /// Element-wise sum over the buffered episodes, row-major.
  std::vector<std::uint64_t> aggregate() const;
  const std::vector<std::uint32_t>& episode(std::size_t i) const { return episodes_[i]; }

private:
  int width_ = 0;
  int height_ = 0;
  std::size_t capacity_ = kDefaultCapacity;
  std::deque<std::vector<std::uint32_t>> episodes_;
};

}  // namespace hasard::env

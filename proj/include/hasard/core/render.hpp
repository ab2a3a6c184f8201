#pragma once

#include <cstdint>
#include <vector>

#include "hasard/core/world.hpp"

namespace hasard {

/// Bars drawn in the bottom HUD strip, each in [0, 1].
struct HudValues {
  double health = 1.0;
  double weight = 0.0;
  double budget = 0.0;
};

struct RenderOptions {
  int width = 128;
  int height = 72;
  double fov_degrees = 90.0;
  bool hud = true;
  HudValues hud_values;
};

/// Depth bytes map [0, kMaxRenderDepth] world units linearly onto [0, 255].
inline constexpr double kMaxRenderDepth = 2048.0;
inline constexpr double kDepthStep = kMaxRenderDepth / 255.0;

struct FrameSet {
  int width = 0;
  int height = 0;
  int hud_rows = 0;
  std::vector<std::uint8_t> rgb;     // width * height * 3, row-major
  std::vector<std::uint8_t> depth;   // 0 nearest .. 255 farthest
  std::vector<std::uint8_t> labels;  // catalog label ids, 0 = background

  std::size_t pixel(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
  friend bool operator==(const FrameSet&, const FrameSet&) = default;
};

std::uint8_t quantize_depth(double world_distance);

/// Column raycaster over the tile heightmap plus billboarded entities.
/// Pure function of (world, pose, options).
FrameSet raycast_render(const World& world, const Pose& pose, const RenderOptions& options);

/// Tile colours keyed by kind; exposed for tests.
std::uint8_t* tile_color(TileKind kind, std::uint8_t out[3]);
inline constexpr std::uint8_t kCeilingColor[3] = {48, 48, 56};

}  // namespace hasard

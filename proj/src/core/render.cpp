#include "hasard/core/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace hasard {

std::uint8_t quantize_depth(double d) {
  if (!(d > 0.0)) return 0;
  const double q = std::floor(d / kDepthStep + 0.5);
  return static_cast<std::uint8_t>(std::min(255.0, q));
}

std::uint8_t* tile_color(TileKind kind, std::uint8_t out[3]) {
  switch (kind) {
    case TileKind::Floor: out[0] = 110; out[1] = 100; out[2] = 90; break;
    case TileKind::Lava: out[0] = 230; out[1] = 80; out[2] = 20; break;
    case TileKind::Acid: out[0] = 60; out[1] = 200; out[2] = 60; break;
    case TileKind::Wall: out[0] = 130; out[1] = 130; out[2] = 130; break;
    case TileKind::DeliveryZone: out[0] = 40; out[1] = 60; out[2] = 200; break;
  }
  return out;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Canvas {
  int width;
  int view_h;
  std::vector<double> dist;  // world units, per view pixel
  FrameSet* frame;
  double brightness;
  bool tint;

  void put(int x, int y, const std::uint8_t c[3], double d, double shade, std::uint8_t label,
           bool ignore_darkness = false) {
    const std::size_t i = static_cast<std::size_t>(y) * width + x;
    dist[i] = d;
    double k = shade * (ignore_darkness ? 1.0 : brightness);
    double r = c[0] * k, g = c[1] * k, b = c[2] * k;
    if (tint) {
      const double lum = (r + g + b) / 3.0;
      r = r * 0.15;
      g = std::min(255.0, 0.7 * lum + 50.0);
      b = b * 0.15;
    }
    std::uint8_t* px = &frame->rgb[i * 3];
    px[0] = static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
    px[1] = static_cast<std::uint8_t>(std::clamp(g, 0.0, 255.0));
    px[2] = static_cast<std::uint8_t>(std::clamp(b, 0.0, 255.0));
    frame->labels[i] = label;
  }
};

double distance_shade(double d) { return std::clamp(1.0 - 0.6 * d / kMaxRenderDepth, 0.4, 1.0); }

}  // namespace

FrameSet raycast_render(const World& world, const Pose& pose, const RenderOptions& opt) {
  FrameSet f;
  f.width = opt.width;
  f.height = opt.height;
  f.hud_rows = opt.hud ? opt.height / 8 : 0;
  const std::size_t npx = static_cast<std::size_t>(opt.width) * opt.height;
  f.rgb.assign(npx * 3, 0);
  f.depth.assign(npx, 255);
  f.labels.assign(npx, kBackgroundLabel);

  const int W = opt.width;
  const int VH = opt.height - f.hud_rows;
  Canvas cv{W, VH, std::vector<double>(static_cast<std::size_t>(W) * VH, kInf), &f, world.brightness,
            world.green_tint};

  const double half_fov = opt.fov_degrees * std::numbers::pi / 360.0;
  const double tan_half = std::tan(half_fov);
  const double focal = (W / 2.0) / tan_half;
  const double pitch = std::clamp(pose.pitch, -kPitchLimit, kPitchLimit) * std::numbers::pi / 180.0;
  const double horizon = VH / 2.0 + std::tan(pitch) * focal;
  const double eye = pose.z + kViewHeight;
  const double yaw = pose.yaw * std::numbers::pi / 180.0;
  const double dx = std::cos(yaw), dy = std::sin(yaw);
  const double rx = dy, ry = -dx;

  const TileGrid& grid = world.grid;
  const TileCoord start = TileGrid::tile_of(pose.x, pose.y);
  const double ceiling = grid.in_bounds(start.x, start.y) ? grid.at(start).ceiling_z : 128.0;

  // Screen row of world height h at perpendicular distance t (tiles).
  auto project = [&](double h, double t) {
    if (t <= 0.0) return h < eye ? kInf : -kInf;
    return horizon - (h - eye) * focal / (t * kTileSize);
  };

  for (int col = 0; col < W; ++col) {
    const double cam = 2.0 * (col + 0.5) / W - 1.0;
    const double rdx = dx + rx * cam * tan_half;
    const double rdy = dy + ry * cam * tan_half;
    int mx = start.x, my = start.y;
    const double ddx = rdx == 0.0 ? kInf : std::abs(1.0 / rdx);
    const double ddy = rdy == 0.0 ? kInf : std::abs(1.0 / rdy);
    const int sx = rdx < 0 ? -1 : 1;
    const int sy = rdy < 0 ? -1 : 1;
    double side_x = rdx < 0 ? (pose.x - mx) * ddx : (mx + 1.0 - pose.x) * ddx;
    double side_y = rdy < 0 ? (pose.y - my) * ddy : (my + 1.0 - pose.y) * ddy;

    int ybuf = VH;  // rows [ybuf, VH) are filled
    double t_enter = 0.0;
    const Tile* cur = grid.in_bounds(mx, my) ? &grid.at(mx, my) : nullptr;

    for (int guard = 0; cur && guard < 4 * (grid.width() + grid.height()) && ybuf > 0; ++guard) {
      bool x_side = side_x < side_y;
      const double t_exit = x_side ? side_x : side_y;

      // top surface of the current tile between t_enter and t_exit
      if (cur->kind != TileKind::Wall && cur->floor_z < eye) {
        const double far_row = project(cur->floor_z, t_exit);
        const double near_row = project(cur->floor_z, t_enter);
        const int r0 = std::max(0, static_cast<int>(std::ceil(far_row - 0.5)));
        const int r1 = std::min(ybuf, static_cast<int>(std::min<double>(VH, std::ceil(near_row - 0.5))));
        if (r0 < r1) {
          std::uint8_t c[3] = {0, 0, 0};
          tile_color(cur->kind, c);
          for (int row = r0; row < r1; ++row) {
            double d = (eye - cur->floor_z) * focal / (row + 0.5 - horizon);
            d = std::clamp(d, t_enter * kTileSize, t_exit * kTileSize);
            cv.put(col, row, c, d, distance_shade(d), kBackgroundLabel);
          }
          ybuf = r0;
        }
      }

      if (x_side) {
        side_x += ddx;
        mx += sx;
      } else {
        side_y += ddy;
        my += sy;
      }
      t_enter = t_exit;
      if (!grid.in_bounds(mx, my) || t_enter * kTileSize > kMaxRenderDepth) break;
      const Tile& next = grid.at(mx, my);
      const double face_d = t_enter * kTileSize;

      if (next.kind == TileKind::Wall) {
        const double top = project(cur->ceiling_z, t_enter);
        const int r0 = std::max(0, static_cast<int>(std::ceil(top - 0.5)));
        std::uint8_t c[3] = {0, 0, 0};
        tile_color(TileKind::Wall, c);
        const double shade = distance_shade(face_d) * (x_side ? 1.0 : 0.8);
        for (int row = r0; row < ybuf; ++row) cv.put(col, row, c, face_d, shade, kBackgroundLabel);
        ybuf = std::min(ybuf, r0);
        break;
      }
      if (next.floor_z > cur->floor_z) {
        // riser between the two floors
        const double top = project(next.floor_z, t_enter);
        const int r0 = std::max(0, static_cast<int>(std::ceil(top - 0.5)));
        std::uint8_t c[3] = {0, 0, 0};
        tile_color(next.kind, c);
        const double shade = distance_shade(face_d) * 0.7;
        for (int row = r0; row < ybuf; ++row) cv.put(col, row, c, face_d, shade, kBackgroundLabel);
        ybuf = std::min(ybuf, r0);
      }
      cur = &next;
    }

    for (int row = 0; row < ybuf; ++row) {
      double d = row + 0.5 < horizon ? (ceiling - eye) * focal / (horizon - row - 0.5) : kMaxRenderDepth;
      if (!(d > 0.0)) d = kMaxRenderDepth;
      cv.put(col, row, kCeilingColor, d, 1.0, kBackgroundLabel);
    }
  }

  // Billboards, depth-tested per pixel.
  struct Sprite {
    double depth;
    int index;
  };
  std::vector<Sprite> sprites;
  for (int i = 0; i < static_cast<int>(world.entities.size()); ++i) {
    const Entity& e = world.entities[i];
    if (!e.alive) continue;
    const double ex = e.x - pose.x, ey = e.y - pose.y;
    const double depth = ex * dx + ey * dy;
    if (depth < 0.05) continue;
    sprites.push_back({depth, i});
  }
  std::sort(sprites.begin(), sprites.end(), [&](const Sprite& a, const Sprite& b) {
    if (a.depth != b.depth) return a.depth > b.depth;
    return world.entities[a.index].id < world.entities[b.index].id;
  });
  for (const Sprite& s : sprites) {
    const Entity& e = world.entities[s.index];
    const CatalogEntry& ce = catalog_entry(e.type);
    const double ex = e.x - pose.x, ey = e.y - pose.y;
    const double lateral = ex * rx + ey * ry;
    const double cx = W / 2.0 + lateral / s.depth * focal;
    const double half_w = (ce.width / kTileSize) / s.depth * focal / 2.0;
    const int c0 = std::max(0, static_cast<int>(std::ceil(cx - half_w - 0.5)));
    const int c1 = std::min(W, static_cast<int>(std::ceil(cx + half_w - 0.5)));
    const int r0 = std::max(0, static_cast<int>(std::ceil(project(e.z + ce.height, s.depth) - 0.5)));
    const int r1 = std::min(VH, static_cast<int>(std::ceil(project(e.z, s.depth) - 0.5)));
    const double d = s.depth * kTileSize;
    const std::uint8_t label = label_of(e.type);
    for (int row = r0; row < r1; ++row) {
      for (int col = c0; col < c1; ++col) {
        if (d < cv.dist[static_cast<std::size_t>(row) * W + col])
          cv.put(col, row, ce.color.data(), d, distance_shade(d), label, e.always_visible);
      }
    }
  }

  for (int row = 0; row < VH; ++row)
    for (int col = 0; col < W; ++col)
      f.depth[f.pixel(col, row)] = quantize_depth(cv.dist[static_cast<std::size_t>(row) * W + col]);

  if (f.hud_rows > 0) {
    const double vals[3] = {opt.hud_values.health, opt.hud_values.weight, opt.hud_values.budget};
    const std::uint8_t colors[3][3] = {{200, 40, 40}, {220, 200, 40}, {60, 120, 230}};
    const int band = std::max(1, f.hud_rows / 3);
    for (int row = VH; row < opt.height; ++row) {
      const int bar = std::min(2, (row - VH) / band);
      const int filled = static_cast<int>(std::clamp(vals[bar], 0.0, 1.0) * W);
      for (int col = 0; col < W; ++col) {
        std::uint8_t* px = &f.rgb[f.pixel(col, row) * 3];
        const bool on = col < filled;
        for (int k = 0; k < 3; ++k) px[k] = on ? colors[bar][k] : 20;
      }
    }
  }
  return f;
}

}  // namespace hasard

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "hasard/cli/cli.hpp"
#include "hasard/core/errors.hpp"

namespace hasard::cli {

VisitData collect_visits(const env::Heatmap& heatmap, const TileGrid& grid) {
  VisitData v;
  v.width = grid.width();
  v.height = grid.height();
  v.wall.resize(static_cast<std::size_t>(v.width) * v.height);
  for (int y = 0; y < v.height; ++y)
    for (int x = 0; x < v.width; ++x) v.wall[grid.index(x, y)] = grid.is_wall(x, y) ? 1 : 0;
  for (std::size_t i = 0; i < heatmap.episodes(); ++i) v.episodes.push_back(heatmap.episode(i));
  return v;
}

// HASARD-VISITS 1 <width> <height> <episodes>
// <height> wall rows of '#' / '.'
// one line of width*height counts per episode, oldest first
void write_visits(std::ostream& out, const VisitData& v) {
  out << "HASARD-VISITS 1 " << v.width << ' ' << v.height << ' ' << v.episodes.size() << '\n';
  for (int y = 0; y < v.height; ++y) {
    for (int x = 0; x < v.width; ++x) out << (v.wall[static_cast<std::size_t>(y) * v.width + x] ? '#' : '.');
    out << '\n';
  }
  for (const auto& ep : v.episodes) {
    for (std::size_t i = 0; i < ep.size(); ++i) out << (i ? " " : "") << ep[i];
    out << '\n';
  }
}

VisitData read_visits(std::istream& in) {
  VisitData v;
  std::string magic, version;
  std::size_t n = 0;
  if (!(in >> magic >> version >> v.width >> v.height >> n) || magic != "HASARD-VISITS" || version != "1" ||
      v.width <= 0 || v.height <= 0)
    throw NoData("visits file is missing or malformed");
  const std::size_t cells = static_cast<std::size_t>(v.width) * v.height;
  v.wall.resize(cells);
  for (int y = 0; y < v.height; ++y) {
    std::string row;
    if (!(in >> row) || row.size() != static_cast<std::size_t>(v.width)) throw NoData("visits file has a bad wall row");
    for (int x = 0; x < v.width; ++x) v.wall[static_cast<std::size_t>(y) * v.width + x] = row[x] == '#' ? 1 : 0;
  }
  v.episodes.assign(n, std::vector<std::uint32_t>(cells));
  for (auto& ep : v.episodes)
    for (auto& c : ep)
      if (!(in >> c)) throw NoData("visits file is truncated");
  return v;
}

GrayImage heatmap_image(const VisitData& v, std::size_t window) {
  if (v.episodes.empty() || window == 0) throw NoData("no recorded episodes to draw");
  const std::size_t cells = static_cast<std::size_t>(v.width) * v.height;
  const std::size_t first = v.episodes.size() > window ? v.episodes.size() - window : 0;
  std::vector<std::uint64_t> sum(cells, 0);
  for (std::size_t e = first; e < v.episodes.size(); ++e)
    for (std::size_t i = 0; i < cells; ++i) sum[i] += v.episodes[e][i];
  std::uint64_t max = 0;
  for (std::size_t i = 0; i < cells; ++i)
    if (!v.wall[i]) max = std::max(max, sum[i]);
  GrayImage img{v.width, v.height, std::vector<std::uint8_t>(cells, 0)};
  for (std::size_t i = 0; i < cells; ++i) {
    if (v.wall[i]) img.pixels[i] = 255;
    else if (max > 0)
      img.pixels[i] = static_cast<std::uint8_t>(std::lround(254.0 * static_cast<double>(sum[i]) / static_cast<double>(max)));
  }
  return img;
}

void write_pgm(std::ostream& out, const GrayImage& img) {
  out << "P5\n" << img.width << ' ' << img.height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.pixels.data()), static_cast<std::streamsize>(img.pixels.size()));
}

CurriculumResult curriculum(const env::EnvSpec& base, const rl::TrainConfig& cfg, std::int64_t steps_per_level) {
  CurriculumResult r;
  env::EnvSpec spec = base;
  spec.level = 1;
  r.trainer = std::make_unique<rl::Trainer>(cfg, rl::policy_shape_for(spec, cfg.hidden));
  for (int level = 1; level <= 3; ++level) {
    spec.level = level;
    if (level > 1) r.log.markers.emplace_back(r.log.rows.size(), "level " + std::to_string(level));
    r.first_hash.push_back(r.trainer->params_hash());
    r.trainer->run(spec, steps_per_level, r.log);
    if (steps_per_level > 0) r.first_hash.back() = r.trainer->first_rollout_hash();
    r.end_hash.push_back(r.trainer->params_hash());
  }
  return r;
}

}  // namespace hasard::cli

#include "hasard/env/heatmap.hpp"

namespace hasard::env {

Heatmap::Heatmap(int width, int height, std::size_t capacity)
    : width_(width), height_(height), capacity_(capacity == 0 ? 1 : capacity) {}

void Heatmap::begin_episode(int width, int height) {
  if (width != width_ || height != height_) {
    episodes_.clear();
    width_ = width;
    height_ = height;
  }
  if (episodes_.size() == capacity_) episodes_.pop_front();
  episodes_.emplace_back(static_cast<std::size_t>(width_) * height_, 0u);
}

void Heatmap::record_visit(TileCoord t) {
  if (episodes_.empty() || t.x < 0 || t.y < 0 || t.x >= width_ || t.y >= height_) return;
  ++episodes_.back()[static_cast<std::size_t>(t.y) * width_ + t.x];
}

void Heatmap::push_episode(std::vector<std::uint32_t> counts) {
  counts.resize(static_cast<std::size_t>(width_) * height_, 0u);
  if (episodes_.size() == capacity_) episodes_.pop_front();
  episodes_.push_back(std::move(counts));
}

std::vector<std::uint64_t> Heatmap::aggregate() const {
  std::vector<std::uint64_t> sum(static_cast<std::size_t>(width_) * height_, 0);
  for (const auto& ep : episodes_)
    for (std::size_t i = 0; i < ep.size(); ++i) sum[i] += ep[i];
  return sum;
}

}  // namespace hasard::env

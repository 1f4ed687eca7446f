#pragma once

// Binary post-processing: connected-component labeling, largest-region
// extraction and hole filling by iterated conditional dilation.

#include <algorithm>
#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "roaddet/raster.hpp"

namespace roaddet {

struct LabelMap {
  Grid<int> labels;  // 0 = background, components numbered from 1
  int component_count = 0;
};

enum class Connectivity { Four = 4, Eight = 8 };

namespace detail {

inline constexpr std::array<std::pair<int, int>, 4> kFourNeighbors{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
inline constexpr std::array<std::pair<int, int>, 8> kEightNeighbors{
    {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};

template <typename Visit>
void for_each_neighbor(Connectivity conn, int x, int y, Visit&& visit) {
  if (conn == Connectivity::Four) {
    for (auto [dx, dy] : kFourNeighbors) visit(x + dx, y + dy);
  } else {
    for (auto [dx, dy] : kEightNeighbors) visit(x + dx, y + dy);
  }
}

}  // namespace detail

// Labels are assigned in raster-scan order of each component's first pixel.
inline LabelMap connected_components(const BinaryMask& mask, Connectivity conn = Connectivity::Eight) {
  LabelMap out{Grid<int>(mask.width(), mask.height(), 0), 0};
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < mask.height(); ++y) {
    for (int x = 0; x < mask.width(); ++x) {
      if (!mask(x, y) || out.labels(x, y) != 0) continue;
      const int label = ++out.component_count;
      out.labels(x, y) = label;
      stack.emplace_back(x, y);
      while (!stack.empty()) {
        auto [cx, cy] = stack.back();
        stack.pop_back();
        detail::for_each_neighbor(conn, cx, cy, [&](int nx, int ny) {
          if (mask.contains(nx, ny) && mask(nx, ny) && out.labels(nx, ny) == 0) {
            out.labels(nx, ny) = label;
            stack.emplace_back(nx, ny);
          }
        });
      }
    }
  }
  return out;
}

inline std::vector<std::size_t> component_sizes(const LabelMap& labels) {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(labels.component_count) + 1, 0);
  for (int l : labels.labels) ++sizes[static_cast<std::size_t>(l)];
  return sizes;
}

// Largest component by pixel count; ties go to the smallest label.
inline BinaryMask largest_component(const LabelMap& labels) {
  BinaryMask out(labels.labels.width(), labels.labels.height(), 0);
  if (labels.component_count == 0) return out;
  const auto sizes = component_sizes(labels);
  int best = 1;
  for (int l = 2; l <= labels.component_count; ++l)
    if (sizes[l] > sizes[best]) best = l;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = labels.labels[i] == best ? 1 : 0;
  return out;
}

class StructuringElement {
 public:
  using Offset = std::pair<int, int>;

  // 4-connected cross.
  StructuringElement() : offsets_{{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}} {}

  explicit StructuringElement(std::vector<Offset> offsets) : offsets_(std::move(offsets)) {
    auto has = [this](Offset o) {
      return std::find(offsets_.begin(), offsets_.end(), o) != offsets_.end();
    };
    if (!has({0, 0}))
      throw Error(ErrorKind::InvalidConfig, "structuring element must contain the origin");
    for (auto [dx, dy] : offsets_)
      if (!has({-dx, -dy}))
        throw Error(ErrorKind::InvalidConfig, "structuring element must be symmetric");
  }

  static StructuringElement square() {
    std::vector<Offset> o;
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) o.emplace_back(dx, dy);
    return StructuringElement(std::move(o));
  }

  const std::vector<Offset>& offsets() const noexcept { return offsets_; }

 private:
  std::vector<Offset> offsets_;
};

// Conditional dilation X_k = (X_{k-1} (+) B) n constraint, iterated from
// `seed` until X_k = X_{k-1}. Only the pixels added in the previous round
// can contribute new pixels, so each round dilates just that frontier.
inline BinaryMask conditional_dilation(const BinaryMask& seed, const BinaryMask& constraint,
                                       const StructuringElement& element) {
  require_same_shape(seed, constraint, "conditional_dilation");
  BinaryMask current(seed.width(), seed.height(), 0);
  std::vector<std::pair<int, int>> frontier;
  for (int y = 0; y < seed.height(); ++y)
    for (int x = 0; x < seed.width(); ++x)
      if (seed(x, y) && constraint(x, y)) {
        current(x, y) = 1;
        frontier.emplace_back(x, y);
      }
  std::vector<std::pair<int, int>> next;
  while (!frontier.empty()) {
    next.clear();
    for (auto [x, y] : frontier)
      for (auto [dx, dy] : element.offsets()) {
        const int nx = x + dx, ny = y + dy;
        if (current.contains(nx, ny) && constraint(nx, ny) && !current(nx, ny)) {
          current(nx, ny) = 1;
          next.emplace_back(nx, ny);
        }
      }
    frontier.swap(next);
  }
  return current;
}

// Fills every background region that cannot be reached from the image
// border through background pixels under `element`. The border-reachable
// background is grown from the border background pixels by conditional
// dilation inside the complement; everything else becomes foreground.
inline BinaryMask fill_holes(const BinaryMask& mask, const StructuringElement& element = {}) {
  const int w = mask.width(), h = mask.height();
  BinaryMask complement(w, h);
  BinaryMask border(w, h, 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      complement(x, y) = mask(x, y) ? 0 : 1;
      if (x == 0 || y == 0 || x == w - 1 || y == h - 1) border(x, y) = complement(x, y);
    }
  const BinaryMask outside = conditional_dilation(border, complement, element);
  BinaryMask out(w, h);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = outside[i] ? 0 : 1;
  return out;
}

}  // namespace roaddet

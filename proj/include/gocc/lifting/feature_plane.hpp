#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gocc/core/math.hpp"

namespace gocc::lifting {

// H x W x F feature grid, channels innermost. Texel (row, col) is centered at
// plane coordinate (u, v) = (col, row).
struct FeaturePlane {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<float> values;

  FeaturePlane() = default;
  FeaturePlane(int h, int w, int f)
      : height(h), width(w), channels(f), values(static_cast<std::size_t>(h) * w * f, 0.0f) {}

  std::size_t offset(int row, int col) const {
    return (static_cast<std::size_t>(row) * width + col) * channels;
  }
  std::span<float> texel(int row, int col) { return {values.data() + offset(row, col), static_cast<std::size_t>(channels)}; }
  std::span<const float> texel(int row, int col) const {
    return {values.data() + offset(row, col), static_cast<std::size_t>(channels)};
  }

  bool operator==(const FeaturePlane&) const = default;
};

// Bilinear blend of the four texels around uv. Texels outside the plane
// contribute zero, so a uv far outside returns the zero vector.
VecX sample_bilinear(const FeaturePlane& plane, const Vec2& uv);

// Accumulates weight * sample into out (length = channels) without allocating.
void accumulate_bilinear(const FeaturePlane& plane, const Vec2& uv, double weight, double* out);

}  // namespace gocc::lifting

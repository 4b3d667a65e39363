#include "gocc/lifting/feature_plane.hpp"

#include <cmath>

namespace gocc::lifting {

void accumulate_bilinear(const FeaturePlane& plane, const Vec2& uv, double weight, double* out) {
  if (weight == 0.0 || !std::isfinite(uv.x()) || !std::isfinite(uv.y())) {
    return;
  }
  const double fx = std::floor(uv.x());
  const double fy = std::floor(uv.y());
  if (fx < -1.0 || fy < -1.0 || fx >= plane.width || fy >= plane.height) {
    return;
  }
  const int x0 = static_cast<int>(fx);
  const int y0 = static_cast<int>(fy);
  const double tx = uv.x() - fx;
  const double ty = uv.y() - fy;
  const double corner_weight[4] = {(1 - tx) * (1 - ty), tx * (1 - ty), (1 - tx) * ty, tx * ty};
  const int corner_col[4] = {x0, x0 + 1, x0, x0 + 1};
  const int corner_row[4] = {y0, y0, y0 + 1, y0 + 1};
  for (int k = 0; k < 4; ++k) {
    const int col = corner_col[k];
    const int row = corner_row[k];
    if (corner_weight[k] == 0.0 || col < 0 || row < 0 || col >= plane.width || row >= plane.height) {
      continue;
    }
    const double w = weight * corner_weight[k];
    const float* texel = plane.values.data() + plane.offset(row, col);
    for (int c = 0; c < plane.channels; ++c) {
      out[c] += w * texel[c];
    }
  }
}

VecX sample_bilinear(const FeaturePlane& plane, const Vec2& uv) {
  VecX out = VecX::Zero(plane.channels);
  accumulate_bilinear(plane, uv, 1.0, out.data());
  return out;
}

}  // namespace gocc::lifting

#pragma once

#include <Eigen/Core>
#include <vector>

#include "gocc/core/gaussian.hpp"
#include "gocc/lifting/feature_plane.hpp"

namespace gocc::lifting {

struct CameraView {
  FeaturePlane plane;
  Mat3 intrinsics = Mat3::Identity();
  Eigen::Matrix4d extrinsics = Eigen::Matrix4d::Identity();  // world -> camera

  bool operator==(const CameraView&) const = default;
};

struct MultiViewFeatureSet {
  std::vector<CameraView> views;

  int channels() const { return views.empty() ? 0 : views.front().plane.channels; }
  // All planes share F; focal entries positive.
  void validate() const;

  bool operator==(const MultiViewFeatureSet&) const = default;
};

struct ProjectedPoint {
  Vec2 uv = Vec2::Zero();
  double depth = 0.0;
  bool valid = false;
};

// Pinhole projection. Valid iff depth > 0 and uv lies within the texel-center
// span [0, W-1] x [0, H-1].
ProjectedPoint project_to_view(const Vec3& point, const CameraView& view);

// Fixed learned pixel offsets and their softmax-normalized weights, shared by
// every view.
struct CameraAggregationWeights {
  std::vector<Vec2> offsets;
  VecX logits;
};

// Per valid view: softmax-weighted samples at uv + offset_k; then the mean
// over valid views. Zero when no view sees the anchor.
VecX aggregate_camera(const GaussianPrimitive& anchor, const MultiViewFeatureSet& views,
                      const CameraAggregationWeights& weights);

}  // namespace gocc::lifting

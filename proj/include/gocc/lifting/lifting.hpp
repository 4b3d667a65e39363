#pragma once

#include <vector>

#include "gocc/core/model_config.hpp"
#include "gocc/core/parameters.hpp"
#include "gocc/lifting/camera.hpp"
#include "gocc/lifting/ldfa.hpp"

namespace gocc::lifting {

std::vector<ParameterSpec> declare_parameters(const ModelConfig& config);

struct LiftingWeights {
  CameraAggregationWeights camera;
  LdfaWeights ldfa;

  static LiftingWeights from_bundle(const ParameterBundle& bundle, const ModelConfig& config);
};

// Per-anchor features, one row per anchor.
struct LiftedFeatures {
  RowMatX camera;
  RowMatX lidar;
};

// Runs both branches for every anchor; anchors are independent and evaluated
// in parallel.
LiftedFeatures lift_anchors(const std::vector<GaussianPrimitive>& anchors,
                            const MultiViewFeatureSet& views, const DepthPlaneStack& stack,
                            const LiftingWeights& weights, const DepthChunking& chunking);

}  // namespace gocc::lifting

#pragma once

#include <Eigen/Geometry>
#include <cstdint>
#include <vector>

#include "gocc/core/grid.hpp"
#include "gocc/core/math.hpp"

namespace gocc {

inline constexpr double kRotationTolerance = 1e-6;

// One anisotropic Gaussian anchor. Scale is kept as log-scale so additive
// refinement can never make an axis non-positive.
struct GaussianPrimitive {
  Vec3 centroid = Vec3::Zero();
  Vec3 log_scale = Vec3::Zero();
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();
  double opacity_logit = 0.0;
  VecX semantic_logits;
  VecX feature;

  Vec3 scale() const { return log_scale.array().exp(); }
  double opacity() const { return sigmoid(opacity_logit); }
};

// Throws invalid-rotation when |q| deviates from 1 by more than kRotationTolerance.
void check_unit_rotation(const Eigen::Quaterniond& rotation);

// Sigma = R diag(scale^2) R^T, symmetrized.
Mat3 make_covariance(const Vec3& scale, const Eigen::Quaterniond& rotation);

inline Mat3 make_covariance(const GaussianPrimitive& g) {
  return make_covariance(g.scale(), g.rotation);
}

struct AnchorInit {
  // Per-anchor initial scale is drawn uniformly from this set (meters).
  std::vector<double> scale_choices{0.2, 0.5, 1.0};
  int semantic_classes = 17;
  int feature_width = 0;
};

// Uniform centroids over the grid box, identity rotations, zero logits.
// A pure function of (count, spec, seed, init).
std::vector<GaussianPrimitive> init_anchors(std::size_t count, const GridSpec& spec,
                                            std::uint64_t seed, const AnchorInit& init = {});

}  // namespace gocc

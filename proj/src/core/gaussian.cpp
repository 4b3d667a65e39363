#include "gocc/core/gaussian.hpp"

#include <cmath>
#include <string>

#include "gocc/core/error.hpp"
#include "gocc/core/rng.hpp"

namespace gocc {

void check_unit_rotation(const Eigen::Quaterniond& rotation) {
  const double norm = rotation.coeffs().norm();
  if (!std::isfinite(norm) || std::abs(norm - 1.0) > kRotationTolerance) {
    throw Error(ErrorCode::invalid_rotation,
                "quaternion norm " + std::to_string(norm) + " is not unit");
  }
}

Mat3 make_covariance(const Vec3& scale, const Eigen::Quaterniond& rotation) {
  check_unit_rotation(rotation);
  if (!(scale.array() > 0.0).all()) {
    throw Error(ErrorCode::degenerate_covariance, "scale must be positive on every axis");
  }
  const Mat3 r = rotation.toRotationMatrix();
  const Mat3 sigma = r * scale.array().square().matrix().asDiagonal() * r.transpose();
  return 0.5 * (sigma + sigma.transpose());
}

std::vector<GaussianPrimitive> init_anchors(std::size_t count, const GridSpec& spec,
                                            std::uint64_t seed, const AnchorInit& init) {
  if (count == 0) {
    throw Error(ErrorCode::empty_configuration, "anchor count must be at least 1");
  }
  if (init.scale_choices.empty()) {
    throw Error(ErrorCode::empty_configuration, "no initial scale choices");
  }
  spec.validate();
  const Vec3 lo = spec.box_min();
  const Vec3 extent = spec.box_max() - lo;

  CounterRng rng(seed, "anchors");
  std::vector<GaussianPrimitive> anchors(count);
  for (auto& a : anchors) {
    for (int axis = 0; axis < 3; ++axis) {
      a.centroid[axis] = lo[axis] + rng.uniform() * extent[axis];
    }
    const double s = init.scale_choices[rng.below(init.scale_choices.size())];
    a.log_scale = Vec3::Constant(std::log(s));
    a.semantic_logits = VecX::Zero(init.semantic_classes);
    a.feature = VecX::Zero(init.feature_width);
  }
  return anchors;
}

}  // namespace gocc

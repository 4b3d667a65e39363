#include "gocc/lifting/camera.hpp"

#include "gocc/core/error.hpp"

namespace gocc::lifting {

void MultiViewFeatureSet::validate() const {
  for (const auto& v : views) {
    if (v.plane.channels != channels()) {
      throw Error(ErrorCode::shape, "camera planes disagree on channel count");
    }
    if (v.plane.values.size() != static_cast<std::size_t>(v.plane.height) * v.plane.width * v.plane.channels) {
      throw Error(ErrorCode::shape, "camera plane payload does not match its dims");
    }
    if (!(v.intrinsics(0, 0) > 0.0) || !(v.intrinsics(1, 1) > 0.0)) {
      throw Error(ErrorCode::configuration, "camera focal lengths must be positive");
    }
  }
}

ProjectedPoint project_to_view(const Vec3& point, const CameraView& view) {
  ProjectedPoint out;
  const Vec3 cam = view.extrinsics.topLeftCorner<3, 3>() * point + view.extrinsics.topRightCorner<3, 1>();
  out.depth = cam.z();
  if (!(cam.z() > 0.0)) {
    return out;
  }
  const Vec3 pixel = view.intrinsics * (cam / cam.z());
  out.uv = pixel.head<2>();
  out.valid = out.uv.x() >= 0.0 && out.uv.y() >= 0.0 && out.uv.x() <= view.plane.width - 1 &&
              out.uv.y() <= view.plane.height - 1;
  return out;
}

VecX aggregate_camera(const GaussianPrimitive& anchor, const MultiViewFeatureSet& views,
                      const CameraAggregationWeights& weights) {
  VecX total = VecX::Zero(views.channels());
  if (views.views.empty()) {
    return total;
  }
  const VecX w = softmax(weights.logits);
  int valid = 0;
  for (const auto& view : views.views) {
    const ProjectedPoint p = project_to_view(anchor.centroid, view);
    if (!p.valid) {
      continue;
    }
    ++valid;
    for (std::size_t k = 0; k < weights.offsets.size(); ++k) {
      accumulate_bilinear(view.plane, p.uv + weights.offsets[k], w[static_cast<Eigen::Index>(k)],
                          total.data());
    }
  }
  if (valid > 0) {
    total /= static_cast<double>(valid);
  }
  return total;
}

}  // namespace gocc::lifting

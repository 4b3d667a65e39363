#include "gocc/lifting/lifting.hpp"

#include "gocc/core/error.hpp"
#include "gocc/core/parallel.hpp"

namespace gocc::lifting {
namespace {

std::uint32_t u(int v) { return static_cast<std::uint32_t>(v); }

}  // namespace

std::vector<ParameterSpec> declare_parameters(const ModelConfig& c) {
  const int f = c.input_channels;
  const int p = c.keypoints;
  const int k = c.depth_chunks;
  return {
      {"lifting.camera.offsets", {u(c.camera_offsets), 2}, ParameterInit::uniform_fan_in, 2.0, 1},
      {"lifting.camera.logits", {u(c.camera_offsets)}, ParameterInit::uniform_fan_in, 1.0, 1},
      {"lifting.ldfa.offset.weight", {u(3 * p), u(f)}},
      {"lifting.ldfa.offset.bias", {u(3 * p)}, ParameterInit::uniform_fan_in, 1.0, 1},
      {"lifting.ldfa.attention.weight", {u(p), u(f)}},
      {"lifting.ldfa.attention.bias", {u(p)}, ParameterInit::uniform_fan_in, 1.0, u(f)},
      {"lifting.ldfa.phi.weight", {u(f), u((k - 1) * f)}},
      {"lifting.ldfa.phi.bias", {u(f)}, ParameterInit::uniform_fan_in, 1.0, u((k - 1) * f)},
      {"lifting.ldfa.gate.weight", {u(2 * f)}, ParameterInit::uniform_fan_in, 1.0, u(2 * f)},
      {"lifting.ldfa.gate.bias", {1}, ParameterInit::constant, 0.0},
  };
}

LiftingWeights LiftingWeights::from_bundle(const ParameterBundle& bundle, const ModelConfig& c) {
  const int f = c.input_channels;
  const int p = c.keypoints;
  LiftingWeights w;
  const MatX offsets = bundle.matrix("lifting.camera.offsets", c.camera_offsets, 2);
  for (int k = 0; k < c.camera_offsets; ++k) {
    w.camera.offsets.emplace_back(offsets(k, 0), offsets(k, 1));
  }
  w.camera.logits = bundle.vector("lifting.camera.logits", c.camera_offsets);
  w.ldfa.keypoints = p;
  w.ldfa.offset_weight = bundle.matrix("lifting.ldfa.offset.weight", 3 * p, f);
  w.ldfa.offset_bias = bundle.vector("lifting.ldfa.offset.bias", 3 * p);
  w.ldfa.attention_weight = bundle.matrix("lifting.ldfa.attention.weight", p, f);
  w.ldfa.attention_bias = bundle.vector("lifting.ldfa.attention.bias", p);
  w.ldfa.phi_weight = bundle.matrix("lifting.ldfa.phi.weight", f, (c.depth_chunks - 1) * f);
  w.ldfa.phi_bias = bundle.vector("lifting.ldfa.phi.bias", f);
  w.ldfa.gate_weight = bundle.vector("lifting.ldfa.gate.weight", 2 * f);
  w.ldfa.gate_bias = bundle.scalar("lifting.ldfa.gate.bias");
  return w;
}

LiftedFeatures lift_anchors(const std::vector<GaussianPrimitive>& anchors,
                            const MultiViewFeatureSet& views, const DepthPlaneStack& stack,
                            const LiftingWeights& weights, const DepthChunking& chunking) {
  views.validate();
  stack.validate();
  if (!views.views.empty() && views.channels() != stack.channels()) {
    throw Error(ErrorCode::shape, "camera and LiDAR planes disagree on channel count");
  }
  const auto n = static_cast<Eigen::Index>(anchors.size());
  LiftedFeatures out;
  out.camera = RowMatX::Zero(n, stack.channels());
  out.lidar = RowMatX::Zero(n, stack.channels());
  parallel_for(anchors.size(), 256, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto row = static_cast<Eigen::Index>(i);
      out.camera.row(row) = aggregate_camera(anchors[i], views, weights.camera).transpose();
      out.lidar.row(row) = lift_lidar(anchors[i], stack, weights.ldfa, chunking).transpose();
    }
  });
  return out;
}

}  // namespace gocc::lifting

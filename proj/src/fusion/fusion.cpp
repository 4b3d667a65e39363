#include "gocc/fusion/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gocc/core/error.hpp"
#include "gocc/core/parallel.hpp"

namespace gocc::fusion {
namespace {

std::uint32_t u(int v) { return static_cast<std::uint32_t>(v); }

}  // namespace

std::string_view to_string(FusionMode mode) {
  switch (mode) {
    case FusionMode::addition: return "addition";
    case FusionMode::concatenation: return "concatenation";
    case FusionMode::adaptive: return "adaptive";
  }
  return "adaptive";
}

FusionMode parse_fusion_mode(std::string_view text) {
  if (text == "addition") return FusionMode::addition;
  if (text == "concatenation" || text == "concat") return FusionMode::concatenation;
  if (text == "adaptive") return FusionMode::adaptive;
  throw ValidationError("fusion", "unknown fusion mode '" + std::string(text) + "'");
}

std::vector<ParameterSpec> declare_parameters(const ModelConfig& c) {
  const std::uint32_t f = u(c.input_channels);
  const std::uint32_t lat = u(c.consistency_width());
  return {
      {"fusion.attention.query_lidar", {f, f}},
      {"fusion.attention.key_camera", {f, f}},
      {"fusion.attention.value_camera", {f, f}},
      {"fusion.attention.query_camera", {f, f}},
      {"fusion.attention.key_lidar", {f, f}},
      {"fusion.attention.value_lidar", {f, f}},
      {"fusion.gate.hidden.weight", {f, 2 * f}},
      {"fusion.gate.hidden.bias", {f}, ParameterInit::uniform_fan_in, 1.0, 2 * f},
      {"fusion.gate.out.weight", {f}, ParameterInit::uniform_fan_in, 1.0, f},
      {"fusion.gate.out.bias", {1}, ParameterInit::constant, 0.0},
      {"fusion.consistency.proj_lidar", {lat, f}},
      {"fusion.consistency.proj_camera", {lat, f}},
      {"fusion.consistency.linear.weight", {f}, ParameterInit::uniform_fan_in, 1.0, 1},
      {"fusion.consistency.linear.bias", {f}, ParameterInit::constant, 0.0},
      {"fusion.concat.weight", {f, 2 * f}},
      {"fusion.concat.bias", {f}, ParameterInit::uniform_fan_in, 1.0, 2 * f},
  };
}

FusionWeights FusionWeights::from_bundle(const ParameterBundle& b, const ModelConfig& c) {
  const int f = c.input_channels;
  const int lat = c.consistency_width();
  FusionWeights w;
  w.query_lidar = b.matrix("fusion.attention.query_lidar", f, f);
  w.key_camera = b.matrix("fusion.attention.key_camera", f, f);
  w.value_camera = b.matrix("fusion.attention.value_camera", f, f);
  w.query_camera = b.matrix("fusion.attention.query_camera", f, f);
  w.key_lidar = b.matrix("fusion.attention.key_lidar", f, f);
  w.value_lidar = b.matrix("fusion.attention.value_lidar", f, f);
  w.gate_hidden_weight = b.matrix("fusion.gate.hidden.weight", f, 2 * f);
  w.gate_hidden_bias = b.vector("fusion.gate.hidden.bias", f);
  w.gate_out_weight = b.vector("fusion.gate.out.weight", f);
  w.gate_out_bias = b.scalar("fusion.gate.out.bias");
  w.consist_lidar = b.matrix("fusion.consistency.proj_lidar", lat, f);
  w.consist_camera = b.matrix("fusion.consistency.proj_camera", lat, f);
  w.consist_weight = b.vector("fusion.consistency.linear.weight", f);
  w.consist_bias = b.vector("fusion.consistency.linear.bias", f);
  w.concat_weight = b.matrix("fusion.concat.weight", f, 2 * f);
  w.concat_bias = b.vector("fusion.concat.bias", f);
  return w;
}

AttentionOutputs cross_attend_pointwise(const VecX& lidar, const VecX& camera, const FusionWeights& w) {
  const double scale = 1.0 / std::sqrt(static_cast<double>(lidar.size()));
  const double score_lidar = (w.query_lidar * lidar).dot(w.key_camera * camera) * scale;
  const double score_camera = (w.query_camera * camera).dot(w.key_lidar * lidar) * scale;
  return {lidar + sigmoid(score_lidar) * (w.value_camera * camera),
          camera + sigmoid(score_camera) * (w.value_lidar * lidar)};
}

VecX blend(double mask, const VecX& h_lidar, const VecX& h_camera) {
  return mask * h_lidar + (1.0 - mask) * h_camera;
}

GateOutputs soft_gate(const VecX& h_lidar, const VecX& h_camera, const FusionWeights& w) {
  const auto f = h_lidar.size();
  VecX hidden = w.gate_hidden_weight.leftCols(f) * h_lidar +
                w.gate_hidden_weight.rightCols(f) * h_camera + w.gate_hidden_bias;
  hidden = hidden.cwiseMax(0.0);
  GateOutputs out;
  out.mask = sigmoid(w.gate_out_weight.dot(hidden) + w.gate_out_bias);
  out.fused = blend(out.mask, h_lidar, h_camera);
  return out;
}

double cosine_similarity(const VecX& a, const VecX& b) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) {
    return 0.0;
  }
  return std::clamp(a.dot(b) / (na * nb), -1.0, 1.0);
}

ConsistencyOutputs consistency_reweight(const VecX& lidar, const VecX& camera, const VecX& h_fused,
                                        const FusionWeights& w) {
  ConsistencyOutputs out;
  out.similarity = cosine_similarity(w.consist_lidar * lidar, w.consist_camera * camera);
  out.gate = (w.consist_weight * out.similarity + w.consist_bias).unaryExpr([](double x) { return sigmoid(x); });
  out.output = h_fused.cwiseProduct(out.gate);
  return out;
}

FusedFeature fuse_adaptive(const VecX& lidar, const VecX& camera, const FusionWeights& w) {
  FusedFeature out;
  out.attention = cross_attend_pointwise(lidar, camera, w);
  out.gate = soft_gate(out.attention.lidar, out.attention.camera, w);
  out.consistency = consistency_reweight(lidar, camera, out.gate.fused, w);
  return out;
}

VecX fuse_by_addition(const VecX& lidar, const VecX& camera) { return lidar + camera; }

VecX fuse_by_concat(const VecX& lidar, const VecX& camera, const FusionWeights& w) {
  const auto f = lidar.size();
  return w.concat_weight.leftCols(f) * lidar + w.concat_weight.rightCols(f) * camera + w.concat_bias;
}

RowMatX fuse_all(FusionMode mode, const RowMatX& lidar, const RowMatX& camera, const FusionWeights& w) {
  if (lidar.rows() != camera.rows() || lidar.cols() != camera.cols()) {
    throw Error(ErrorCode::shape, "camera and LiDAR feature sets differ in shape");
  }
  RowMatX out(lidar.rows(), lidar.cols());
  parallel_for(static_cast<std::size_t>(lidar.rows()), 512, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto r = static_cast<Eigen::Index>(i);
      const VecX fl = lidar.row(r).transpose();
      const VecX fc = camera.row(r).transpose();
      switch (mode) {
        case FusionMode::addition: out.row(r) = fuse_by_addition(fl, fc).transpose(); break;
        case FusionMode::concatenation: out.row(r) = fuse_by_concat(fl, fc, w).transpose(); break;
        case FusionMode::adaptive: out.row(r) = fuse_adaptive(fl, fc, w).final_feature().transpose(); break;
      }
    }
  });
  return out;
}

}  // namespace gocc::fusion

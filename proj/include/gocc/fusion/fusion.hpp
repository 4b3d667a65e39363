#pragma once

#include <string_view>
#include <vector>

#include "gocc/core/math.hpp"
#include "gocc/core/model_config.hpp"
#include "gocc/core/parameters.hpp"

namespace gocc::fusion {

enum class FusionMode { addition, concatenation, adaptive };

std::string_view to_string(FusionMode mode);
FusionMode parse_fusion_mode(std::string_view text);

struct FusionWeights {
  // Dual-stream cross attention, all F x F.
  MatX query_lidar, key_camera, value_camera;
  MatX query_camera, key_lidar, value_lidar;
  // Scalar gate MLP: 2F -> F (ReLU) -> 1 (sigmoid).
  MatX gate_hidden_weight;
  VecX gate_hidden_bias;
  VecX gate_out_weight;
  double gate_out_bias = 0.0;
  // Consistency gate: latent projections F -> F/2 per modality, then 1 -> F.
  MatX consist_lidar, consist_camera;
  VecX consist_weight;
  VecX consist_bias;
  // Concatenation baseline: 2F -> F.
  MatX concat_weight;
  VecX concat_bias;

  static FusionWeights from_bundle(const ParameterBundle& bundle, const ModelConfig& config);
};

std::vector<ParameterSpec> declare_parameters(const ModelConfig& config);

struct AttentionOutputs {
  VecX lidar;   // H_L
  VecX camera;  // H_C
};

// H_L = F_L + sigmoid(Q_L . K_C / sqrt(d)) V_C and the mirror for H_C. The
// score is one scalar per anchor, so the cost is linear in the anchor count.
AttentionOutputs cross_attend_pointwise(const VecX& lidar, const VecX& camera, const FusionWeights& w);

struct GateOutputs {
  double mask = 0.0;  // M_gate
  VecX fused;         // M H_L + (1 - M) H_C
};

GateOutputs soft_gate(const VecX& h_lidar, const VecX& h_camera, const FusionWeights& w);
// The convex blend alone, for a given mask value.
VecX blend(double mask, const VecX& h_lidar, const VecX& h_camera);

struct ConsistencyOutputs {
  double similarity = 0.0;  // cosine of the latent projections, 0 if either is zero
  VecX gate;                // W_consist, per channel in (0, 1)
  VecX output;              // H_fused (.) W_consist
};

ConsistencyOutputs consistency_reweight(const VecX& lidar, const VecX& camera, const VecX& h_fused,
                                        const FusionWeights& w);

double cosine_similarity(const VecX& a, const VecX& b);

struct FusedFeature {
  AttentionOutputs attention;
  GateOutputs gate;
  ConsistencyOutputs consistency;
  const VecX& final_feature() const { return consistency.output; }
};

FusedFeature fuse_adaptive(const VecX& lidar, const VecX& camera, const FusionWeights& w);
VecX fuse_by_addition(const VecX& lidar, const VecX& camera);
VecX fuse_by_concat(const VecX& lidar, const VecX& camera, const FusionWeights& w);

// Row-wise fusion of every anchor under the selected mode.
RowMatX fuse_all(FusionMode mode, const RowMatX& lidar, const RowMatX& camera, const FusionWeights& w);

}  // namespace gocc::fusion

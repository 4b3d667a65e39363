#pragma once

#include <cstdint>
#include <vector>

#include "gocc/core/math.hpp"
#include "gocc/core/model_config.hpp"
#include "gocc/core/parameters.hpp"

namespace gocc::smoothing {

struct SmoothingConfig {
  double temperature = 1.0;
  double floor = 1e-6;  // xi: guards the logarithm and the weight denominator
  int layer_count = 1;
  double selection_probability = 0.5;
  std::uint64_t seed = 0;

  void validate() const;
};

// softmax(logits / tau). Throws a configuration error for tau <= 0.
VecX tempered_softmax(const VecX& logits, double temperature);

struct CrossEntropyPair {
  double camera_to_lidar = 0.0;  // -sum P_cam log(Q_lidar + xi)
  double lidar_to_camera = 0.0;  // -sum Q_lidar log(P_cam + xi)
};

CrossEntropyPair bidirectional_cross_entropy(const VecX& p_camera, const VecX& q_lidar, double floor);

struct ConfidenceWeights {
  double camera = 0.0;
  double lidar = 0.0;
};

// omega_cam = exp(-H_lidar->cam), omega_lidar = exp(-H_cam->lidar),
// W_x = omega_x / (omega_cam + omega_lidar + xi).
//
// The larger weight is the rounded quotient; the smaller is formed as
// S/(S+xi) minus the larger, which is exact (Sterbenz), so W_cam + W_lidar
// rounds to exactly S/(S+xi) and equal entropies give bitwise-equal weights.
ConfidenceWeights confidence_weights(double camera_to_lidar, double lidar_to_camera, double floor);

// F_cam + eps * W_cam and F_lidar + eps * W_lidar, scalars broadcast to every channel.
std::pair<VecX, VecX> apply_smoothing(const VecX& camera, const VecX& lidar,
                                      const ConfidenceWeights& weights, double epsilon);

// Bernoulli(rho) per layer when training; all false otherwise.
std::vector<bool> select_layers(int layer_count, double probability, std::uint64_t seed, bool training);

struct EntropyMaps {
  std::vector<CrossEntropyPair> entropy;
  std::vector<ConfidenceWeights> weights;
};

EntropyMaps compute_entropy_maps(const RowMatX& camera, const RowMatX& lidar,
                                 const SmoothingConfig& config);

std::vector<ParameterSpec> declare_parameters(const ModelConfig& config);
double load_epsilon(const ParameterBundle& bundle);

// Applies one smoothing pass per selected layer to every anchor in place.
void smooth_features(RowMatX& camera, RowMatX& lidar, const std::vector<bool>& layer_mask,
                     double epsilon, const SmoothingConfig& config);

}  // namespace gocc::smoothing

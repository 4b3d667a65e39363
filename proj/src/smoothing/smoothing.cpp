#include "gocc/smoothing/smoothing.hpp"

#include <cmath>

#include "gocc/core/error.hpp"
#include "gocc/core/parallel.hpp"
#include "gocc/core/rng.hpp"

namespace gocc::smoothing {

void SmoothingConfig::validate() const {
  if (!(temperature > 0.0)) {
    throw ValidationError("smoothing.temperature", "must be positive");
  }
  if (!(floor > 0.0)) {
    throw ValidationError("smoothing.floor", "must be positive");
  }
  if (layer_count < 0) {
    throw ValidationError("smoothing.layer_count", "must be non-negative");
  }
  if (!(selection_probability >= 0.0 && selection_probability <= 1.0)) {
    throw ValidationError("smoothing.selection_probability", "must lie in [0, 1]");
  }
}

VecX tempered_softmax(const VecX& logits, double temperature) {
  if (!(temperature > 0.0)) {
    throw Error(ErrorCode::configuration, "temperature must be positive");
  }
  return softmax(logits / temperature);
}

namespace {

double cross_entropy(const VecX& target, const VecX& other, double floor) {
  double h = 0.0;
  for (Eigen::Index c = 0; c < target.size(); ++c) {
    // 0 log 0 = 0, so a zero-mass class never contributes
    if (target[c] == 0.0) {
      continue;
    }
    h -= target[c] * std::log(other[c] + floor);
  }
  return h;
}

}  // namespace

CrossEntropyPair bidirectional_cross_entropy(const VecX& p_camera, const VecX& q_lidar, double floor) {
  if (p_camera.size() != q_lidar.size()) {
    throw Error(ErrorCode::shape, "distributions differ in length");
  }
  return {cross_entropy(p_camera, q_lidar, floor), cross_entropy(q_lidar, p_camera, floor)};
}

ConfidenceWeights confidence_weights(double camera_to_lidar, double lidar_to_camera, double floor) {
  const double omega_camera = std::exp(-lidar_to_camera);
  const double omega_lidar = std::exp(-camera_to_lidar);
  const double total = omega_camera + omega_lidar;
  const double denom = total + floor;
  const double both = total / denom;
  ConfidenceWeights w;
  if (omega_camera >= omega_lidar) {
    w.camera = omega_camera / denom;
    w.lidar = both - w.camera;
  } else {
    w.lidar = omega_lidar / denom;
    w.camera = both - w.lidar;
  }
  return w;
}

std::pair<VecX, VecX> apply_smoothing(const VecX& camera, const VecX& lidar,
                                      const ConfidenceWeights& weights, double epsilon) {
  return {camera.array() + epsilon * weights.camera, lidar.array() + epsilon * weights.lidar};
}

std::vector<bool> select_layers(int layer_count, double probability, std::uint64_t seed, bool training) {
  std::vector<bool> mask(static_cast<std::size_t>(std::max(0, layer_count)), false);
  if (!training) {
    return mask;
  }
  CounterRng rng(seed, "smoothing-layers");
  for (std::size_t l = 0; l < mask.size(); ++l) {
    mask[l] = rng.uniform() < probability;
  }
  return mask;
}

EntropyMaps compute_entropy_maps(const RowMatX& camera, const RowMatX& lidar,
                                 const SmoothingConfig& config) {
  config.validate();
  if (camera.rows() != lidar.rows() || camera.cols() != lidar.cols()) {
    throw Error(ErrorCode::shape, "camera and LiDAR feature sets differ in shape");
  }
  const auto n = static_cast<std::size_t>(camera.rows());
  EntropyMaps maps;
  maps.entropy.resize(n);
  maps.weights.resize(n);
  parallel_for(n, 1024, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto row = static_cast<Eigen::Index>(i);
      const VecX p = tempered_softmax(camera.row(row).transpose(), config.temperature);
      const VecX q = tempered_softmax(lidar.row(row).transpose(), config.temperature);
      maps.entropy[i] = bidirectional_cross_entropy(p, q, config.floor);
      maps.weights[i] = confidence_weights(maps.entropy[i].camera_to_lidar,
                                           maps.entropy[i].lidar_to_camera, config.floor);
    }
  });
  return maps;
}

std::vector<ParameterSpec> declare_parameters(const ModelConfig&) {
  return {{"smoothing.epsilon", {1}, ParameterInit::constant, 0.1}};
}

double load_epsilon(const ParameterBundle& bundle) { return bundle.scalar("smoothing.epsilon"); }

void smooth_features(RowMatX& camera, RowMatX& lidar, const std::vector<bool>& layer_mask,
                     double epsilon, const SmoothingConfig& config) {
  for (const bool selected : layer_mask) {
    if (!selected) {
      continue;
    }
    const EntropyMaps maps = compute_entropy_maps(camera, lidar, config);
    for (Eigen::Index i = 0; i < camera.rows(); ++i) {
      camera.row(i).array() += epsilon * maps.weights[static_cast<std::size_t>(i)].camera;
      lidar.row(i).array() += epsilon * maps.weights[static_cast<std::size_t>(i)].lidar;
    }
  }
}

}  // namespace gocc::smoothing

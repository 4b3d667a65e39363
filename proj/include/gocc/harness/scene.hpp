#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gocc/core/grid.hpp"
#include "gocc/lifting/camera.hpp"
#include "gocc/lifting/ldfa.hpp"

namespace gocc::harness {

struct SceneConfig {
  GridSpec grid;
  int semantic_classes = 17;
  int blob_count_min = 3;
  int blob_count_max = 16;
  double blob_scale_min = 0.05;  // fraction of the smallest box extent
  double blob_scale_max = 0.15;
  double truth_radius_sigmas = 2.0;  // blob support for the truth labels
  int noise_channels = 8;
  double feature_noise_sigma = 0.05;
  int depth_levels = 8;
  int camera_count = 6;
  int image_width = 64;
  int image_height = 32;
  double horizontal_fov_degrees = 70.0;

  int feature_channels() const { return semantic_classes + noise_channels; }
  void validate() const;
};

struct Blob {
  Vec3 center = Vec3::Zero();
  Vec3 scale = Vec3::Ones();
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();
  int class_id = 0;
};

struct SyntheticScene {
  std::uint64_t seed = 0;
  SceneConfig config;
  std::vector<Blob> blobs;
  SemanticOccupancyGrid truth;
  lifting::DepthPlaneStack lidar;
  lifting::MultiViewFeatureSet cameras;
};

// Blob placement, truth grid, LiDAR strata and camera planes, all derived
// from (config, seed). Feature planes carry C_sem soft class-signature
// channels followed by noise channels.
SyntheticScene generate_scene(const SceneConfig& config, std::uint64_t seed);

// Truth labels: a voxel takes the class of the blob with the smallest
// Mahalanobis distance among those within `radius`; empty otherwise.
SemanticOccupancyGrid truth_grid(const std::vector<Blob>& blobs, const GridSpec& spec,
                                 int semantic_classes, double radius);

// Ring of cameras at the box centre, evenly spaced in yaw, optical axes level.
std::vector<lifting::CameraView> camera_rig(const SceneConfig& config);

// Digest over blobs, truth labels and every feature plane.
std::string scene_digest(const SyntheticScene& scene);

}  // namespace gocc::harness

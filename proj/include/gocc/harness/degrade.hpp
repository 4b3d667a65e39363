#pragma once

#include <cstdint>
#include <string_view>

#include "gocc/harness/scene.hpp"

namespace gocc::harness {

enum class DegradationMode { none, rain, night };

std::string_view to_string(DegradationMode mode);
DegradationMode parse_degradation_mode(std::string_view text);

struct DegradationConfig {
  DegradationMode mode = DegradationMode::none;
  double camera_noise_sigma = 0.0;
  double camera_dropout_fraction = 0.0;
  double lidar_noise_sigma = 0.0;
  double lidar_dropout_fraction = 0.0;
  double night_attenuation = 1.0;             // camera gain lost outside the headlight cone
  double headlight_half_angle_degrees = 30.0; // cone around world +x
  std::uint64_t seed = 0;

  void validate() const;
};

// rain: camera texels get noise with sigma * (1 + |v|) and are dropped with the
// dropout fraction; LiDAR texels get multiplicative speckle and dropout.
// night: camera texels whose ray leaves the headlight cone are scaled by
// (1 - attenuation), then read noise is added; LiDAR is left alone.
// The truth grid is never touched.
SyntheticScene degrade(const SyntheticScene& scene, const DegradationConfig& config);

// Whether a camera texel's viewing ray lies inside the headlight cone.
bool inside_headlight_cone(const lifting::CameraView& view, int row, int col, double half_angle_degrees);

}  // namespace gocc::harness

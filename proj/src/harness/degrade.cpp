#include "gocc/harness/degrade.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gocc/core/error.hpp"
#include "gocc/core/rng.hpp"

namespace gocc::harness {

std::string_view to_string(DegradationMode mode) {
  switch (mode) {
    case DegradationMode::none: return "none";
    case DegradationMode::rain: return "rain";
    case DegradationMode::night: return "night";
  }
  return "none";
}

DegradationMode parse_degradation_mode(std::string_view text) {
  if (text == "none") return DegradationMode::none;
  if (text == "rain") return DegradationMode::rain;
  if (text == "night") return DegradationMode::night;
  throw ValidationError("degradation", "unknown degradation mode '" + std::string(text) + "'");
}

void DegradationConfig::validate() const {
  auto fraction = [](double v, const char* field) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ValidationError(field, std::string(field) + " must lie in [0, 1]");
    }
  };
  auto sigma = [](double v, const char* field) {
    if (!(v >= 0.0)) {
      throw ValidationError(field, std::string(field) + " must be non-negative");
    }
  };
  sigma(camera_noise_sigma, "camera_noise_sigma");
  sigma(lidar_noise_sigma, "lidar_noise_sigma");
  fraction(camera_dropout_fraction, "camera_dropout_fraction");
  fraction(lidar_dropout_fraction, "lidar_dropout_fraction");
  fraction(night_attenuation, "night_attenuation");
  if (!(headlight_half_angle_degrees >= 0.0 && headlight_half_angle_degrees <= 180.0)) {
    throw ValidationError("headlight_half_angle_degrees", "headlight half angle must lie in [0, 180]");
  }
}

bool inside_headlight_cone(const lifting::CameraView& view, int row, int col, double half_angle_degrees) {
  const Mat3 r = view.extrinsics.topLeftCorner<3, 3>();
  const Vec3 dir = (r.transpose() * (view.intrinsics.inverse() * Vec3(col, row, 1.0))).normalized();
  return dir.x() >= std::cos(half_angle_degrees * std::numbers::pi / 180.0);
}

SyntheticScene degrade(const SyntheticScene& scene, const DegradationConfig& config) {
  config.validate();
  SyntheticScene out = scene;
  if (config.mode == DegradationMode::none) {
    return out;
  }
  for (std::size_t k = 0; k < out.cameras.views.size(); ++k) {
    auto& view = out.cameras.views[k];
    CounterRng rng(config.seed, "degrade-camera-" + std::to_string(k));
    for (int row = 0; row < view.plane.height; ++row) {
      for (int col = 0; col < view.plane.width; ++col) {
        auto texel = view.plane.texel(row, col);
        if (config.mode == DegradationMode::rain) {
          const bool drop = rng.uniform() < config.camera_dropout_fraction;
          for (float& v : texel) {
            const double noisy = v + config.camera_noise_sigma * (1.0 + std::abs(v)) * rng.normal();
            v = drop ? 0.0f : static_cast<float>(noisy);
          }
        } else {
          const double gain =
              inside_headlight_cone(view, row, col, config.headlight_half_angle_degrees) ? 1.0 : 1.0 - config.night_attenuation;
          for (float& v : texel) {
            v = static_cast<float>(gain * v + config.camera_noise_sigma * rng.normal());
          }
        }
      }
    }
  }
  if (config.mode == DegradationMode::rain) {
    for (std::size_t d = 0; d < out.lidar.planes.size(); ++d) {
      auto& plane = out.lidar.planes[d];
      CounterRng rng(config.seed, "degrade-lidar-" + std::to_string(d));
      const std::size_t texels = static_cast<std::size_t>(plane.height) * plane.width;
      for (std::size_t t = 0; t < texels; ++t) {
        const bool drop = rng.uniform() < config.lidar_dropout_fraction;
        float* v = plane.values.data() + t * static_cast<std::size_t>(plane.channels);
        for (int c = 0; c < plane.channels; ++c) {
          const double speckled = v[c] * (1.0 + config.lidar_noise_sigma * rng.normal());
          v[c] = drop ? 0.0f : static_cast<float>(speckled);
        }
      }
    }
  }
  return out;
}

}  // namespace gocc::harness

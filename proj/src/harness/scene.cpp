#include "gocc/harness/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gocc/core/bytes.hpp"
#include "gocc/core/error.hpp"
#include "gocc/core/gaussian.hpp"
#include "gocc/core/rng.hpp"

namespace gocc::harness {
namespace {

struct BlobShape {
  Vec3 center;
  Mat3 precision;
  int class_id;
};

std::vector<BlobShape> shapes_of(const std::vector<Blob>& blobs) {
  std::vector<BlobShape> out;
  out.reserve(blobs.size());
  for (const auto& b : blobs) {
    const Mat3 cov = make_covariance(b.scale, b.rotation);
    out.push_back({b.center, cov.inverse(), b.class_id});
  }
  return out;
}

double mahalanobis2(const BlobShape& s, const Vec3& x) {
  const Vec3 d = x - s.center;
  return d.dot(s.precision * d);
}

// Channels [0, C) get the soft signature, the rest unit-free noise.
void fill_texel(std::span<float> texel, const std::vector<BlobShape>& shapes, const Vec3& x,
                int classes, double sigma, CounterRng& rng) {
  std::vector<double> sig(static_cast<std::size_t>(classes), 0.0);
  for (const auto& s : shapes) {
    sig[static_cast<std::size_t>(s.class_id)] += std::exp(-0.5 * mahalanobis2(s, x));
  }
  for (std::size_t c = 0; c < texel.size(); ++c) {
    const double base = c < sig.size() ? std::min(1.0, sig[c]) : 0.0;
    texel[c] = static_cast<float>(base + sigma * rng.normal());
  }
}

// Closest approach of a ray to a blob in whitened space: the smallest squared
// Mahalanobis distance along the ray (t >= 0) and where it happens.
std::pair<double, double> closest_approach(const BlobShape& s, const Vec3& origin, const Vec3& dir) {
  const Vec3 d = origin - s.center;
  const double a = dir.dot(s.precision * dir);
  const double b = dir.dot(s.precision * d);
  const double t = std::max(0.0, -b / a);
  const Vec3 p = d + t * dir;
  return {p.dot(s.precision * p), t};
}

}  // namespace

void SceneConfig::validate() const {
  grid.validate();
  if (blob_count_min < 1 || blob_count_max < 1) {
    throw Error(ErrorCode::configuration, "a scene needs at least one blob");
  }
  if (blob_count_min > blob_count_max || blob_count_max > 64) {
    throw Error(ErrorCode::configuration, "blob count bounds must satisfy 1 <= min <= max <= 64");
  }
  if (semantic_classes < 1 || semantic_classes > 254) {
    throw Error(ErrorCode::configuration, "semantic class count out of range");
  }
  if (!(blob_scale_min > 0.0) || blob_scale_max < blob_scale_min) {
    throw Error(ErrorCode::configuration, "blob scale bounds must be positive and ordered");
  }
  if (!(truth_radius_sigmas > 0.0) || noise_channels < 0 || !(feature_noise_sigma >= 0.0)) {
    throw Error(ErrorCode::configuration, "invalid truth radius or noise settings");
  }
  if (depth_levels < 1 || camera_count < 0 || image_width < 2 || image_height < 2) {
    throw Error(ErrorCode::configuration, "invalid sensor layout");
  }
  if (!(horizontal_fov_degrees > 0.0 && horizontal_fov_degrees < 180.0)) {
    throw Error(ErrorCode::configuration, "camera field of view must lie in (0, 180) degrees");
  }
}

SemanticOccupancyGrid truth_grid(const std::vector<Blob>& blobs, const GridSpec& spec,
                                 int semantic_classes, double radius) {
  auto grid = SemanticOccupancyGrid::filled_empty(spec, semantic_classes + 1);
  std::vector<double> best(spec.voxel_count(), std::numeric_limits<double>::infinity());
  const double r2 = radius * radius;
  const auto shapes = shapes_of(blobs);
  for (std::size_t j = 0; j < blobs.size(); ++j) {
    const Mat3 cov = make_covariance(blobs[j].scale, blobs[j].rotation);
    int lo[3];
    int hi[3];
    for (int a = 0; a < 3; ++a) {
      const double half = radius * std::sqrt(cov(a, a));
      lo[a] = std::max(0, static_cast<int>(std::floor((blobs[j].center[a] - half - spec.origin[a]) / spec.voxel_size[a])));
      hi[a] = std::min(spec.dims[a] - 1,
                       static_cast<int>(std::floor((blobs[j].center[a] + half - spec.origin[a]) / spec.voxel_size[a])));
    }
    for (int z = lo[2]; z <= hi[2]; ++z) {
      for (int y = lo[1]; y <= hi[1]; ++y) {
        for (int x = lo[0]; x <= hi[0]; ++x) {
          const VoxelIndex idx{x, y, z};
          const double q = mahalanobis2(shapes[j], voxel_center(spec, idx));
          const std::size_t v = spec.linear_index(idx);
          if (q <= r2 && q < best[v]) {
            best[v] = q;
            grid.labels[v] = static_cast<std::uint8_t>(blobs[j].class_id);
          }
        }
      }
    }
  }
  return grid;
}

std::vector<lifting::CameraView> camera_rig(const SceneConfig& config) {
  std::vector<lifting::CameraView> views;
  const Vec3 center = 0.5 * (config.grid.box_min() + config.grid.box_max());
  const double w = config.image_width;
  const double h = config.image_height;
  const double focal = 0.5 * (w - 1) / std::tan(0.5 * config.horizontal_fov_degrees * std::numbers::pi / 180.0);
  for (int k = 0; k < config.camera_count; ++k) {
    const double yaw = 2.0 * std::numbers::pi * k / config.camera_count;
    const Vec3 forward(std::cos(yaw), std::sin(yaw), 0.0);
    const Vec3 right(std::sin(yaw), -std::cos(yaw), 0.0);
    const Vec3 down(0.0, 0.0, -1.0);
    Mat3 r;
    r.row(0) = right.transpose();
    r.row(1) = down.transpose();
    r.row(2) = forward.transpose();
    lifting::CameraView view;
    view.intrinsics << focal, 0.0, 0.5 * (w - 1), 0.0, focal, 0.5 * (h - 1), 0.0, 0.0, 1.0;
    view.extrinsics.topLeftCorner<3, 3>() = r;
    view.extrinsics.topRightCorner<3, 1>() = -r * center;
    view.plane = lifting::FeaturePlane(config.image_height, config.image_width, config.feature_channels());
    views.push_back(std::move(view));
  }
  return views;
}

SyntheticScene generate_scene(const SceneConfig& config, std::uint64_t seed) {
  config.validate();
  SyntheticScene scene;
  scene.seed = seed;
  scene.config = config;
  const GridSpec& spec = config.grid;
  const Vec3 lo = spec.box_min();
  const Vec3 extent = spec.extent();
  const double scale_unit = extent.minCoeff();

  CounterRng rng(seed, "scene-blobs");
  const int count = config.blob_count_min +
                    static_cast<int>(rng.below(static_cast<std::uint64_t>(config.blob_count_max - config.blob_count_min + 1)));
  for (int j = 0; j < count; ++j) {
    Blob b;
    for (int a = 0; a < 3; ++a) {
      b.center[a] = lo[a] + extent[a] * rng.uniform();
      b.scale[a] = scale_unit * rng.uniform(config.blob_scale_min, config.blob_scale_max);
    }
    Eigen::Quaterniond q(rng.normal(), rng.normal(), rng.normal(), rng.normal());
    b.rotation = q.norm() > 0.0 ? q.normalized() : Eigen::Quaterniond::Identity();
    b.class_id = static_cast<int>(rng.below(static_cast<std::uint64_t>(config.semantic_classes)));
    scene.blobs.push_back(b);
  }
  scene.truth = truth_grid(scene.blobs, spec, config.semantic_classes, config.truth_radius_sigmas);

  const auto shapes = shapes_of(scene.blobs);
  const int channels = config.feature_channels();

  auto& stack = scene.lidar;
  stack.xy_origin = spec.origin.head<2>();
  stack.cell_size = spec.voxel_size.head<2>();
  const double z0 = spec.origin.z();
  const double dz = extent.z() / config.depth_levels;
  for (int d = 0; d <= config.depth_levels; ++d) {
    stack.z_edges.push_back(z0 + d * dz);
  }
  for (int d = 0; d < config.depth_levels; ++d) {
    lifting::FeaturePlane plane(spec.dims[1], spec.dims[0], channels);
    CounterRng noise(seed, "scene-lidar-" + std::to_string(d));
    const double z = z0 + (d + 0.5) * dz;
    for (int row = 0; row < plane.height; ++row) {
      for (int col = 0; col < plane.width; ++col) {
        const Vec3 x(stack.xy_origin.x() + (col + 0.5) * stack.cell_size.x(),
                     stack.xy_origin.y() + (row + 0.5) * stack.cell_size.y(), z);
        fill_texel(plane.texel(row, col), shapes, x, config.semantic_classes, config.feature_noise_sigma, noise);
      }
    }
    stack.planes.push_back(std::move(plane));
  }

  scene.cameras.views = camera_rig(config);
  for (std::size_t k = 0; k < scene.cameras.views.size(); ++k) {
    auto& view = scene.cameras.views[k];
    CounterRng noise(seed, "scene-camera-" + std::to_string(k));
    const Mat3 r = view.extrinsics.topLeftCorner<3, 3>();
    const Vec3 origin = -r.transpose() * view.extrinsics.topRightCorner<3, 1>();
    const Mat3 k_inv = view.intrinsics.inverse();
    for (int row = 0; row < view.plane.height; ++row) {
      for (int col = 0; col < view.plane.width; ++col) {
        const Vec3 dir = (r.transpose() * (k_inv * Vec3(col, row, 1.0))).normalized();
        // Nearest blob whose support the ray enters; its signature strength
        // falls off with the closest-approach distance.
        double best_t = std::numeric_limits<double>::infinity();
        double strength = 0.0;
        int cls = -1;
        for (const auto& s : shapes) {
          const auto [q, t] = closest_approach(s, origin, dir);
          if (q <= config.truth_radius_sigmas * config.truth_radius_sigmas && t < best_t) {
            best_t = t;
            strength = std::exp(-0.5 * q);
            cls = s.class_id;
          }
        }
        auto texel = view.plane.texel(row, col);
        for (int c = 0; c < channels; ++c) {
          const double base = c == cls ? strength : 0.0;
          texel[static_cast<std::size_t>(c)] = static_cast<float>(base + config.feature_noise_sigma * noise.normal());
        }
      }
    }
  }
  return scene;
}

std::string scene_digest(const SyntheticScene& scene) {
  ByteWriter w;
  w.u64(scene.seed);
  w.u32(static_cast<std::uint32_t>(scene.blobs.size()));
  for (const auto& b : scene.blobs) {
    for (int a = 0; a < 3; ++a) {
      w.bytes(&b.center[a], sizeof(double));
      w.bytes(&b.scale[a], sizeof(double));
    }
    w.bytes(b.rotation.coeffs().data(), 4 * sizeof(double));
    w.u32(static_cast<std::uint32_t>(b.class_id));
  }
  w.bytes(scene.truth.labels.data(), scene.truth.labels.size());
  for (const auto& p : scene.lidar.planes) {
    w.bytes(p.values.data(), p.values.size() * sizeof(float));
  }
  for (const auto& v : scene.cameras.views) {
    w.bytes(v.plane.values.data(), v.plane.values.size() * sizeof(float));
  }
  return hex_digest(w.buffer());
}

}  // namespace gocc::harness

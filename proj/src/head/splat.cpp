#include "gocc/head/splat.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "gocc/core/error.hpp"
#include "gocc/core/parallel.hpp"

namespace gocc::head {
namespace {

struct IndexRange {
  int lo = 0;
  int hi = -1;  // inclusive
};

// Voxels whose centres fall in [c - h, c + h] along one axis.
IndexRange axis_range(double center, double half, double origin, double size, int dim) {
  const double lo = std::ceil((center - half - origin) / size - 0.5);
  const double hi = std::floor((center + half - origin) / size - 0.5);
  IndexRange r;
  r.lo = static_cast<int>(std::max(0.0, lo));
  r.hi = static_cast<int>(std::min(static_cast<double>(dim - 1), hi));
  return r;
}

}  // namespace

std::vector<SplatPrimitive> prepare_primitives(const std::vector<GaussianPrimitive>& primitives,
                                               int semantic_classes) {
  std::vector<SplatPrimitive> out(primitives.size());
  for (std::size_t i = 0; i < primitives.size(); ++i) {
    const auto& g = primitives[i];
    const Vec3 s = g.scale();
    if (!(s.minCoeff() >= kMinSplatScale) || !s.allFinite()) {
      throw Error(ErrorCode::degenerate_covariance,
                  "primitive " + std::to_string(i) + " has a scale below 1e-6 m");
    }
    if (g.semantic_logits.size() != semantic_classes) {
      throw Error(ErrorCode::shape, "primitive " + std::to_string(i) + " has " +
                                        std::to_string(g.semantic_logits.size()) +
                                        " semantic logits, expected " + std::to_string(semantic_classes));
    }
    check_unit_rotation(g.rotation);
    const Mat3 r = g.rotation.toRotationMatrix();
    auto& p = out[i];
    p.mean = g.centroid;
    p.covariance = make_covariance(s, g.rotation);
    p.precision = r * s.array().square().inverse().matrix().asDiagonal() * r.transpose();
    p.precision = 0.5 * (p.precision + p.precision.transpose()).eval();
    p.opacity = g.opacity();
    p.class_probs = softmax(g.semantic_logits);
  }
  return out;
}

void assign_labels(SemanticOccupancyGrid& grid, double occupancy_threshold) {
  const int c = grid.semantic_count();
  const auto empty = static_cast<std::uint8_t>(grid.empty_id());
  for (std::size_t v = 0; v < grid.labels.size(); ++v) {
    if (grid.density[v] >= occupancy_threshold) {
      const double* mass = grid.scores.data() + v * c;
      grid.labels[v] = static_cast<std::uint8_t>(std::max_element(mass, mass + c) - mass);
    } else {
      grid.labels[v] = empty;
    }
  }
}

SemanticOccupancyGrid splat_to_grid(const std::vector<GaussianPrimitive>& primitives,
                                    const GridSpec& spec, int semantic_classes,
                                    const SplatOptions& options) {
  spec.validate();
  if (!(options.truncation_sigmas >= 1.0)) {
    throw Error(ErrorCode::configuration, "truncation radius must be at least 1 sigma");
  }
  if (options.tile < 1) {
    throw Error(ErrorCode::configuration, "splat tile edge must be positive");
  }
  const auto prims = prepare_primitives(primitives, semantic_classes);
  auto grid = SemanticOccupancyGrid::filled_empty(spec, semantic_classes + 1);
  grid.density.assign(spec.voxel_count(), 0.0);
  grid.scores.assign(spec.voxel_count() * static_cast<std::size_t>(semantic_classes), 0.0);

  const double r = options.truncation_sigmas;
  const double r2 = r * r;
  const int tile = options.tile;
  const int tiles_x = (spec.dims[0] + tile - 1) / tile;
  const int tiles_y = (spec.dims[1] + tile - 1) / tile;

  // Voxel-index boxes per Gaussian, then per-tile lists in ascending index.
  std::vector<std::array<IndexRange, 3>> boxes(prims.size());
  std::vector<std::vector<std::uint32_t>> bins(static_cast<std::size_t>(tiles_x) * tiles_y);
  for (std::size_t i = 0; i < prims.size(); ++i) {
    auto& box = boxes[i];
    for (int a = 0; a < 3; ++a) {
      const double half = r * std::sqrt(prims[i].covariance(a, a));
      box[a] = axis_range(prims[i].mean[a], half, spec.origin[a], spec.voxel_size[a], spec.dims[a]);
    }
    if (box[0].lo > box[0].hi || box[1].lo > box[1].hi || box[2].lo > box[2].hi) {
      continue;
    }
    for (int ty = box[1].lo / tile; ty <= box[1].hi / tile; ++ty) {
      for (int tx = box[0].lo / tile; tx <= box[0].hi / tile; ++tx) {
        bins[static_cast<std::size_t>(ty) * tiles_x + tx].push_back(static_cast<std::uint32_t>(i));
      }
    }
  }

  const int nx = spec.dims[0];
  const int ny = spec.dims[1];
  const auto c = static_cast<std::size_t>(semantic_classes);
  parallel_for(bins.size(), 1, [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      const int tx = static_cast<int>(t % tiles_x);
      const int ty = static_cast<int>(t / tiles_x);
      const int x0 = tx * tile;
      const int x1 = std::min(nx, x0 + tile) - 1;
      const int y0 = ty * tile;
      const int y1 = std::min(ny, y0 + tile) - 1;
      for (std::uint32_t gi : bins[t]) {
        const auto& g = prims[gi];
        const auto& box = boxes[gi];
        const Mat3& P = g.precision;
        const double* probs = g.class_probs.data();
        for (int z = box[2].lo; z <= box[2].hi; ++z) {
          const double dz = spec.origin.z() + (z + 0.5) * spec.voxel_size.z() - g.mean.z();
          for (int y = std::max(y0, box[1].lo); y <= std::min(y1, box[1].hi); ++y) {
            const double dy = spec.origin.y() + (y + 0.5) * spec.voxel_size.y() - g.mean.y();
            // q(dx) = P00 dx^2 + 2 dx (P01 dy + P02 dz) + rest
            const double lin = P(0, 1) * dy + P(0, 2) * dz;
            const double rest = P(1, 1) * dy * dy + 2.0 * P(1, 2) * dy * dz + P(2, 2) * dz * dz;
            const std::size_t row = static_cast<std::size_t>(nx) * (y + static_cast<std::size_t>(ny) * z);
            for (int x = std::max(x0, box[0].lo); x <= std::min(x1, box[0].hi); ++x) {
              const double dx = spec.origin.x() + (x + 0.5) * spec.voxel_size.x() - g.mean.x();
              const double q = P(0, 0) * dx * dx + 2.0 * dx * lin + rest;
              if (q > r2) {
                continue;
              }
              const double w = g.opacity * std::exp(-0.5 * q);
              const std::size_t v = row + x;
              grid.density[v] += w;
              double* mass = grid.scores.data() + v * c;
              for (std::size_t k = 0; k < c; ++k) {
                mass[k] += w * probs[k];
              }
            }
          }
        }
      }
    }
  });
  assign_labels(grid, options.occupancy_threshold);
  return grid;
}

}  // namespace gocc::head

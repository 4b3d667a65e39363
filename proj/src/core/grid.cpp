#include "gocc/core/grid.hpp"

#include <cmath>
#include <string>

#include "gocc/core/error.hpp"

namespace gocc {

void GridSpec::validate() const {
  for (int axis = 0; axis < 3; ++axis) {
    if (!(voxel_size[axis] > 0.0) || !std::isfinite(voxel_size[axis])) {
      throw Error(ErrorCode::configuration, "voxel size must be positive on every axis");
    }
    if (dims[axis] < 1) {
      throw Error(ErrorCode::configuration, "grid dims must be at least 1 on every axis");
    }
    if (!std::isfinite(origin[axis])) {
      throw Error(ErrorCode::configuration, "grid origin must be finite");
    }
  }
}

bool GridSpec::contains(const VoxelIndex& index) const {
  for (int axis = 0; axis < 3; ++axis) {
    if (index[axis] < 0 || index[axis] >= dims[axis]) {
      return false;
    }
  }
  return true;
}

VoxelIndex GridSpec::unravel(std::size_t linear) const {
  const auto nx = static_cast<std::size_t>(dims[0]);
  const auto ny = static_cast<std::size_t>(dims[1]);
  return {static_cast<int>(linear % nx), static_cast<int>((linear / nx) % ny),
          static_cast<int>(linear / (nx * ny))};
}

Vec3 GridSpec::box_max() const {
  return origin + Vec3(dims[0], dims[1], dims[2]).cwiseProduct(voxel_size);
}

Vec3 voxel_center(const GridSpec& spec, const VoxelIndex& index) {
  if (!spec.contains(index)) {
    throw Error(ErrorCode::index, "voxel (" + std::to_string(index[0]) + ", " +
                                      std::to_string(index[1]) + ", " + std::to_string(index[2]) +
                                      ") outside grid");
  }
  return spec.origin +
         (Vec3(index[0], index[1], index[2]) + Vec3::Constant(0.5)).cwiseProduct(spec.voxel_size);
}

bool same_layout(const GridSpec& a, const GridSpec& b) {
  if (a.dims != b.dims) {
    return false;
  }
  for (int axis = 0; axis < 3; ++axis) {
    if (static_cast<float>(a.origin[axis]) != static_cast<float>(b.origin[axis]) ||
        static_cast<float>(a.voxel_size[axis]) != static_cast<float>(b.voxel_size[axis])) {
      return false;
    }
  }
  return true;
}

SemanticOccupancyGrid SemanticOccupancyGrid::filled_empty(const GridSpec& spec, int class_count) {
  spec.validate();
  if (class_count < 2 || class_count > 256) {
    throw Error(ErrorCode::configuration, "class count must be in [2, 256]");
  }
  SemanticOccupancyGrid grid;
  grid.spec = spec;
  grid.class_count = class_count;
  grid.labels.assign(spec.voxel_count(), static_cast<std::uint8_t>(class_count - 1));
  return grid;
}

void SemanticOccupancyGrid::validate() const {
  spec.validate();
  if (class_count < 2 || class_count > 256) {
    throw Error(ErrorCode::configuration, "class count must be in [2, 256]");
  }
  const std::size_t n = spec.voxel_count();
  if (labels.size() != n) {
    throw Error(ErrorCode::shape, "label array does not match grid dims");
  }
  for (const auto label : labels) {
    if (label >= class_count) {
      throw Error(ErrorCode::label, "label " + std::to_string(label) + " >= class count");
    }
  }
  if (!density.empty() && density.size() != n) {
    throw Error(ErrorCode::shape, "density array does not match grid dims");
  }
  if (!scores.empty() && scores.size() != n * static_cast<std::size_t>(semantic_count())) {
    throw Error(ErrorCode::shape, "score array does not match grid dims");
  }
}

RowMatX class_probabilities(const SemanticOccupancyGrid& grid) {
  if (!grid.has_scores() || grid.density.size() != grid.spec.voxel_count()) {
    throw Error(ErrorCode::shape, "grid carries no splat scores");
  }
  const std::size_t n = grid.spec.voxel_count();
  const int sem = grid.semantic_count();
  RowMatX probs(static_cast<Eigen::Index>(n), grid.class_count);
  for (std::size_t v = 0; v < n; ++v) {
    const double rho = grid.density[v];
    const double empty = std::exp(-rho);
    const auto row = static_cast<Eigen::Index>(v);
    probs(row, sem) = empty;
    const double occupied = -std::expm1(-rho);
    const double* mass = grid.scores.data() + v * static_cast<std::size_t>(sem);
    for (int c = 0; c < sem; ++c) {
      probs(row, c) = rho > 0.0 ? occupied * mass[c] / rho : 0.0;
    }
  }
  return probs;
}

}  // namespace gocc

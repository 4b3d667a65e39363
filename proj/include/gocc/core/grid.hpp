#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "gocc/core/math.hpp"

namespace gocc {

using VoxelIndex = std::array<int, 3>;

// Axis-aligned voxel lattice. Voxel (i, j, k) covers
// origin + [i, i+1) * voxel_size on each axis.
struct GridSpec {
  Vec3 origin = Vec3::Zero();
  Vec3 voxel_size = Vec3::Ones();
  VoxelIndex dims{1, 1, 1};

  void validate() const;

  std::size_t voxel_count() const {
    return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  }
  bool contains(const VoxelIndex& index) const;
  // x fastest, then y, then z.
  std::size_t linear_index(const VoxelIndex& index) const {
    return static_cast<std::size_t>(index[0]) +
           static_cast<std::size_t>(dims[0]) *
               (static_cast<std::size_t>(index[1]) + static_cast<std::size_t>(dims[1]) * index[2]);
  }
  VoxelIndex unravel(std::size_t linear) const;

  Vec3 box_min() const { return origin; }
  Vec3 box_max() const;
  Vec3 extent() const { return box_max() - box_min(); }
};

// Center of a voxel; throws an index error outside the lattice.
Vec3 voxel_center(const GridSpec& spec, const VoxelIndex& index);

// Layout equality as stored on disk: identical dims, origin and voxel size
// equal after rounding to 32-bit floats.
bool same_layout(const GridSpec& a, const GridSpec& b);

// Dense semantic occupancy. Labels are class ids in [0, class_count); the last
// id is the empty class. When produced by splatting, `density` holds the total
// Gaussian density per voxel and `scores` the per-semantic-class mass
// (class_count - 1 values per voxel, voxel-major).
struct SemanticOccupancyGrid {
  GridSpec spec;
  int class_count = 18;
  std::vector<std::uint8_t> labels;
  std::vector<double> density;
  std::vector<double> scores;

  static SemanticOccupancyGrid filled_empty(const GridSpec& spec, int class_count);

  int empty_id() const { return class_count - 1; }
  int semantic_count() const { return class_count - 1; }
  bool has_scores() const { return !scores.empty(); }

  std::uint8_t& at(const VoxelIndex& index) { return labels[spec.linear_index(index)]; }
  std::uint8_t at(const VoxelIndex& index) const { return labels[spec.linear_index(index)]; }

  // Checks label range and array sizes.
  void validate() const;
};

// Per-voxel class probabilities (voxel count x class_count, row-major) from
// splat scores: the empty class gets exp(-density), semantic class c gets
// (1 - exp(-density)) * mass_c / density.
RowMatX class_probabilities(const SemanticOccupancyGrid& grid);

}  // namespace gocc

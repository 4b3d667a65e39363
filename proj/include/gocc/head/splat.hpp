#pragma once

#include <vector>

#include "gocc/core/gaussian.hpp"
#include "gocc/core/grid.hpp"

namespace gocc::head {

inline constexpr double kMinSplatScale = 1e-6;

struct SplatOptions {
  double truncation_sigmas = 3.0;     // Mahalanobis cut-off, >= 1
  double occupancy_threshold = 0.1;   // total density needed to leave the empty class
  int tile = 16;                      // XY tile edge in voxels
};

// Dense per-Gaussian quantities shared by the splat and its oracle.
struct SplatPrimitive {
  Vec3 mean;
  Mat3 precision;   // inverse covariance
  Mat3 covariance;
  double opacity = 0.0;
  VecX class_probs;  // softmax of the semantic logits
};

// Throws degenerate-covariance naming the primitive when any scale axis is
// below kMinSplatScale.
std::vector<SplatPrimitive> prepare_primitives(const std::vector<GaussianPrimitive>& primitives,
                                               int semantic_classes);

// Per voxel: density = sum_i p_i exp(-q_i/2) over Gaussians with q_i <= r^2,
// class mass = sum_i of the same term times softmax(c_i). Each voxel sums its
// Gaussians in ascending index order.
SemanticOccupancyGrid splat_to_grid(const std::vector<GaussianPrimitive>& primitives,
                                    const GridSpec& spec, int semantic_classes,
                                    const SplatOptions& options = {});

// Labels from density and class mass already stored on the grid.
void assign_labels(SemanticOccupancyGrid& grid, double occupancy_threshold);

}  // namespace gocc::head

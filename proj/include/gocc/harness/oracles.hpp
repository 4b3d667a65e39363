#pragma once

#include <vector>

#include "gocc/core/gaussian.hpp"
#include "gocc/core/grid.hpp"
#include "gocc/head/ssm.hpp"

namespace gocc::harness {

// Every Gaussian at every voxel, no truncation, covariance solved by
// Cholesky. Labels use the same occupancy threshold rule as the splat.
SemanticOccupancyGrid oracle_dense_splat(const std::vector<GaussianPrimitive>& primitives,
                                         const GridSpec& spec, int semantic_classes,
                                         double occupancy_threshold = 0.1);

// Token-by-token recurrence with the projections recomputed by plain loops
// and B_bar taken from expm1.
RowMatX oracle_sequential_scan(const RowMatX& tokens, const head::SsmWeights& weights);

}  // namespace gocc::harness

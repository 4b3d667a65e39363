#pragma once

#include <array>
#include <vector>

#include "gocc/core/math.hpp"
#include "gocc/head/unet.hpp"

namespace gocc::head {

// Psi_p maps a refined plane feature to offsets along the plane's two axes:
// (x, y) for xy, (x, z) for xz, (y, z) for yz.
using ConsensusWeights = std::array<Linear, 3>;

// Per-anchor offsets, N x 2, one matrix per plane.
std::array<RowMatX, 3> plane_offsets(const std::array<RowMatX, 3>& refined, const ConsensusWeights& w);

// mu + 0.5 * (sum of the two plane predictions covering each axis).
std::vector<Vec3> consensus_from_offsets(const std::vector<Vec3>& centroids,
                                         const std::array<RowMatX, 3>& offsets);

// Features must already be back in anchor order.
std::vector<Vec3> consensus_update(const std::vector<Vec3>& centroids,
                                   const std::array<RowMatX, 3>& refined, const ConsensusWeights& w);

}  // namespace gocc::head

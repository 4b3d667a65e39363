#include "gocc/head/consensus.hpp"

#include "gocc/core/dense.hpp"
#include "gocc/core/error.hpp"

namespace gocc::head {

std::array<RowMatX, 3> plane_offsets(const std::array<RowMatX, 3>& refined, const ConsensusWeights& w) {
  std::array<RowMatX, 3> out;
  for (std::size_t p = 0; p < 3; ++p) {
    out[p] = linear_rows(refined[p], w[p].weight, w[p].bias);
  }
  return out;
}

std::vector<Vec3> consensus_from_offsets(const std::vector<Vec3>& centroids,
                                         const std::array<RowMatX, 3>& offsets) {
  for (const auto& o : offsets) {
    if (o.rows() != static_cast<Eigen::Index>(centroids.size()) || o.cols() != 2) {
      throw Error(ErrorCode::shape, "consensus offsets must be N x 2 per plane");
    }
  }
  const RowMatX& xy = offsets[0];
  const RowMatX& xz = offsets[1];
  const RowMatX& yz = offsets[2];
  std::vector<Vec3> out(centroids.size());
  for (std::size_t i = 0; i < centroids.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const Vec3 delta(xy(r, 0) + xz(r, 0), xy(r, 1) + yz(r, 0), xz(r, 1) + yz(r, 1));
    out[i] = centroids[i] + 0.5 * delta;
  }
  return out;
}

std::vector<Vec3> consensus_update(const std::vector<Vec3>& centroids,
                                   const std::array<RowMatX, 3>& refined, const ConsensusWeights& w) {
  return consensus_from_offsets(centroids, plane_offsets(refined, w));
}

}  // namespace gocc::head

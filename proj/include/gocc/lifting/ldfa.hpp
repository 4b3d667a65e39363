#pragma once

#include <cstdint>
#include <vector>

#include "gocc/core/gaussian.hpp"
#include "gocc/lifting/feature_plane.hpp"

namespace gocc::lifting {

// The LiDAR volume viewed as D stacked XY feature planes. Plane d covers
// z in [z_edges[d], z_edges[d+1]); texel (row, col) is centered at
// xy_origin + ((col, row) + 0.5) * cell_size.
struct DepthPlaneStack {
  std::vector<FeaturePlane> planes;
  Vec2 xy_origin = Vec2::Zero();
  Vec2 cell_size = Vec2::Ones();
  std::vector<double> z_edges;

  int depth_levels() const { return static_cast<int>(planes.size()); }
  int channels() const { return planes.empty() ? 0 : planes.front().channels; }
  void validate() const;

  // Continuous plane coordinates of a world point; z is dropped.
  Vec2 plane_coordinates(const Vec3& point) const;

  bool operator==(const DepthPlaneStack&) const = default;
};

struct KeypointSet {
  std::vector<Vec3> offsets;     // meters, relative to the anchor centroid
  std::vector<double> weights;   // w_ik >= 0
};

struct DepthChunking {
  int chunk_count = 0;
  std::vector<int> permutation;           // pi over 0..D-1
  std::vector<std::vector<int>> chunks;   // S_1..S_K, a partition of 0..D-1
};

struct LdfaWeights {
  int keypoints = 4;
  MatX offset_weight;     // 3P x F
  VecX offset_bias;       // 3P
  MatX attention_weight;  // P x F
  VecX attention_bias;    // P
  MatX phi_weight;        // F x (K-1)F
  VecX phi_bias;          // F
  VecX gate_weight;       // 2F
  double gate_bias = 0.0;
};

// Offsets = (W f + b) reshaped to P x 3, scaled per axis by the anchor's
// scale; weights = softmax(W_a f + b_a).
KeypointSet generate_keypoints(const GaussianPrimitive& anchor, const LdfaWeights& weights);

// Row d: sum_k w_k * bilinear(plane_d, xy(centroid + offset_k)).  D x F.
MatX ldfa_depth_sample(const GaussianPrimitive& anchor, const DepthPlaneStack& stack,
                       const KeypointSet& keypoints);

// Identity permutation unless training; K chunks of floor(D/K) levels with the
// last D mod K chunks one level longer.
DepthChunking partition_depths(int depth_levels, int chunk_count, std::uint64_t seed, bool training);

// C_k = mean over d in S_k of row pi(d).  K x F.
MatX chunk_means(const MatX& depth_features, const DepthChunking& chunking);

// sigmoid(W [C_1 .. C_{K-1}] + b), the per-channel mask phi.
VecX cross_depth_mask(const MatX& chunks, const LdfaWeights& weights);

// M = phi(C_1..C_{K-1}) (.) C_K. Needs K >= 2.
VecX cross_depth_modulate(const MatX& chunks, const LdfaWeights& weights);

struct GatedFusion {
  VecX output;
  double alpha = 0.0;
};

// alpha = sigmoid(w . [M ; G] + b) with G the mean over all unpermuted depth
// rows; output = alpha M + (1 - alpha) G.
GatedFusion gated_global_fusion(const VecX& modulated, const MatX& depth_features,
                                const LdfaWeights& weights);

// The full LDFA chain for one anchor.
VecX lift_lidar(const GaussianPrimitive& anchor, const DepthPlaneStack& stack,
                const LdfaWeights& weights, const DepthChunking& chunking);

}  // namespace gocc::lifting

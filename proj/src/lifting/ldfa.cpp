#include "gocc/lifting/ldfa.hpp"

#include <numeric>
#include <string>

#include "gocc/core/error.hpp"
#include "gocc/core/rng.hpp"

namespace gocc::lifting {

void DepthPlaneStack::validate() const {
  if (planes.empty()) {
    throw Error(ErrorCode::configuration, "depth stack needs at least one plane");
  }
  const auto& first = planes.front();
  for (const auto& p : planes) {
    if (p.height != first.height || p.width != first.width || p.channels != first.channels) {
      throw Error(ErrorCode::shape, "depth planes disagree on shape");
    }
    if (p.values.size() != static_cast<std::size_t>(p.height) * p.width * p.channels) {
      throw Error(ErrorCode::shape, "depth plane payload does not match its dims");
    }
  }
  if (z_edges.size() != planes.size() + 1) {
    throw Error(ErrorCode::shape, "depth stack needs D+1 z edges");
  }
  if (!(cell_size.array() > 0.0).all()) {
    throw Error(ErrorCode::configuration, "depth stack cell size must be positive");
  }
}

Vec2 DepthPlaneStack::plane_coordinates(const Vec3& point) const {
  return (point.head<2>() - xy_origin).cwiseQuotient(cell_size) - Vec2::Constant(0.5);
}

KeypointSet generate_keypoints(const GaussianPrimitive& anchor, const LdfaWeights& weights) {
  const int p = weights.keypoints;
  const VecX raw = weights.offset_weight * anchor.feature + weights.offset_bias;
  const VecX logits = weights.attention_weight * anchor.feature + weights.attention_bias;
  const VecX w = softmax(logits);
  const Vec3 scale = anchor.scale();
  KeypointSet set;
  set.offsets.resize(p);
  set.weights.resize(p);
  for (int k = 0; k < p; ++k) {
    set.offsets[k] = raw.segment<3>(3 * k).cwiseProduct(scale);
    set.weights[k] = w[k];
  }
  return set;
}

MatX ldfa_depth_sample(const GaussianPrimitive& anchor, const DepthPlaneStack& stack,
                       const KeypointSet& keypoints) {
  const int depth = stack.depth_levels();
  const int channels = stack.channels();
  // Row-major scratch so each accumulate call writes one contiguous row.
  RowMatX rows = RowMatX::Zero(depth, channels);
  for (std::size_t k = 0; k < keypoints.offsets.size(); ++k) {
    const Vec2 uv = stack.plane_coordinates(anchor.centroid + keypoints.offsets[k]);
    for (int d = 0; d < depth; ++d) {
      accumulate_bilinear(stack.planes[d], uv, keypoints.weights[k], rows.row(d).data());
    }
  }
  return rows;
}

DepthChunking partition_depths(int depth_levels, int chunk_count, std::uint64_t seed, bool training) {
  if (depth_levels < 1 || chunk_count < 1) {
    throw Error(ErrorCode::configuration, "depth levels and chunk count must be positive");
  }
  if (chunk_count > depth_levels) {
    throw Error(ErrorCode::configuration, "chunk count " + std::to_string(chunk_count) +
                                              " exceeds depth levels " + std::to_string(depth_levels));
  }
  DepthChunking out;
  out.chunk_count = chunk_count;
  out.permutation.resize(depth_levels);
  std::iota(out.permutation.begin(), out.permutation.end(), 0);
  if (training) {
    CounterRng rng(seed, "depth-permutation");
    for (int i = depth_levels - 1; i > 0; --i) {
      const auto j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
      std::swap(out.permutation[i], out.permutation[j]);
    }
  }
  const int base = depth_levels / chunk_count;
  const int longer = depth_levels % chunk_count;
  int next = 0;
  for (int k = 0; k < chunk_count; ++k) {
    const int size = base + (k >= chunk_count - longer ? 1 : 0);
    std::vector<int> chunk(size);
    std::iota(chunk.begin(), chunk.end(), next);
    next += size;
    out.chunks.push_back(std::move(chunk));
  }
  return out;
}

MatX chunk_means(const MatX& depth_features, const DepthChunking& chunking) {
  MatX out = MatX::Zero(chunking.chunk_count, depth_features.cols());
  for (int k = 0; k < chunking.chunk_count; ++k) {
    const auto& chunk = chunking.chunks[k];
    for (const int d : chunk) {
      out.row(k) += depth_features.row(chunking.permutation[d]);
    }
    out.row(k) /= static_cast<double>(chunk.size());
  }
  return out;
}

VecX cross_depth_mask(const MatX& chunks, const LdfaWeights& weights) {
  const auto k = chunks.rows();
  const auto f = chunks.cols();
  if (k < 2) {
    throw Error(ErrorCode::configuration, "cross-depth modulation needs at least two chunks");
  }
  VecX context(f * (k - 1));
  for (Eigen::Index i = 0; i + 1 < k; ++i) {
    context.segment(i * f, f) = chunks.row(i).transpose();
  }
  VecX mask = weights.phi_weight * context + weights.phi_bias;
  for (auto& m : mask) {
    m = sigmoid(m);
  }
  return mask;
}

VecX cross_depth_modulate(const MatX& chunks, const LdfaWeights& weights) {
  const VecX mask = cross_depth_mask(chunks, weights);
  return mask.cwiseProduct(chunks.row(chunks.rows() - 1).transpose());
}

GatedFusion gated_global_fusion(const VecX& modulated, const MatX& depth_features,
                                const LdfaWeights& weights) {
  const auto f = modulated.size();
  const VecX global = depth_features.colwise().mean().transpose();
  const double logit = weights.gate_weight.head(f).dot(modulated) +
                       weights.gate_weight.tail(f).dot(global) + weights.gate_bias;
  GatedFusion out;
  out.alpha = sigmoid(logit);
  out.output = out.alpha * modulated + (1.0 - out.alpha) * global;
  return out;
}

VecX lift_lidar(const GaussianPrimitive& anchor, const DepthPlaneStack& stack,
                const LdfaWeights& weights, const DepthChunking& chunking) {
  const KeypointSet keypoints = generate_keypoints(anchor, weights);
  const MatX depth_features = ldfa_depth_sample(anchor, stack, keypoints);
  const MatX chunks = chunk_means(depth_features, chunking);
  const VecX modulated = cross_depth_modulate(chunks, weights);
  return gated_global_fusion(modulated, depth_features, weights).output;
}

}  // namespace gocc::lifting

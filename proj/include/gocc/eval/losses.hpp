#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gocc/core/math.hpp"

namespace gocc::eval {

inline constexpr double kLogFloor = 1e-12;

struct LossWeights {
  double lambda_ce = 10.0;
  double lambda_lovasz = 1.0;
  VecX class_weights;  // one per class, empty class included

  void validate() const;
};

// Mean over voxels of -w_y log p_y. Rows are renormalized before use.
double weighted_ce(const RowMatX& probabilities, std::span<const std::uint8_t> labels,
                   const VecX& class_weights);

// Gradient of the Lovasz extension of the Jaccard loss at a sorted
// ground-truth indicator (errors already sorted descending).
VecX lovasz_grad(const std::vector<std::uint8_t>& sorted_truth);

// Lovasz extension of 1 - IoU for one class: errors m_i and membership of
// voxel i in the class's ground truth.
double lovasz_class_loss(const VecX& errors, const std::vector<std::uint8_t>& truth_mask);

// Mean of the per-class Lovasz losses over classes present in the truth or
// the argmax prediction, skipping `excluded_class` (pass -1 to keep all).
// Returns 0 when no class qualifies.
double lovasz_softmax(const RowMatX& probabilities, std::span<const std::uint8_t> labels,
                      int excluded_class);

double total_loss(double ce, double lovasz, const LossWeights& weights);

}  // namespace gocc::eval

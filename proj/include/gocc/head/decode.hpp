#pragma once

#include <vector>

#include "gocc/core/gaussian.hpp"
#include "gocc/head/unet.hpp"

namespace gocc::head {

// Row layout: offsets(3) log-scale deltas(3) quaternion delta w,x,y,z(4)
// opacity logit(1) semantic logits(C_sem).
struct DecodedAttributes {
  RowMatX values;

  static int width(int semantic_classes) { return 11 + semantic_classes; }
};

DecodedAttributes decode_attributes(const RowMatX& features, const Linear& w);

// Adds offsets and log-scale deltas, adds the quaternion delta and
// renormalizes, overwrites opacity and semantic logits.
void apply_decoded(GaussianPrimitive& g, const Eigen::Ref<const VecX>& row);
void apply_decoded(std::vector<GaussianPrimitive>& primitives, const DecodedAttributes& decoded);

}  // namespace gocc::head

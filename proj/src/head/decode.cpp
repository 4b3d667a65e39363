#include "gocc/head/decode.hpp"

#include "gocc/core/dense.hpp"
#include "gocc/core/error.hpp"

namespace gocc::head {

DecodedAttributes decode_attributes(const RowMatX& features, const Linear& w) {
  return {linear_rows(features, w.weight, w.bias)};
}

void apply_decoded(GaussianPrimitive& g, const Eigen::Ref<const VecX>& row) {
  const Eigen::Index classes = row.size() - 11;
  if (classes < 1) {
    throw Error(ErrorCode::shape, "decoded vector shorter than the 12-channel minimum");
  }
  g.centroid += row.segment<3>(0);
  g.log_scale += row.segment<3>(3);
  Eigen::Quaterniond q(g.rotation.w() + row[6], g.rotation.x() + row[7], g.rotation.y() + row[8],
                       g.rotation.z() + row[9]);
  if (q.norm() == 0.0) {
    q = Eigen::Quaterniond::Identity();
  }
  g.rotation = q.normalized();
  g.opacity_logit = row[10];
  g.semantic_logits = row.tail(classes);
}

void apply_decoded(std::vector<GaussianPrimitive>& primitives, const DecodedAttributes& decoded) {
  if (decoded.values.rows() != static_cast<Eigen::Index>(primitives.size())) {
    throw Error(ErrorCode::shape, "decoded rows do not match the primitive count");
  }
  for (std::size_t i = 0; i < primitives.size(); ++i) {
    apply_decoded(primitives[i], decoded.values.row(static_cast<Eigen::Index>(i)).transpose());
  }
}

}  // namespace gocc::head

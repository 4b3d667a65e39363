#include "gocc/head/unet.hpp"

#include <string>

#include "gocc/core/dense.hpp"
#include "gocc/core/error.hpp"

namespace gocc::head {

RowMatX avg_pool2(const RowMatX& x) {
  const Eigen::Index half = (x.rows() + 1) / 2;
  RowMatX out(half, x.cols());
  for (Eigen::Index t = 0; t < half; ++t) {
    if (2 * t + 1 < x.rows()) {
      out.row(t) = 0.5 * (x.row(2 * t) + x.row(2 * t + 1));
    } else {
      out.row(t) = x.row(2 * t);
    }
  }
  return out;
}

RowMatX unpool_nearest(const RowMatX& x, Eigen::Index length) {
  RowMatX out(length, x.cols());
  for (Eigen::Index t = 0; t < length; ++t) {
    out.row(t) = x.row(t / 2);
  }
  return out;
}

RowMatX mamba_unet_refine(const RowMatX& tokens, const UnetWeights& w, ScanStrategy strategy) {
  if (tokens.rows() < kMinSequenceLength) {
    throw Error(ErrorCode::sequence_too_short,
                "U-Net needs at least 4 tokens, got " + std::to_string(tokens.rows()));
  }
  const RowMatX e1 = linear_rows(avg_pool2(tokens), w.enc1.weight, w.enc1.bias);
  const RowMatX e2 = linear_rows(avg_pool2(e1), w.enc2.weight, w.enc2.bias);
  const RowMatX b = selective_scan(e2, w.ssm, strategy);
  const RowMatX d2 = linear_rows(b + e2, w.dec2.weight, w.dec2.bias);
  const RowMatX d1 = linear_rows(unpool_nearest(d2, e1.rows()) + e1, w.dec1.weight, w.dec1.bias);
  return tokens + unpool_nearest(d1, tokens.rows());
}

}  // namespace gocc::head

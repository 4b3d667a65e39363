#pragma once

#include <algorithm>

#include "gocc/core/math.hpp"
#include "gocc/core/parallel.hpp"

namespace gocc {

// Row-batched y = x W^T + b over fixed row blocks, so results never depend on
// the worker count.
inline RowMatX linear_rows(const RowMatX& x, const MatX& weight, const VecX& bias) {
  RowMatX out(x.rows(), weight.rows());
  constexpr std::size_t kBlock = 1024;
  parallel_for(static_cast<std::size_t>(x.rows()), kBlock, [&](std::size_t begin, std::size_t end) {
    const auto b = static_cast<Eigen::Index>(begin);
    const auto n = static_cast<Eigen::Index>(end - begin);
    out.middleRows(b, n).noalias() = x.middleRows(b, n) * weight.transpose();
    out.middleRows(b, n).rowwise() += bias.transpose();
  });
  return out;
}

inline void relu_inplace(RowMatX& x) { x = x.cwiseMax(0.0); }

}  // namespace gocc

#pragma once

#include "gocc/core/math.hpp"
#include "gocc/head/ssm.hpp"

namespace gocc::head {

struct Linear {
  MatX weight;  // out x in
  VecX bias;
};

// Two-level sequence U-Net around a selective scan:
//   e1 = enc1(pool(x)), e2 = enc2(pool(e1)), b = scan(e2)
//   d2 = dec2(b + e2), d1 = dec1(unpool(d2) + e1), out = x + unpool(d1)
// Zero decoder weights make the block the identity.
struct UnetWeights {
  Linear enc1, enc2, dec2, dec1;
  SsmWeights ssm;
};

inline constexpr Eigen::Index kMinSequenceLength = 4;

// Stride-2 mean over token pairs; an odd tail token is its own mean.
RowMatX avg_pool2(const RowMatX& x);
// Nearest-neighbour upsampling to `length` rows: out[t] = in[t / 2].
RowMatX unpool_nearest(const RowMatX& x, Eigen::Index length);

// Throws sequence-too-short for T < 4.
RowMatX mamba_unet_refine(const RowMatX& tokens, const UnetWeights& w,
                          ScanStrategy strategy = ScanStrategy::sequential);

}  // namespace gocc::head

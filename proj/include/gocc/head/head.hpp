#pragma once

#include <array>
#include <vector>

#include "gocc/core/gaussian.hpp"
#include "gocc/core/grid.hpp"
#include "gocc/core/model_config.hpp"
#include "gocc/core/parameters.hpp"
#include "gocc/head/consensus.hpp"
#include "gocc/head/decode.hpp"
#include "gocc/head/raster.hpp"
#include "gocc/head/ssm.hpp"
#include "gocc/head/tpv.hpp"
#include "gocc/head/unet.hpp"

namespace gocc::head {

struct BlockWeights {
  std::array<PlaneEmbedding, 3> embeddings;
  std::array<UnetWeights, 3> unets;
  ConsensusWeights consensus;
};

struct HeadWeights {
  Linear input;  // F_in -> F
  std::vector<BlockWeights> blocks;
  Linear decode;  // F -> 11 + C_sem

  static HeadWeights from_bundle(const ParameterBundle& bundle, const ModelConfig& config);
};

std::vector<ParameterSpec> declare_parameters(const ModelConfig& config);

// softplus^-1(0.01): initial step size of about 1e-2.
double initial_dt_bias();

struct HeadOptions {
  bool consensus = true;
  double omega_scale = 2.0;  // omega = omega_scale * largest grid extent
  ScanStrategy scan = ScanStrategy::sequential;
};

struct HeadOutput {
  std::vector<GaussianPrimitive> primitives;
  RowMatX features;  // final merged anchor features, N x F
};

// One block: TPV projection, raster sort per plane, U-Net refinement of
// (anchor feature + Phi_p) tokens, inverse gather, consensus on centroids and
// the mean of the three plane features as the next anchor feature. After the
// last block the decoded attributes are applied once.
HeadOutput run_head(const std::vector<GaussianPrimitive>& anchors, const RowMatX& fused,
                    const HeadWeights& weights, const GridSpec& frame, const HeadOptions& options = {});

}  // namespace gocc::head

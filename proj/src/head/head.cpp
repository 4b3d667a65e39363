#include "gocc/head/head.hpp"

#include <cmath>
#include <string>

#include "gocc/core/dense.hpp"
#include "gocc/core/error.hpp"

namespace gocc::head {
namespace {

std::uint32_t u(int v) { return static_cast<std::uint32_t>(v); }

std::string block_prefix(int b, Plane p) {
  return "head.block" + std::to_string(b) + "." + std::string(plane_name(p)) + ".";
}

void add_linear(std::vector<ParameterSpec>& specs, const std::string& path, int out, int in,
                double gain = 1.0) {
  specs.push_back({path + ".weight", {u(out), u(in)}, ParameterInit::uniform_fan_in, gain, u(in)});
  if (gain == 1.0) {
    specs.push_back({path + ".bias", {u(out)}, ParameterInit::uniform_fan_in, 1.0, u(in)});
  } else {
    specs.push_back({path + ".bias", {u(out)}, ParameterInit::constant, 0.0});
  }
}

Linear load_linear(const ParameterBundle& b, const std::string& path, int out, int in) {
  return {b.matrix(path + ".weight", out, in), b.vector(path + ".bias", out)};
}

}  // namespace

double initial_dt_bias() { return std::log(std::expm1(0.01)); }

std::vector<ParameterSpec> declare_parameters(const ModelConfig& c) {
  const int f = c.model_width;
  const int n = c.state_width;
  const int r = c.resolved_dt_rank();
  std::vector<ParameterSpec> specs;
  add_linear(specs, "head.input", f, c.input_channels);
  for (int b = 0; b < c.head_blocks; ++b) {
    for (Plane p : kPlanes) {
      const std::string pre = block_prefix(b, p);
      add_linear(specs, pre + "embed.fc1", f, 2);
      add_linear(specs, pre + "embed.fc2", f, f);
      add_linear(specs, pre + "unet.enc1", f, f);
      add_linear(specs, pre + "unet.enc2", f, f);
      add_linear(specs, pre + "unet.dec2", f, f, c.output_gain);
      add_linear(specs, pre + "unet.dec1", f, f, c.output_gain);
      specs.push_back({pre + "ssm.a_log", {u(f), u(n)}, ParameterInit::ssm_a_log});
      specs.push_back({pre + "ssm.dt_down", {u(r), u(f)}});
      specs.push_back({pre + "ssm.dt_up", {u(f), u(r)}});
      specs.push_back({pre + "ssm.dt_bias", {u(f)}, ParameterInit::constant, initial_dt_bias()});
      specs.push_back({pre + "ssm.b_proj", {u(n), u(f)}});
      specs.push_back({pre + "ssm.c_proj", {u(n), u(f)}});
      specs.push_back({pre + "ssm.d_skip", {u(f)}, ParameterInit::constant, 1.0});
      add_linear(specs, pre + "consensus", 2, f, c.output_gain);
    }
  }
  add_linear(specs, "head.decode", c.decode_width(), f, c.output_gain);
  return specs;
}

HeadWeights HeadWeights::from_bundle(const ParameterBundle& bundle, const ModelConfig& c) {
  const int f = c.model_width;
  const int n = c.state_width;
  const int r = c.resolved_dt_rank();
  HeadWeights w;
  w.input = load_linear(bundle, "head.input", f, c.input_channels);
  w.blocks.resize(static_cast<std::size_t>(c.head_blocks));
  for (int b = 0; b < c.head_blocks; ++b) {
    auto& block = w.blocks[static_cast<std::size_t>(b)];
    for (Plane p : kPlanes) {
      const std::string pre = block_prefix(b, p);
      const std::size_t s = plane_slot(p);
      const Linear fc1 = load_linear(bundle, pre + "embed.fc1", f, 2);
      const Linear fc2 = load_linear(bundle, pre + "embed.fc2", f, f);
      block.embeddings[s] = {fc1.weight, fc1.bias, fc2.weight, fc2.bias};
      auto& unet = block.unets[s];
      unet.enc1 = load_linear(bundle, pre + "unet.enc1", f, f);
      unet.enc2 = load_linear(bundle, pre + "unet.enc2", f, f);
      unet.dec2 = load_linear(bundle, pre + "unet.dec2", f, f);
      unet.dec1 = load_linear(bundle, pre + "unet.dec1", f, f);
      unet.ssm.a_log = bundle.matrix(pre + "ssm.a_log", f, n);
      unet.ssm.dt_down = bundle.matrix(pre + "ssm.dt_down", r, f);
      unet.ssm.dt_up = bundle.matrix(pre + "ssm.dt_up", f, r);
      unet.ssm.dt_bias = bundle.vector(pre + "ssm.dt_bias", f);
      unet.ssm.b_proj = bundle.matrix(pre + "ssm.b_proj", n, f);
      unet.ssm.c_proj = bundle.matrix(pre + "ssm.c_proj", n, f);
      unet.ssm.d_skip = bundle.vector(pre + "ssm.d_skip", f);
      block.consensus[s] = load_linear(bundle, pre + "consensus", 2, f);
    }
  }
  w.decode = load_linear(bundle, "head.decode", c.decode_width(), f);
  return w;
}

HeadOutput run_head(const std::vector<GaussianPrimitive>& anchors, const RowMatX& fused,
                    const HeadWeights& weights, const GridSpec& frame, const HeadOptions& options) {
  if (fused.rows() != static_cast<Eigen::Index>(anchors.size())) {
    throw Error(ErrorCode::shape, "fused features do not match the anchor count");
  }
  if (fused.cols() != weights.input.weight.cols()) {
    throw Error(ErrorCode::shape, "fused feature width does not match the head input projection");
  }
  std::vector<Vec3> centroids(anchors.size());
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    centroids[i] = anchors[i].centroid;
  }
  const double omega = options.omega_scale * frame.extent().maxCoeff();

  RowMatX features = linear_rows(fused, weights.input.weight, weights.input.bias);
  for (const auto& block : weights.blocks) {
    const TpvProjection tpv = tpv_project(centroids, block.embeddings, frame);
    std::array<RowMatX, 3> refined;
    for (Plane p : kPlanes) {
      const std::size_t s = plane_slot(p);
      const RasterOrder order = raster_serialize(tpv.coords[s], omega);
      const RowMatX tokens = gather_rows(features + tpv.features[s], order.order);
      refined[s] = scatter_rows(mamba_unet_refine(tokens, block.unets[s], options.scan), order.order);
    }
    if (options.consensus) {
      centroids = consensus_update(centroids, refined, block.consensus);
    }
    features = (refined[0] + refined[1] + refined[2]) / 3.0;
  }

  HeadOutput out;
  out.primitives = anchors;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    out.primitives[i].centroid = centroids[i];
  }
  apply_decoded(out.primitives, decode_attributes(features, weights.decode));
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    out.primitives[i].feature = features.row(static_cast<Eigen::Index>(i)).transpose();
  }
  out.features = std::move(features);
  return out;
}

}  // namespace gocc::head

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "gocc/core/error.hpp"
#include "gocc/core/model_config.hpp"
#include "gocc/core/parameters.hpp"
#include "gocc/core/rng.hpp"
#include "gocc/harness/oracles.hpp"
#include "gocc/head/consensus.hpp"
#include "gocc/head/decode.hpp"
#include "gocc/head/head.hpp"
#include "gocc/head/raster.hpp"
#include "gocc/head/splat.hpp"
#include "gocc/head/ssm.hpp"
#include "gocc/head/tpv.hpp"
#include "gocc/head/unet.hpp"

namespace {

using namespace gocc;
using namespace gocc::head;

ModelConfig small_config() {
  ModelConfig c;
  c.input_channels = 5;
  c.model_width = 8;
  c.semantic_classes = 3;
  c.state_width = 4;
  c.head_blocks = 2;
  return c;
}

HeadWeights small_weights(std::uint64_t seed) {
  const auto c = small_config();
  const auto specs = declare_parameters(c);
  return HeadWeights::from_bundle(ParameterBundle::initialize(specs, seed), c);
}

RowMatX random_rows(CounterRng& rng, int rows, int cols) {
  RowMatX m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = rng.normal();
  return m;
}

GridSpec cube(int n, double size = 1.0) {
  GridSpec g;
  g.voxel_size = Vec3::Constant(size);
  g.dims = {n, n, n};
  return g;
}

TEST(Tpv, PlaneCoordinates) {
  const Vec3 mu(1, 2, 3);
  EXPECT_EQ(plane_coordinates(mu, Plane::xy), Vec2(1, 2));
  EXPECT_EQ(plane_coordinates(mu, Plane::xz), Vec2(1, 3));
  EXPECT_EQ(plane_coordinates(mu, Plane::yz), Vec2(2, 3));
  for (const Plane p : kPlanes) {
    EXPECT_EQ(plane_coordinates(Vec3::Zero(), p), Vec2::Zero());
  }
}

TEST(Tpv, ProjectionShapes) {
  const auto w = small_weights(1);
  const std::vector<Vec3> mus{Vec3(1, 2, 3), Vec3(0.5, 0.5, 0.5)};
  const auto t = tpv_project(mus, w.blocks[0].embeddings, cube(4));
  for (const Plane p : kPlanes) {
    EXPECT_EQ(t.coords[plane_slot(p)][0], plane_coordinates(mus[0], p));
    EXPECT_EQ(t.features[plane_slot(p)].rows(), 2);
    EXPECT_EQ(t.features[plane_slot(p)].cols(), 8);
  }
}

TEST(Raster, ThreePointExample) {
  const auto r = raster_serialize({Vec2(0, 1), Vec2(1, 0), Vec2(0, 0)}, 10.0);
  EXPECT_EQ(r.order, (std::vector<std::size_t>{2, 1, 0}));
}

TEST(Raster, SingletonAndDuplicates) {
  EXPECT_EQ(raster_serialize({Vec2(3, 4)}, 10.0).order, std::vector<std::size_t>{0});
  const auto r = raster_serialize({Vec2(1, 1), Vec2(0, 0), Vec2(1, 1), Vec2(1, 1)}, 10.0);
  EXPECT_EQ(r.order, (std::vector<std::size_t>{1, 0, 2, 3}));
}

TEST(Raster, OmegaMustExceedSpread) {
  EXPECT_THROW(raster_serialize({Vec2(0, 0), Vec2(5, 0)}, 5.0), Error);
  EXPECT_NO_THROW(raster_serialize({Vec2(0, 0), Vec2(5, 0)}, 5.5));
}

TEST(Raster, InverseRestoresRows) {
  CounterRng rng(2, "raster");
  std::vector<Vec2> pts(50);
  for (auto& p : pts) p = Vec2(rng.uniform(-3, 3), rng.uniform(-3, 3));
  const auto r = raster_serialize(pts, 20.0);
  const RowMatX feats = random_rows(rng, 50, 4);
  EXPECT_EQ(scatter_rows(gather_rows(feats, r.order), r.order), feats);
  const auto inv = r.inverse();
  for (std::size_t i = 0; i < inv.size(); ++i) {
    EXPECT_EQ(r.order[inv[i]], i);
  }
}

TEST(Zoh, HandCase) {
  const auto z = zoh_discretize(-1.0, 1.0, std::numbers::ln2);
  EXPECT_NEAR(z.a_bar, 0.5, 1e-12);
  EXPECT_NEAR(z.b_bar, 0.5, 1e-12);
}

TEST(Zoh, ContinuousLimitAndStability) {
  const auto z = zoh_discretize(-2.0, 1.0, 1e-12);
  EXPECT_NEAR(z.a_bar, 1.0, 1e-11);
  EXPECT_NEAR(z.b_bar, 0.0, 1e-11);
  CounterRng rng(3, "zoh");
  for (int t = 0; t < 1000; ++t) {
    const double a = -rng.uniform(1e-3, 20), d = rng.uniform(1e-6, 5);
    const auto s = zoh_discretize(a, 1.0, d);
    EXPECT_GT(s.a_bar, 0.0);
    EXPECT_LT(s.a_bar, 1.0);
  }
  EXPECT_THROW(zoh_discretize(-1.0, 1.0, 0.0), Error);
}

TEST(Zoh, SeriesMatchesExact) {
  for (double z = 1e-8; z <= 1e-3; z *= 1.7) {
    const double exact = zoh_b_bar_exact(-1.0, 1.0, z);
    EXPECT_NEAR(zoh_b_bar_series(-1.0, 1.0, z), exact, 1e-10 * std::max(1.0, std::abs(exact)));
  }
}

SsmWeights one_channel_ssm(int states) {
  SsmWeights w;
  w.a_log = MatX::Zero(1, states);
  w.dt_down = MatX::Zero(1, 1);
  w.dt_up = MatX::Zero(1, 1);
  w.dt_bias = VecX::Zero(1);
  w.b_proj = MatX::Zero(states, 1);
  w.c_proj = MatX::Zero(states, 1);
  w.d_skip = VecX::Zero(1);
  return w;
}

TEST(Scan, GeometricRecurrence) {
  const auto w = one_channel_ssm(1);  // A = -1
  const int t_len = 6;
  ScanInputs in{RowMatX::Constant(t_len, 1, std::numbers::ln2), RowMatX::Ones(t_len, 1),
                RowMatX::Ones(t_len, 1)};
  const RowMatX x = RowMatX::Constant(t_len, 1, 2.0);  // B_bar x = 1
  for (const auto s : {ScanStrategy::sequential, ScanStrategy::chunked}) {
    const RowMatX y = selective_scan(x, in, w, s);
    double h = 0.0;
    for (int t = 0; t < t_len; ++t) {
      h = 0.5 * h + 1.0;
      EXPECT_NEAR(y(t, 0), h, 1e-14);
    }
    EXPECT_NEAR(y(2, 0), 1.75, 1e-14);
  }
}

TEST(Scan, ZeroCouplingIsSkip) {
  const auto w = small_weights(4).blocks[0].unets[0].ssm;
  CounterRng rng(4, "skip");
  const RowMatX x = random_rows(rng, 20, w.channels());
  ScanInputs in = project_scan_inputs(x, w);
  in.b.setZero();
  const RowMatX y = selective_scan(x, in, w);
  EXPECT_EQ(y, x * w.d_skip.asDiagonal());
}

TEST(Scan, SingleToken) {
  auto w = one_channel_ssm(2);
  w.a_log(0, 1) = std::log(3.0);
  w.d_skip[0] = 0.25;
  ScanInputs in{RowMatX::Constant(1, 1, 0.3), RowMatX(1, 2), RowMatX(1, 2)};
  in.b << 0.5, -1.0;
  in.c << 2.0, 0.7;
  const RowMatX x = RowMatX::Constant(1, 1, 1.5);
  const double b1 = std::expm1(-0.3) / -1.0 * 0.5, b2 = std::expm1(-0.9) / -3.0 * -1.0;
  const double expected = 2.0 * b1 * 1.5 + 0.7 * b2 * 1.5 + 0.25 * 1.5;
  EXPECT_NEAR(selective_scan(x, in, w)(0, 0), expected, 1e-14);
}

TEST(Scan, StrategiesAgreeWithOracle) {
  const auto w = small_weights(5).blocks[1].unets[2].ssm;
  CounterRng rng(5, "scan-oracle");
  for (const int t_len : {1, 7, 64, 65, 300}) {
    const RowMatX x = random_rows(rng, t_len, w.channels());
    const RowMatX ref = harness::oracle_sequential_scan(x, w);
    const double scale = std::max(ref.cwiseAbs().maxCoeff(), 1e-300);
    for (const auto s : {ScanStrategy::sequential, ScanStrategy::chunked}) {
      EXPECT_LE((selective_scan(x, w, s) - ref).cwiseAbs().maxCoeff() / scale, 1e-9) << t_len;
    }
  }
}

TEST(Scan, DeltaInitNearOneHundredth) {
  const auto w = small_weights(6).blocks[0].unets[0].ssm;
  const RowMatX x = RowMatX::Zero(3, w.channels());
  const auto in = project_scan_inputs(x, w);
  EXPECT_NEAR(in.delta(0, 0), 0.01, 1e-7);  // bias stored as f32
}

UnetWeights identity_unet(std::uint64_t seed) {
  auto u = small_weights(seed).blocks[0].unets[0];
  u.dec1.weight.setZero();
  u.dec1.bias.setZero();
  return u;
}

TEST(Unet, ZeroDecoderIsResidualIdentity) {
  const auto u = identity_unet(7);
  CounterRng rng(7, "unet-id");
  const RowMatX x = random_rows(rng, 13, 8);
  EXPECT_EQ(mamba_unet_refine(x, u), x);
}

TEST(Unet, ConstantPreservedWithoutInputCoupling) {
  auto u = small_weights(8).blocks[0].unets[1];
  u.ssm.b_proj.setZero();
  RowMatX x(9, 8);
  for (int r = 0; r < 9; ++r) x.row(r) = Eigen::RowVectorXd::LinSpaced(8, -1, 1);
  const RowMatX y = mamba_unet_refine(x, u);
  for (int r = 1; r < 9; ++r) {
    EXPECT_LT((y.row(r) - y.row(0)).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Unet, LengthPreservedAndShortRejected) {
  const auto u = small_weights(9).blocks[0].unets[0];
  CounterRng rng(9, "unet-len");
  for (int t = 4; t <= 64; ++t) {
    EXPECT_EQ(mamba_unet_refine(random_rows(rng, t, 8), u).rows(), t);
  }
  try {
    mamba_unet_refine(random_rows(rng, 3, 8), u);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::sequence_too_short);
  }
}

TEST(Unet, PoolingHandlesOddTail) {
  RowMatX x(5, 1);
  x << 1, 3, 5, 7, 9;
  const RowMatX p = avg_pool2(x);
  ASSERT_EQ(p.rows(), 3);
  EXPECT_EQ(p(0, 0), 2);
  EXPECT_EQ(p(1, 0), 6);
  EXPECT_EQ(p(2, 0), 9);
  const RowMatX u = unpool_nearest(p, 5);
  EXPECT_EQ(u(1, 0), 2);
  EXPECT_EQ(u(4, 0), 9);
}

TEST(Consensus, OffsetCases) {
  const std::vector<Vec3> mu{Vec3(1, 2, 3)};
  std::array<RowMatX, 3> off{RowMatX::Zero(1, 2), RowMatX::Zero(1, 2), RowMatX::Zero(1, 2)};
  EXPECT_EQ(consensus_from_offsets(mu, off)[0], mu[0]);
  off[plane_slot(Plane::xy)](0, 0) = 2;
  off[plane_slot(Plane::xz)](0, 0) = 2;
  EXPECT_EQ(consensus_from_offsets(mu, off)[0], Vec3(3, 2, 3));
  off[plane_slot(Plane::xz)](0, 0) = -2;
  EXPECT_EQ(consensus_from_offsets(mu, off)[0], mu[0]);
  off = {RowMatX::Zero(1, 2), RowMatX::Zero(1, 2), RowMatX::Zero(1, 2)};
  off[plane_slot(Plane::yz)] << 4, 6;
  EXPECT_EQ(consensus_from_offsets(mu, off)[0], Vec3(1, 4, 6));
}

TEST(Consensus, CommutesWithTranslation) {
  const auto w = small_weights(10).blocks[0].consensus;
  CounterRng rng(10, "cons-t");
  std::array<RowMatX, 3> refined{random_rows(rng, 6, 8), random_rows(rng, 6, 8), random_rows(rng, 6, 8)};
  std::vector<Vec3> mu(6), moved(6);
  const Vec3 t(0.5, -1.25, 2.0);
  for (int i = 0; i < 6; ++i) {
    mu[i] = Vec3(rng.normal(), rng.normal(), rng.normal());
    moved[i] = mu[i] + t;
  }
  const auto a = consensus_update(mu, refined, w);
  const auto b = consensus_update(moved, refined, w);
  for (int i = 0; i < 6; ++i) {
    EXPECT_LT((b[i] - a[i] - t).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Decode, WidthAndNullDecode) {
  EXPECT_EQ(DecodedAttributes::width(17), 28);
  GaussianPrimitive g;
  g.centroid = Vec3(1, 2, 3);
  g.log_scale = Vec3(0.1, 0.2, 0.3);
  g.rotation = Eigen::Quaterniond(Eigen::AngleAxisd(0.4, Vec3::UnitY()));
  g.opacity_logit = 2.0;
  g.semantic_logits = Vec3(1, 2, 3);
  const GaussianPrimitive before = g;
  apply_decoded(g, VecX::Zero(14));
  EXPECT_EQ(g.centroid, before.centroid);
  EXPECT_EQ(g.log_scale, before.log_scale);
  EXPECT_LT((g.rotation.coeffs() - before.rotation.coeffs()).norm(), 1e-15);
  EXPECT_EQ(g.opacity_logit, 0.0);
  EXPECT_EQ(g.semantic_logits, VecX::Zero(3));
}

TEST(Decode, LogScaleDeltaDoubles) {
  GaussianPrimitive g;
  g.log_scale = Vec3(0, std::log(0.5), 1);
  const Vec3 before = g.scale();
  VecX row = VecX::Zero(12);
  row.segment<3>(3).setConstant(std::numbers::ln2);
  apply_decoded(g, row);
  EXPECT_LT((g.scale() - 2 * before).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_THROW(apply_decoded(g, VecX::Zero(11)), Error);
}

GaussianPrimitive unit_gaussian(const Vec3& mu, int classes) {
  GaussianPrimitive g;
  g.centroid = mu;
  g.opacity_logit = 1000;  // opacity exactly 1
  g.semantic_logits = VecX::Zero(classes);
  return g;
}

TEST(Splat, UnitGaussianDensities) {
  const GridSpec g = cube(5);
  const auto grid = splat_to_grid({unit_gaussian(Vec3(2.5, 2.5, 2.5), 2)}, g, 2);
  EXPECT_NEAR(grid.density[g.linear_index({2, 2, 2})], 1.0, 1e-15);
  EXPECT_NEAR(grid.density[g.linear_index({3, 2, 2})], std::exp(-0.5), 1e-15);
  EXPECT_EQ(grid.density[g.linear_index({0, 0, 0})], 0.0);  // beyond 3 sigma
  EXPECT_LT(grid.labels[g.linear_index({2, 2, 2})], 2);
  EXPECT_EQ(grid.labels[g.linear_index({0, 0, 0})], 2);
}

TEST(Splat, NoPrimitivesIsEmpty) {
  const GridSpec g = cube(4);
  const auto grid = splat_to_grid({}, g, 3);
  EXPECT_EQ(grid.labels, std::vector<std::uint8_t>(64, 3));
}

TEST(Splat, DegenerateCovarianceNamesPrimitive) {
  auto bad = unit_gaussian(Vec3(1, 1, 1), 2);
  bad.log_scale.z() = std::log(1e-9);
  try {
    splat_to_grid({unit_gaussian(Vec3(2, 2, 2), 2), bad}, cube(4), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::degenerate_covariance);
    EXPECT_NE(std::string(e.what()).find('1'), std::string::npos);
  }
}

TEST(Splat, MatchesOracleAtSixSigma) {
  CounterRng rng(11, "splat");
  GridSpec g;
  g.origin = Vec3(-1, -2, 0);
  g.voxel_size = Vec3(0.25, 0.25, 0.5);
  g.dims = {20, 24, 10};
  std::vector<GaussianPrimitive> prims;
  for (int i = 0; i < 20; ++i) {
    GaussianPrimitive p;
    p.centroid = g.origin + Vec3(rng.uniform(), rng.uniform(), rng.uniform()).cwiseProduct(g.extent());
    p.log_scale = Vec3(std::log(rng.uniform(0.1, 0.6)), std::log(rng.uniform(0.1, 0.6)), std::log(rng.uniform(0.1, 0.6)));
    p.rotation = Eigen::Quaterniond(rng.normal(), rng.normal(), rng.normal(), rng.normal()).normalized();
    p.opacity_logit = rng.normal();
    p.semantic_logits = VecX(4);
    for (int c = 0; c < 4; ++c) p.semantic_logits[c] = rng.normal();
    prims.push_back(p);
  }
  SplatOptions opt;
  opt.truncation_sigmas = 6;
  const auto fast = splat_to_grid(prims, g, 4, opt);
  const auto ref = harness::oracle_dense_splat(prims, g, 4);
  double worst = 0;
  for (std::size_t i = 0; i < fast.density.size(); ++i) {
    worst = std::max(worst, std::abs(fast.density[i] - ref.density[i]));
  }
  for (std::size_t i = 0; i < fast.scores.size(); ++i) {
    worst = std::max(worst, std::abs(fast.scores[i] - ref.scores[i]));
  }
  EXPECT_LE(worst, 1e-6);
}

TEST(Head, RunProducesDecodedPrimitives) {
  const auto w = small_weights(12);
  const GridSpec g = cube(8, 0.5);
  auto anchors = init_anchors(40, g, 12, AnchorInit{{0.2, 0.5}, 3, 0});
  CounterRng rng(12, "head");
  const RowMatX fused = random_rows(rng, 40, 5);
  const auto out = run_head(anchors, fused, w, g);
  ASSERT_EQ(out.primitives.size(), 40u);
  EXPECT_EQ(out.features.rows(), 40);
  EXPECT_EQ(out.features.cols(), 8);
  for (const auto& p : out.primitives) {
    EXPECT_EQ(p.semantic_logits.size(), 3);
    EXPECT_NEAR(p.rotation.norm(), 1.0, 1e-12);
    EXPECT_TRUE(p.centroid.allFinite());
  }
  const auto again = run_head(anchors, fused, w, g);
  EXPECT_EQ(again.features, out.features);
}

TEST(Head, PermutationEquivariant) {
  const auto w = small_weights(13);
  const GridSpec g = cube(8, 0.5);
  const auto anchors = init_anchors(30, g, 13, AnchorInit{{0.2}, 3, 0});
  CounterRng rng(13, "equi");
  const RowMatX fused = random_rows(rng, 30, 5);
  std::vector<std::size_t> perm(30);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = perm.size() - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
  std::vector<GaussianPrimitive> permuted(30);
  RowMatX pf(30, 5);
  for (std::size_t i = 0; i < 30; ++i) {
    permuted[i] = anchors[perm[i]];
    pf.row(static_cast<Eigen::Index>(i)) = fused.row(static_cast<Eigen::Index>(perm[i]));
  }
  const auto a = run_head(anchors, fused, w, g);
  const auto b = run_head(permuted, pf, w, g);
  for (std::size_t i = 0; i < 30; ++i) {
    EXPECT_LT((b.primitives[i].centroid - a.primitives[perm[i]].centroid).norm(), 1e-12);
    EXPECT_LT((b.features.row(static_cast<Eigen::Index>(i)) -
               a.features.row(static_cast<Eigen::Index>(perm[i]))).cwiseAbs().maxCoeff(), 1e-12);
  }
}

}  // namespace

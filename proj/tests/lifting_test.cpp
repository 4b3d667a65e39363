#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "gocc/core/error.hpp"
#include "gocc/core/model_config.hpp"
#include "gocc/core/parameters.hpp"
#include "gocc/lifting/camera.hpp"
#include "gocc/lifting/feature_plane.hpp"
#include "gocc/lifting/ldfa.hpp"
#include "gocc/lifting/lifting.hpp"

namespace {

using namespace gocc;
using namespace gocc::lifting;

FeaturePlane constant_plane(int h, int w, int f, float v) {
  FeaturePlane p(h, w, f);
  std::fill(p.values.begin(), p.values.end(), v);
  return p;
}

CameraView pinhole(double f, double cx, double cy, int h, int w, int channels, float value) {
  CameraView v;
  v.plane = constant_plane(h, w, channels, value);
  v.intrinsics << f, 0, cx, 0, f, cy, 0, 0, 1;
  return v;
}

TEST(Projection, OpticalAxisHitsPrincipalPoint) {
  const auto v = pinhole(100, 50, 40, 81, 101, 1, 0.0f);
  const auto p = project_to_view(Vec3(0, 0, 1), v);
  EXPECT_TRUE(p.valid);
  EXPECT_DOUBLE_EQ(p.uv.x(), 50);
  EXPECT_DOUBLE_EQ(p.uv.y(), 40);
  EXPECT_DOUBLE_EQ(p.depth, 1);
}

TEST(Projection, BehindCameraIsInvalid) {
  const auto v = pinhole(100, 50, 50, 101, 101, 1, 0.0f);
  EXPECT_FALSE(project_to_view(Vec3(0, 0, -1), v).valid);
}

TEST(Projection, HandPinhole) {
  const auto v = pinhole(100, 50, 50, 101, 101, 1, 0.0f);
  const auto p = project_to_view(Vec3(0.1, 0, 1), v);
  EXPECT_TRUE(p.valid);
  EXPECT_NEAR(p.uv.x(), 60, 1e-12);
  EXPECT_NEAR(p.uv.y(), 50, 1e-12);
}

TEST(Projection, ExtrinsicsApplied) {
  auto v = pinhole(100, 50, 50, 101, 101, 1, 0.0f);
  v.extrinsics(2, 3) = 2.0;  // world z = -1 lands at camera depth 1
  const auto p = project_to_view(Vec3(0, 0, -1), v);
  EXPECT_TRUE(p.valid);
  EXPECT_DOUBLE_EQ(p.depth, 1.0);
}

TEST(Bilinear, OnTexelReturnsTexel) {
  FeaturePlane p(3, 4, 2);
  for (std::size_t i = 0; i < p.values.size(); ++i) {
    p.values[i] = static_cast<float>(i);
  }
  const VecX s = sample_bilinear(p, Vec2(2, 1));
  EXPECT_DOUBLE_EQ(s[0], p.texel(1, 2)[0]);
  EXPECT_DOUBLE_EQ(s[1], p.texel(1, 2)[1]);
}

TEST(Bilinear, MidpointAverages) {
  FeaturePlane p(1, 2, 3);
  std::fill(p.values.begin(), p.values.begin() + 3, 2.0f);
  std::fill(p.values.begin() + 3, p.values.end(), 4.0f);
  const VecX s = sample_bilinear(p, Vec2(0.5, 0));
  for (int c = 0; c < 3; ++c) {
    EXPECT_DOUBLE_EQ(s[c], 3.0);
  }
}

TEST(Bilinear, OutsideIsZero) {
  const auto p = constant_plane(4, 4, 2, 7.0f);
  EXPECT_EQ(sample_bilinear(p, Vec2(-10, 2)), VecX::Zero(2));
  EXPECT_EQ(sample_bilinear(p, Vec2(2, 100)), VecX::Zero(2));
}

CameraAggregationWeights uniform_offsets(int k) {
  CameraAggregationWeights w;
  w.offsets.assign(k, Vec2::Zero());
  w.logits = VecX::Zero(k);
  return w;
}

GaussianPrimitive anchor_at(const Vec3& c) {
  GaussianPrimitive g;
  g.centroid = c;
  return g;
}

TEST(CameraAggregation, ConstantField) {
  MultiViewFeatureSet views;
  views.views.push_back(pinhole(10, 5, 5, 11, 11, 3, 1.75f));
  const VecX f = aggregate_camera(anchor_at(Vec3(0.1, 0.2, 2)), views, uniform_offsets(4));
  EXPECT_TRUE(f.isApprox(VecX::Constant(3, 1.75)));
}

TEST(CameraAggregation, NoValidViewIsZero) {
  MultiViewFeatureSet views;
  views.views.push_back(pinhole(10, 5, 5, 11, 11, 3, 1.0f));
  views.views.push_back(pinhole(10, 5, 5, 11, 11, 3, 2.0f));
  const VecX f = aggregate_camera(anchor_at(Vec3(0, 0, -3)), views, uniform_offsets(2));
  EXPECT_EQ(f, VecX::Zero(3));
}

TEST(CameraAggregation, MeanOverValidViews) {
  MultiViewFeatureSet views;
  views.views.push_back(pinhole(10, 5, 5, 11, 11, 2, 1.0f));
  views.views.push_back(pinhole(10, 5, 5, 11, 11, 2, 3.0f));
  auto hidden = pinhole(10, 5, 5, 11, 11, 2, 100.0f);
  hidden.extrinsics(2, 2) = -1.0;  // looks the other way
  views.views.push_back(hidden);
  const VecX f = aggregate_camera(anchor_at(Vec3(0, 0, 1)), views, uniform_offsets(3));
  EXPECT_NEAR(f[0], 2.0, 1e-12);
  EXPECT_NEAR(f[1], 2.0, 1e-12);
}

TEST(CameraAggregation, RejectsMixedChannels) {
  MultiViewFeatureSet views;
  views.views.push_back(pinhole(10, 5, 5, 11, 11, 2, 1.0f));
  views.views.push_back(pinhole(10, 5, 5, 11, 11, 3, 1.0f));
  EXPECT_THROW(views.validate(), Error);
}

DepthPlaneStack unit_stack(int depth, int h, int w, int f) {
  DepthPlaneStack s;
  for (int d = 0; d < depth; ++d) {
    s.planes.emplace_back(h, w, f);
    s.z_edges.push_back(d);
  }
  s.z_edges.push_back(depth);
  return s;
}

TEST(DepthSample, SingleKeypointOnTexel) {
  auto s = unit_stack(2, 4, 4, 2);
  s.planes[0].texel(2, 1)[0] = 5.0f;
  s.planes[1].texel(2, 1)[1] = -3.0f;
  KeypointSet k{{Vec3::Zero()}, {1.0}};
  const MatX rows = ldfa_depth_sample(anchor_at(Vec3(1.5, 2.5, 0.3)), s, k);
  ASSERT_EQ(rows.rows(), 2);
  EXPECT_DOUBLE_EQ(rows(0, 0), 5.0);
  EXPECT_DOUBLE_EQ(rows(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(rows(1, 1), -3.0);
}

TEST(DepthSample, WeightedKeypoints) {
  auto s = unit_stack(1, 4, 4, 1);
  s.planes[0].texel(0, 0)[0] = 2.0f;
  s.planes[0].texel(0, 2)[0] = 4.0f;
  KeypointSet k{{Vec3(-1, 0, 0), Vec3(1, 0, 0)}, {0.5, 0.5}};
  const MatX rows = ldfa_depth_sample(anchor_at(Vec3(1.5, 0.5, 0)), s, k);
  EXPECT_DOUBLE_EQ(rows(0, 0), 3.0);
}

TEST(DepthSample, NullWeights) {
  auto s = unit_stack(3, 4, 4, 2);
  for (auto& p : s.planes) {
    std::fill(p.values.begin(), p.values.end(), 9.0f);
  }
  KeypointSet k{{Vec3::Zero(), Vec3(0.5, 0, 0)}, {0.0, 0.0}};
  EXPECT_EQ(ldfa_depth_sample(anchor_at(Vec3(1, 1, 1)), s, k), MatX::Zero(3, 2));
}

TEST(Partition, Singletons) {
  const auto c = partition_depths(4, 4, 0, false);
  ASSERT_EQ(c.chunks.size(), 4u);
  for (int k = 0; k < 4; ++k) {
    EXPECT_EQ(c.chunks[k], std::vector<int>{k});
  }
}

TEST(Partition, Halves) {
  const auto c = partition_depths(4, 2, 0, false);
  EXPECT_EQ(c.permutation, (std::vector<int>{0, 1, 2, 3}));
  EXPECT_EQ(c.chunks[0], (std::vector<int>{0, 1}));
  EXPECT_EQ(c.chunks[1], (std::vector<int>{2, 3}));
}

TEST(Partition, RemainderSizes) {
  const auto c = partition_depths(3, 2, 0, false);
  std::multiset<std::size_t> sizes{c.chunks[0].size(), c.chunks[1].size()};
  EXPECT_EQ(sizes, (std::multiset<std::size_t>{1, 2}));
}

TEST(Partition, TrainingPermutesAndCovers) {
  const auto c = partition_depths(8, 3, 17, true);
  auto sorted = c.permutation;
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> iota(8);
  std::iota(iota.begin(), iota.end(), 0);
  EXPECT_EQ(sorted, iota);
  std::vector<int> all;
  for (const auto& chunk : c.chunks) {
    all.insert(all.end(), chunk.begin(), chunk.end());
  }
  std::sort(all.begin(), all.end());
  EXPECT_EQ(all, iota);
  EXPECT_EQ(partition_depths(8, 3, 17, true).permutation, c.permutation);
}

TEST(Partition, TooManyChunks) {
  EXPECT_THROW(partition_depths(2, 3, 0, false), Error);
}

TEST(ChunkMeans, Laws) {
  MatX rows(4, 2);
  rows << 0, 0, 2, 2, 5, 1, 7, 3;
  const MatX singles = chunk_means(rows, partition_depths(4, 4, 0, false));
  EXPECT_EQ(singles, rows);
  const MatX halves = chunk_means(rows, partition_depths(4, 2, 0, false));
  EXPECT_DOUBLE_EQ(halves(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(halves(1, 0), 6.0);
  EXPECT_DOUBLE_EQ(halves(1, 1), 2.0);
  const MatX constant = chunk_means(MatX::Constant(5, 3, 1.5), partition_depths(5, 2, 0, false));
  EXPECT_EQ(constant, MatX::Constant(2, 3, 1.5));
}

LdfaWeights zero_ldfa(int f, int k) {
  LdfaWeights w;
  w.keypoints = 1;
  w.offset_weight = MatX::Zero(3, f);
  w.offset_bias = VecX::Zero(3);
  w.attention_weight = MatX::Zero(1, f);
  w.attention_bias = VecX::Zero(1);
  w.phi_weight = MatX::Zero(f, (k - 1) * f);
  w.phi_bias = VecX::Zero(f);
  w.gate_weight = VecX::Zero(2 * f);
  return w;
}

TEST(Modulate, MaskLaws) {
  MatX chunks(3, 2);
  chunks << 1, -1, 4, 4, 2, 2;
  auto w = zero_ldfa(2, 3);
  EXPECT_TRUE(cross_depth_modulate(chunks, w).isApprox(VecX::Constant(2, 1.0)));
  w.phi_bias.setConstant(1000);
  EXPECT_EQ(cross_depth_modulate(chunks, w), VecX::Constant(2, 2.0));
  chunks.row(2).setZero();
  EXPECT_EQ(cross_depth_modulate(chunks, w), VecX::Zero(2));
  EXPECT_THROW(cross_depth_modulate(MatX::Ones(1, 2), zero_ldfa(2, 2)), Error);
}

TEST(GatedFusion, Saturation) {
  auto w = zero_ldfa(2, 2);
  const VecX m = VecX::Constant(2, 2.0);
  const MatX depth = MatX::Zero(3, 2);
  auto g = gated_global_fusion(m, depth, w);
  EXPECT_DOUBLE_EQ(g.alpha, 0.5);
  EXPECT_EQ(g.output, VecX::Constant(2, 1.0));
  MatX depth2(2, 2);
  depth2 << 1, 3, 3, 5;
  w.gate_bias = 1000;
  EXPECT_EQ(gated_global_fusion(m, depth2, w).output, m);
  w.gate_bias = -1000;
  EXPECT_EQ(gated_global_fusion(m, depth2, w).output, Vec2(2, 4));
}

TEST(Keypoints, ScaledOffsetsAndSoftmaxWeights) {
  auto w = zero_ldfa(2, 2);
  w.keypoints = 2;
  w.offset_weight = MatX::Zero(6, 2);
  w.offset_bias = VecX::Zero(6);
  w.offset_bias << 1, 0, 0, 0, -1, 0;
  w.attention_weight = MatX::Zero(2, 2);
  w.attention_bias = VecX::Zero(2);
  GaussianPrimitive a;
  a.log_scale = Vec3(std::log(2.0), std::log(3.0), 0);
  a.feature = VecX::Zero(2);
  const auto k = generate_keypoints(a, w);
  ASSERT_EQ(k.offsets.size(), 2u);
  EXPECT_NEAR((k.offsets[0] - Vec3(2, 0, 0)).norm(), 0, 1e-12);
  EXPECT_NEAR((k.offsets[1] - Vec3(0, -3, 0)).norm(), 0, 1e-12);
  EXPECT_DOUBLE_EQ(k.weights[0], 0.5);
  EXPECT_DOUBLE_EQ(k.weights[1], 0.5);
}

TEST(Lifting, AnchorsLiftDeterministically) {
  ModelConfig cfg;
  cfg.input_channels = 4;
  cfg.depth_levels = 4;
  cfg.depth_chunks = 2;
  const auto specs = declare_parameters(cfg);
  const auto bundle = ParameterBundle::initialize(specs, 3);
  const auto w = LiftingWeights::from_bundle(bundle, cfg);
  MultiViewFeatureSet views;
  views.views.push_back(pinhole(10, 5, 5, 11, 11, 4, 0.5f));
  auto stack = unit_stack(4, 6, 6, 4);
  for (auto& p : stack.planes) {
    std::fill(p.values.begin(), p.values.end(), 1.0f);
  }
  std::vector<GaussianPrimitive> anchors;
  for (int i = 0; i < 5; ++i) {
    GaussianPrimitive a = anchor_at(Vec3(1 + 0.5 * i, 2, 1.5));
    a.feature = VecX::Zero(4);
    anchors.push_back(a);
  }
  const auto chunking = partition_depths(4, 2, 0, false);
  const auto a = lift_anchors(anchors, views, stack, w, chunking);
  const auto b = lift_anchors(anchors, views, stack, w, chunking);
  EXPECT_EQ(a.camera.rows(), 5);
  EXPECT_EQ(a.lidar.cols(), 4);
  EXPECT_EQ(a.camera, b.camera);
  EXPECT_EQ(a.lidar, b.lidar);
  EXPECT_TRUE(a.lidar.allFinite());
}

}  // namespace

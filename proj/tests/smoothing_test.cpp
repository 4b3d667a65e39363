#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "gocc/core/error.hpp"
#include "gocc/core/rng.hpp"
#include "gocc/smoothing/smoothing.hpp"

namespace {

using namespace gocc;
using namespace gocc::smoothing;

TEST(TemperedSoftmax, UniformLogits) {
  const VecX p = tempered_softmax(VecX::Constant(5, 3.0), 0.7);
  for (int i = 0; i < 5; ++i) {
    EXPECT_DOUBLE_EQ(p[i], 0.2);
  }
}

TEST(TemperedSoftmax, HandCase) {
  const VecX p = tempered_softmax(Vec2(std::log(2.0), 0.0), 1.0);
  EXPECT_NEAR(p[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(p[1], 1.0 / 3.0, 1e-15);
}

TEST(TemperedSoftmax, HotLimitIsUniform) {
  VecX logits(3);
  logits << 5, -2, 1;
  const VecX p = tempered_softmax(logits, 1e9);
  EXPECT_LT((p - VecX::Constant(3, 1.0 / 3)).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(TemperedSoftmax, RejectsNonPositiveTemperature) {
  EXPECT_THROW(tempered_softmax(Vec2(1, 2), 0.0), Error);
  EXPECT_THROW(tempered_softmax(Vec2(1, 2), -1.0), Error);
}

TEST(CrossEntropy, HalfHalf) {
  const auto h = bidirectional_cross_entropy(Vec2(0.5, 0.5), Vec2(0.5, 0.5), 0.0);
  EXPECT_NEAR(h.camera_to_lidar, std::numbers::ln2, 1e-15);
  EXPECT_NEAR(h.lidar_to_camera, std::numbers::ln2, 1e-15);
}

TEST(CrossEntropy, EqualDistributionsGiveEqualDirections) {
  CounterRng rng(3, "ce-sym");
  for (int t = 0; t < 100; ++t) {
    VecX logits(6);
    for (int i = 0; i < 6; ++i) logits[i] = rng.normal();
    const VecX p = tempered_softmax(logits, 1.0);
    const auto h = bidirectional_cross_entropy(p, p, 1e-6);
    EXPECT_EQ(h.camera_to_lidar, h.lidar_to_camera);
  }
}

TEST(CrossEntropy, PerfectAgreementOneHot) {
  const auto h = bidirectional_cross_entropy(Vec3(0, 1, 0), Vec3(0, 1, 0), 0.0);
  EXPECT_EQ(h.camera_to_lidar, 0.0);
  EXPECT_EQ(h.lidar_to_camera, 0.0);
}

TEST(CrossEntropy, LengthMismatch) {
  EXPECT_THROW(bidirectional_cross_entropy(Vec2(0.5, 0.5), Vec3(1, 0, 0), 0.0), Error);
}

TEST(ConfidenceWeights, EqualEntropies) {
  const auto w = confidence_weights(0.3, 0.3, 1e-6);
  EXPECT_EQ(w.camera, w.lidar);
}

TEST(ConfidenceWeights, HandCase) {
  const auto w = confidence_weights(std::numbers::ln2, std::numbers::ln2, 0.0);
  EXPECT_DOUBLE_EQ(w.camera, 0.5);
  EXPECT_DOUBLE_EQ(w.lidar, 0.5);
}

TEST(ConfidenceWeights, DecayLimit) {
  const auto w = confidence_weights(0.1, 800.0, 1e-6);
  EXPECT_LT(w.camera, 1e-300);
  EXPECT_GT(w.lidar, 0.99);
  const auto inf = confidence_weights(0.1, std::numeric_limits<double>::infinity(), 1e-6);
  EXPECT_EQ(inf.camera, 0.0);
}

TEST(ConfidenceWeights, SumMatchesClosedForm) {
  CounterRng rng(4, "cw-sum");
  for (int t = 0; t < 500; ++t) {
    const double a = rng.uniform(0, 5), b = rng.uniform(0, 5), xi = 1e-6;
    const auto w = confidence_weights(a, b, xi);
    const double s = std::exp(-a) + std::exp(-b);
    EXPECT_EQ(w.camera + w.lidar, s / (s + xi));
    EXPECT_NEAR(w.camera, std::exp(-b) / (s + xi), 1e-15);
  }
}

TEST(ApplySmoothing, Identities) {
  const VecX cam = Vec3(1, -2, 3), lid = Vec3(0.5, 0.25, -1);
  const ConfidenceWeights w{0.3, 0.6};
  auto [c0, l0] = apply_smoothing(cam, lid, w, 0.0);
  EXPECT_EQ(c0, cam);
  EXPECT_EQ(l0, lid);
  auto [c1, l1] = apply_smoothing(cam, lid, ConfidenceWeights{0.0, 0.0}, 2.0);
  EXPECT_EQ(c1, cam);
  EXPECT_EQ(l1, lid);
  auto [c2, l2] = apply_smoothing(VecX::Zero(3), lid, ConfidenceWeights{0.5, 0.25}, 1.0);
  EXPECT_EQ(c2, VecX::Constant(3, 0.5));
  EXPECT_EQ(l2, (lid.array() + 0.25).matrix());
}

TEST(SelectLayers, Degenerate) {
  const auto none = select_layers(6, 0.0, 1, true);
  EXPECT_EQ(none, std::vector<bool>(6, false));
  const auto all = select_layers(6, 1.0, 1, true);
  EXPECT_EQ(all, std::vector<bool>(6, true));
  EXPECT_EQ(select_layers(6, 1.0, 1, false), std::vector<bool>(6, false));
}

TEST(SelectLayers, Deterministic) {
  EXPECT_EQ(select_layers(32, 0.5, 77, true), select_layers(32, 0.5, 77, true));
}

TEST(SmoothingConfig, ValidationNamesField) {
  SmoothingConfig c;
  c.temperature = 0;
  try {
    c.validate();
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.field(), "smoothing.temperature");
  }
}

TEST(SmoothFeatures, MapsAndPasses) {
  RowMatX cam(2, 3), lid(2, 3);
  cam << 1, 0, 0, 0, 1, 0;
  lid << 1, 0, 0, 0, 0, 1;
  SmoothingConfig c;
  const auto maps = compute_entropy_maps(cam, lid, c);
  ASSERT_EQ(maps.weights.size(), 2u);
  RowMatX cam2 = cam, lid2 = lid;
  smooth_features(cam2, lid2, {false, false}, 0.5, c);
  EXPECT_EQ(cam2, cam);
  smooth_features(cam2, lid2, {true}, 0.5, c);
  EXPECT_NEAR(cam2(0, 1) - cam(0, 1), 0.5 * maps.weights[0].camera, 1e-15);
  EXPECT_NEAR(lid2(1, 0) - lid(1, 0), 0.5 * maps.weights[1].lidar, 1e-15);
}

}  // namespace

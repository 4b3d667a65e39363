#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gocc/core/error.hpp"
#include "gocc/core/grid.hpp"
#include "gocc/core/rng.hpp"
#include "gocc/core/taxonomy.hpp"
#include "gocc/eval/losses.hpp"
#include "gocc/eval/metrics.hpp"

namespace {

using namespace gocc;
using namespace gocc::eval;

RowMatX one_hot(const std::vector<std::uint8_t>& labels, int classes) {
  RowMatX p = RowMatX::Zero(static_cast<Eigen::Index>(labels.size()), classes);
  for (std::size_t i = 0; i < labels.size(); ++i) p(static_cast<Eigen::Index>(i), labels[i]) = 1.0;
  return p;
}

SemanticOccupancyGrid line_grid(const std::vector<std::uint8_t>& labels, int classes) {
  GridSpec s;
  s.dims = {static_cast<int>(labels.size()), 1, 1};
  SemanticOccupancyGrid g = SemanticOccupancyGrid::filled_empty(s, classes);
  g.labels = labels;
  return g;
}

TEST(WeightedCe, PerfectPrediction) {
  const std::vector<std::uint8_t> y{0, 2, 1, 1};
  EXPECT_EQ(weighted_ce(one_hot(y, 3), y, VecX::Ones(3)), 0.0);
}

TEST(WeightedCe, HalfProbability) {
  RowMatX p(1, 2);
  p << 0.5, 0.5;
  const std::vector<std::uint8_t> y{0};
  EXPECT_NEAR(weighted_ce(p, y, VecX::Ones(2)), std::numbers::ln2, 1e-15);
}

TEST(WeightedCe, LinearInClassWeight) {
  RowMatX p(2, 2);
  p << 0.3, 0.7, 0.6, 0.4;
  const std::vector<std::uint8_t> y{0, 1};
  const double base = weighted_ce(p, y, Vec2(1, 1));
  const double doubled = weighted_ce(p, y, Vec2(2, 1));
  EXPECT_NEAR(doubled - base, -std::log(0.3) / 2, 1e-15);
}

TEST(WeightedCe, RelabelingInvariant) {
  CounterRng rng(1, "ce-perm");
  RowMatX p(6, 4);
  std::vector<std::uint8_t> y(6);
  for (int i = 0; i < 6; ++i) {
    for (int c = 0; c < 4; ++c) p(i, c) = rng.uniform(0.01, 1);
    y[i] = static_cast<std::uint8_t>(rng.below(4));
  }
  const VecX w = Eigen::Vector4d(1.0, 1.3, 0.7, 2.0);
  const std::vector<int> perm{2, 0, 3, 1};
  RowMatX pp(6, 4);
  std::vector<std::uint8_t> yp(6);
  VecX wp(4);
  for (int c = 0; c < 4; ++c) {
    pp.col(perm[c]) = p.col(c);
    wp[perm[c]] = w[c];
  }
  for (int i = 0; i < 6; ++i) yp[i] = static_cast<std::uint8_t>(perm[y[i]]);
  EXPECT_NEAR(weighted_ce(p, y, w), weighted_ce(pp, yp, wp), 1e-14);
}

TEST(WeightedCe, LabelOutOfRange) {
  const std::vector<std::uint8_t> y{3};
  try {
    weighted_ce(RowMatX::Constant(1, 3, 1.0 / 3), y, VecX::Ones(3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::label);
  }
}

TEST(Lovasz, PerfectIsZero) {
  const std::vector<std::uint8_t> y{0, 1, 1, 0, 2};
  EXPECT_EQ(lovasz_softmax(one_hot(y, 3), y, -1), 0.0);
}

TEST(Lovasz, VertexOneMinusIou) {
  // class 0 has one truth voxel predicted as 1, and one false positive.
  const std::vector<std::uint8_t> truth{0, 1, 1};
  const std::vector<std::uint8_t> pred{1, 0, 1};
  EXPECT_NEAR(lovasz_class_loss(Eigen::Vector3d(1, 1, 0), {1, 0, 0}), 1.0, 1e-15);
  // class 1: IoU = 1/3
  const double l = lovasz_softmax(one_hot(pred, 2), truth, 0);
  EXPECT_NEAR(l, 1.0 - 1.0 / 3.0, 1e-15);
}

TEST(Lovasz, AbsentClassExcluded) {
  const std::vector<std::uint8_t> y{0, 0, 1};
  const std::vector<std::uint8_t> pred{0, 1, 1};
  // class 2 absent everywhere; mean over classes 0 and 1
  const double l = lovasz_softmax(one_hot(pred, 3), y, -1);
  EXPECT_NEAR(l, 0.5 * ((1 - 0.5) + (1 - 0.5)), 1e-15);
}

TEST(TotalLoss, Weighted) {
  LossWeights w;
  EXPECT_NEAR(total_loss(0.5, 0.2, w), 5.2, 1e-15);
  EXPECT_EQ(total_loss(0.0, 0.7, w), 0.7);
  EXPECT_EQ(total_loss(0.3, 0.0, w), 3.0);
  w.lambda_ce = 0;
  w.lambda_lovasz = 0;
  EXPECT_EQ(total_loss(0.5, 0.2, w), 0.0);
}

TEST(Iou, IdentityAndDisjoint) {
  const auto a = line_grid({0, 1, 2, 1}, 3);
  const auto r = class_iou(a, a);
  for (const auto& c : r.classes) {
    if (c.iou) EXPECT_EQ(*c.iou, 1.0);
  }
  const auto b = line_grid({1, 0, 2, 0}, 3);
  const auto d = class_iou(b, a);
  EXPECT_EQ(*d.classes[0].iou, 0.0);
  EXPECT_EQ(*d.classes[1].iou, 0.0);
}

TEST(Iou, HandCounts) {
  const auto truth = line_grid({0, 0, 0, 1}, 2);
  const auto pred = line_grid({0, 0, 1, 0}, 2);
  const auto r = class_iou(pred, truth);
  EXPECT_EQ(r.classes[0].tp, 2u);
  EXPECT_EQ(r.classes[0].fp, 1u);
  EXPECT_EQ(r.classes[0].fn, 1u);
  EXPECT_EQ(*r.classes[0].iou, 0.5);
}

TEST(Iou, Symmetric) {
  CounterRng rng(2, "iou-sym");
  std::vector<std::uint8_t> a(100), b(100);
  for (int i = 0; i < 100; ++i) {
    a[i] = static_cast<std::uint8_t>(rng.below(5));
    b[i] = static_cast<std::uint8_t>(rng.below(5));
  }
  const auto ab = class_iou(line_grid(a, 5), line_grid(b, 5));
  const auto ba = class_iou(line_grid(b, 5), line_grid(a, 5));
  for (int c = 0; c < 5; ++c) {
    EXPECT_EQ(ab.classes[c].iou, ba.classes[c].iou);
  }
}

TEST(Iou, LayoutMismatch) {
  try {
    class_iou(line_grid({0, 1}, 2), line_grid({0, 1, 1}, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::shape);
  }
}

IoUReport report_of(std::vector<std::optional<double>> ious) {
  IoUReport r;
  for (const auto& v : ious) {
    ClassCounts c;
    c.iou = v;
    r.classes.push_back(c);
  }
  r.empty_id = static_cast<int>(ious.size()) - 1;
  return r;
}

TEST(MeanIou, HandMeans) {
  EXPECT_EQ(mean_iou(report_of({1.0, 0.0, std::nullopt}), true), 0.5);
  EXPECT_EQ(mean_iou(report_of({1.0, 1.0, 1.0}), false), 1.0);
  EXPECT_EQ(mean_iou(report_of({0.25, 0.75, 0.1}), true), 0.5);
  EXPECT_NEAR(mean_iou(report_of({0.25, 0.75, 0.2}), false), 0.4, 1e-15);
  EXPECT_EQ(mean_iou(report_of({0.75, 0.25, 0.1}), true), 0.5);
}

TEST(MeanIou, NoDefinedClass) {
  try {
    mean_iou(report_of({std::nullopt, std::nullopt, 1.0}), true);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::undefined_metric);
  }
}

TEST(Metrics, FormatMarksUndefinedClasses) {
  const auto t = ClassTaxonomy::generic(2);
  const auto r = class_iou(line_grid({0, 0, 2}, 3), line_grid({0, 2, 2}, 3));
  const std::string text = format_metrics(r, t, LossSummary{0.1, 0.2, 1.2});
  EXPECT_NE(text.find("undefined"), std::string::npos);
  EXPECT_NE(text.find("miou"), std::string::npos);
  EXPECT_NE(text.find("loss_total"), std::string::npos);
}

TEST(Metrics, ReferenceConstants) {
  EXPECT_EQ(reference::kOpenOccupancyMiou, 25.3);
  EXPECT_EQ(reference::kOcc3dMiou, 49.4);
  EXPECT_EQ(reference::kSemanticKittiMiou, 25.2);
}

}  // namespace

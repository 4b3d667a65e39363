#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gocc/core/grid.hpp"
#include "gocc/core/taxonomy.hpp"

namespace gocc::eval {

struct ClassCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
  std::optional<double> iou;  // empty when tp + fp + fn = 0
};

struct IoUReport {
  std::vector<ClassCounts> classes;
  int empty_id = 0;
};

// Exact confusion counts per class. Throws a shape error when the grids
// differ in layout or class count.
IoUReport class_iou(const SemanticOccupancyGrid& pred, const SemanticOccupancyGrid& truth);

// Unweighted mean over defined classes, by default without the empty class.
// Throws undefined-metric when no class is defined.
double mean_iou(const IoUReport& report, bool exclude_empty = true);

struct LossSummary {
  double ce = 0.0;
  double lovasz = 0.0;
  double total = 0.0;
};

// One "class" record per class, then the mIoU line and optional loss lines.
std::string format_metrics(const IoUReport& report, const ClassTaxonomy& taxonomy,
                            const std::optional<LossSummary>& losses, bool exclude_empty = true);

// Published full-scale mIoU figures (percent), kept for documentation and
// report headers. They are not reproduced here.
namespace reference {
inline constexpr double kOpenOccupancyMiou = 25.3;
inline constexpr double kOcc3dMiou = 49.4;
inline constexpr double kSemanticKittiMiou = 25.2;
inline constexpr double kOpenOccupancy12800Miou = 22.8;
inline constexpr double kOpenOccupancy25600Miou = 25.3;
inline constexpr double kOcc3dAdditionMiou = 47.3;
inline constexpr double kOcc3dConcatenationMiou = 47.8;
inline constexpr double kOcc3dAdaptiveMiou = 49.4;
}  // namespace reference

}  // namespace gocc::eval

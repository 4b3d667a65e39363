#include "gocc/eval/metrics.hpp"

#include <iomanip>
#include <sstream>

#include "gocc/core/error.hpp"
#include "gocc/core/parallel.hpp"

namespace gocc::eval {

IoUReport class_iou(const SemanticOccupancyGrid& pred, const SemanticOccupancyGrid& truth) {
  if (!same_layout(pred.spec, truth.spec) || pred.class_count != truth.class_count ||
      pred.labels.size() != truth.labels.size()) {
    throw Error(ErrorCode::shape, "prediction and truth grids differ in layout");
  }
  pred.validate();
  truth.validate();
  const auto c = static_cast<std::size_t>(pred.class_count);
  const std::size_t n = pred.labels.size();
  constexpr std::size_t kShard = 1 << 16;
  const std::size_t shards = (n + kShard - 1) / kShard;
  // Per shard: [tp, fp, fn] x classes, merged afterwards.
  std::vector<std::uint64_t> partial(shards * c * 3, 0);
  parallel_for(n, kShard, [&](std::size_t begin, std::size_t end) {
    std::uint64_t* counts = partial.data() + (begin / kShard) * c * 3;
    for (std::size_t v = begin; v < end; ++v) {
      const std::size_t p = pred.labels[v];
      const std::size_t t = truth.labels[v];
      if (p == t) {
        ++counts[3 * p];
      } else {
        ++counts[3 * p + 1];
        ++counts[3 * t + 2];
      }
    }
  });
  IoUReport report;
  report.empty_id = pred.empty_id();
  report.classes.resize(c);
  for (std::size_t s = 0; s < shards; ++s) {
    for (std::size_t k = 0; k < c; ++k) {
      report.classes[k].tp += partial[(s * c + k) * 3];
      report.classes[k].fp += partial[(s * c + k) * 3 + 1];
      report.classes[k].fn += partial[(s * c + k) * 3 + 2];
    }
  }
  for (auto& cls : report.classes) {
    const std::uint64_t denom = cls.tp + cls.fp + cls.fn;
    if (denom > 0) {
      cls.iou = static_cast<double>(cls.tp) / static_cast<double>(denom);
    }
  }
  return report;
}

double mean_iou(const IoUReport& report, bool exclude_empty) {
  double sum = 0.0;
  int defined = 0;
  for (std::size_t k = 0; k < report.classes.size(); ++k) {
    if (exclude_empty && static_cast<int>(k) == report.empty_id) {
      continue;
    }
    if (report.classes[k].iou) {
      sum += *report.classes[k].iou;
      ++defined;
    }
  }
  if (defined == 0) {
    throw Error(ErrorCode::undefined_metric, "no class has a defined IoU");
  }
  return sum / defined;
}

std::string format_metrics(const IoUReport& report, const ClassTaxonomy& taxonomy,
                           const std::optional<LossSummary>& losses, bool exclude_empty) {
  std::ostringstream out;
  out << std::setprecision(6) << std::fixed;
  out << "# class name tp fp fn iou (undefined: class absent from both grids)\n";
  for (std::size_t k = 0; k < report.classes.size(); ++k) {
    const auto& cls = report.classes[k];
    const std::string name =
        k < taxonomy.names.size() ? taxonomy.names[k] : "class_" + std::to_string(k);
    out << "class " << name << ' ' << cls.tp << ' ' << cls.fp << ' ' << cls.fn << ' ';
    if (cls.iou) {
      out << *cls.iou;
    } else {
      out << "undefined";
    }
    out << '\n';
  }
  out << "empty_excluded " << (exclude_empty ? "true" : "false") << '\n';
  try {
    out << "miou " << mean_iou(report, exclude_empty) << '\n';
  } catch (const Error&) {
    out << "miou undefined\n";
  }
  if (losses) {
    out << "loss_ce " << losses->ce << '\n';
    out << "loss_lovasz " << losses->lovasz << '\n';
    out << "loss_total " << losses->total << '\n';
  }
  return out.str();
}

}  // namespace gocc::eval

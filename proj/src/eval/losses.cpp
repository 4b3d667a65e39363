#include "gocc/eval/losses.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "gocc/core/error.hpp"

namespace gocc::eval {
namespace {

void check_labels(const RowMatX& probabilities, std::span<const std::uint8_t> labels) {
  if (static_cast<Eigen::Index>(labels.size()) != probabilities.rows()) {
    throw Error(ErrorCode::shape, "label count does not match the prediction rows");
  }
  for (std::uint8_t y : labels) {
    if (y >= probabilities.cols()) {
      throw Error(ErrorCode::label, "label " + std::to_string(y) + " outside " +
                                        std::to_string(probabilities.cols()) + " classes");
    }
  }
}

}  // namespace

void LossWeights::validate() const {
  if (!(lambda_ce >= 0.0) || !(lambda_lovasz >= 0.0)) {
    throw ValidationError("lambda", "loss weights must be non-negative");
  }
  if (class_weights.size() > 0 && !(class_weights.array() > 0.0).all()) {
    throw ValidationError("class_weights", "class weights must be positive");
  }
}

double weighted_ce(const RowMatX& probabilities, std::span<const std::uint8_t> labels,
                   const VecX& class_weights) {
  check_labels(probabilities, labels);
  if (class_weights.size() != probabilities.cols()) {
    throw Error(ErrorCode::shape, "class weight count does not match the class count");
  }
  if (labels.empty()) {
    return 0.0;
  }
  double total = 0.0;
  for (std::size_t v = 0; v < labels.size(); ++v) {
    const auto row = static_cast<Eigen::Index>(v);
    const double norm = probabilities.row(row).sum();
    const double p = norm > 0.0 ? probabilities(row, labels[v]) / norm : 0.0;
    total += -class_weights[labels[v]] * std::log(std::max(p, kLogFloor));
  }
  return total / static_cast<double>(labels.size());
}

VecX lovasz_grad(const std::vector<std::uint8_t>& sorted_truth) {
  const auto n = static_cast<Eigen::Index>(sorted_truth.size());
  VecX grad(n);
  const double gts = std::accumulate(sorted_truth.begin(), sorted_truth.end(), 0.0);
  double cum_truth = 0.0;
  double cum_false = 0.0;
  double previous = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    cum_truth += sorted_truth[i];
    cum_false += 1.0 - sorted_truth[i];
    const double jaccard = 1.0 - (gts - cum_truth) / (gts + cum_false);
    grad[i] = jaccard - previous;
    previous = jaccard;
  }
  return grad;
}

double lovasz_class_loss(const VecX& errors, const std::vector<std::uint8_t>& truth_mask) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(errors.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return errors[a] > errors[b]; });
  std::vector<std::uint8_t> sorted_truth(order.size());
  VecX sorted_errors(errors.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    sorted_truth[k] = truth_mask[static_cast<std::size_t>(order[k])];
    sorted_errors[static_cast<Eigen::Index>(k)] = errors[order[k]];
  }
  return sorted_errors.dot(lovasz_grad(sorted_truth));
}

double lovasz_softmax(const RowMatX& probabilities, std::span<const std::uint8_t> labels,
                      int excluded_class) {
  check_labels(probabilities, labels);
  const Eigen::Index n = probabilities.rows();
  const Eigen::Index classes = probabilities.cols();
  std::vector<char> present(static_cast<std::size_t>(classes), 0);
  for (Eigen::Index v = 0; v < n; ++v) {
    present[labels[static_cast<std::size_t>(v)]] = 1;
    Eigen::Index arg = 0;
    probabilities.row(v).maxCoeff(&arg);
    present[static_cast<std::size_t>(arg)] = 1;
  }
  double sum = 0.0;
  int counted = 0;
  VecX errors(n);
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(n));
  for (Eigen::Index c = 0; c < classes; ++c) {
    if (c == excluded_class || !present[static_cast<std::size_t>(c)]) {
      continue;
    }
    for (Eigen::Index v = 0; v < n; ++v) {
      const bool in_class = labels[static_cast<std::size_t>(v)] == c;
      mask[static_cast<std::size_t>(v)] = in_class ? 1 : 0;
      errors[v] = in_class ? 1.0 - probabilities(v, c) : probabilities(v, c);
    }
    sum += lovasz_class_loss(errors, mask);
    ++counted;
  }
  return counted > 0 ? sum / counted : 0.0;
}

double total_loss(double ce, double lovasz, const LossWeights& weights) {
  return weights.lambda_ce * ce + weights.lambda_lovasz * lovasz;
}

}  // namespace gocc::eval

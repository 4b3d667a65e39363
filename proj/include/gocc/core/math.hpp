#pragma once

#include <Eigen/Core>
#include <cmath>

namespace gocc {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;
using RowMatX = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Overflow-free logistic function; saturates to exactly 0 or 1 for large |x|.
inline double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

inline double softplus(double x) {
  return x > 30.0 ? x : std::log1p(std::exp(x));
}

inline double relu(double x) { return x > 0.0 ? x : 0.0; }

// Max-shifted softmax.
inline VecX softmax(const VecX& logits) {
  VecX out(logits.size());
  if (logits.size() == 0) {
    return out;
  }
  const double peak = logits.maxCoeff();
  double total = 0.0;
  for (Eigen::Index i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - peak);
    total += out[i];
  }
  return out / total;
}

// y = W x + b for a single vector.
inline VecX affine(const MatX& weight, const VecX& bias, const VecX& x) {
  return weight * x + bias;
}

}  // namespace gocc

#include "gocc/harness/oracles.hpp"

#include <Eigen/Cholesky>
#include <cmath>

#include "gocc/head/splat.hpp"

namespace gocc::harness {

SemanticOccupancyGrid oracle_dense_splat(const std::vector<GaussianPrimitive>& primitives,
                                         const GridSpec& spec, int semantic_classes,
                                         double occupancy_threshold) {
  spec.validate();
  auto grid = SemanticOccupancyGrid::filled_empty(spec, semantic_classes + 1);
  grid.density.assign(spec.voxel_count(), 0.0);
  grid.scores.assign(spec.voxel_count() * static_cast<std::size_t>(semantic_classes), 0.0);
  std::vector<Eigen::LLT<Mat3>> factors;
  std::vector<VecX> probs;
  for (const auto& g : primitives) {
    factors.emplace_back(make_covariance(g.scale(), g.rotation));
    probs.push_back(softmax(g.semantic_logits));
  }
  for (std::size_t v = 0; v < spec.voxel_count(); ++v) {
    const Vec3 x = voxel_center(spec, spec.unravel(v));
    for (std::size_t i = 0; i < primitives.size(); ++i) {
      const Vec3 d = x - primitives[i].centroid;
      const double q = d.dot(factors[i].solve(d));
      const double w = sigmoid(primitives[i].opacity_logit) * std::exp(-0.5 * q);
      grid.density[v] += w;
      for (int c = 0; c < semantic_classes; ++c) {
        grid.scores[v * semantic_classes + c] += w * probs[i][c];
      }
    }
  }
  head::assign_labels(grid, occupancy_threshold);
  return grid;
}

RowMatX oracle_sequential_scan(const RowMatX& tokens, const head::SsmWeights& w) {
  const Eigen::Index t_len = tokens.rows();
  const Eigen::Index f_len = tokens.cols();
  const Eigen::Index n = w.a_log.cols();
  const Eigen::Index r = w.dt_down.rows();
  RowMatX y = RowMatX::Zero(t_len, f_len);
  MatX h = MatX::Zero(f_len, n);
  std::vector<double> low(static_cast<std::size_t>(r));
  std::vector<double> b(static_cast<std::size_t>(n));
  std::vector<double> c(static_cast<std::size_t>(n));
  for (Eigen::Index t = 0; t < t_len; ++t) {
    for (Eigen::Index k = 0; k < r; ++k) {
      double s = 0.0;
      for (Eigen::Index f = 0; f < f_len; ++f) s += w.dt_down(k, f) * tokens(t, f);
      low[k] = s;
    }
    for (Eigen::Index s = 0; s < n; ++s) {
      double bs = 0.0;
      double cs = 0.0;
      for (Eigen::Index f = 0; f < f_len; ++f) {
        bs += w.b_proj(s, f) * tokens(t, f);
        cs += w.c_proj(s, f) * tokens(t, f);
      }
      b[s] = bs;
      c[s] = cs;
    }
    for (Eigen::Index f = 0; f < f_len; ++f) {
      double pre = w.dt_bias[f];
      for (Eigen::Index k = 0; k < r; ++k) pre += w.dt_up(f, k) * low[k];
      const double delta = pre > 30.0 ? pre : std::log1p(std::exp(pre));
      const double x = tokens(t, f);
      double out = w.d_skip[f] * x;
      for (Eigen::Index s = 0; s < n; ++s) {
        const double a = -std::exp(w.a_log(f, s));
        const double a_bar = std::exp(delta * a);
        const double b_bar = std::expm1(delta * a) / a * b[s];
        h(f, s) = a_bar * h(f, s) + b_bar * x;
        out += c[s] * h(f, s);
      }
      y(t, f) = out;
    }
  }
  return y;
}

}  // namespace gocc::harness

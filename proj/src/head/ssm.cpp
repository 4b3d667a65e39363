#include "gocc/head/ssm.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "gocc/core/dense.hpp"
#include "gocc/core/error.hpp"

namespace gocc::head {
namespace {

constexpr std::size_t kChannelGrain = 8;
constexpr Eigen::Index kChunk = 64;

inline double b_bar_coefficient(double a, double delta, double a_bar) {
  const double z = delta * a;
  if (std::abs(z) < kZohSeriesThreshold) {
    return delta * (1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0)));
  }
  return (a_bar - 1.0) / a;
}

void scan_channel_sequential(Eigen::Index f, const RowMatX& x, const ScanInputs& in, const MatX& a,
                             double d_skip, std::vector<double>& h, RowMatX& y) {
  const Eigen::Index t_len = x.rows();
  const Eigen::Index n = a.cols();
  std::fill(h.begin(), h.end(), 0.0);
  for (Eigen::Index t = 0; t < t_len; ++t) {
    const double delta = in.delta(t, f);
    const double xt = x(t, f);
    double acc = 0.0;
    for (Eigen::Index s = 0; s < n; ++s) {
      const double a_fs = a(f, s);
      const double a_bar = std::exp(delta * a_fs);
      h[s] = a_bar * h[s] + b_bar_coefficient(a_fs, delta, a_bar) * in.b(t, s) * xt;
      acc += in.c(t, s) * h[s];
    }
    y(t, f) = acc + d_skip * xt;
  }
}

// Three passes: local scans from a zero state inside each chunk with the
// running product of A_bar, a sequential carry across chunk ends, then the
// carried state folded back in.
void scan_channel_chunked(Eigen::Index f, const RowMatX& x, const ScanInputs& in, const MatX& a,
                          double d_skip, RowMatX& y) {
  const Eigen::Index t_len = x.rows();
  const Eigen::Index n = a.cols();
  RowMatX local(t_len, n);
  RowMatX decay(t_len, n);
  for (Eigen::Index start = 0; start < t_len; start += kChunk) {
    const Eigen::Index stop = std::min(t_len, start + kChunk);
    for (Eigen::Index s = 0; s < n; ++s) {
      double h = 0.0;
      double prod = 1.0;
      const double a_fs = a(f, s);
      for (Eigen::Index t = start; t < stop; ++t) {
        const double delta = in.delta(t, f);
        const double a_bar = std::exp(delta * a_fs);
        h = a_bar * h + b_bar_coefficient(a_fs, delta, a_bar) * in.b(t, s) * x(t, f);
        prod *= a_bar;
        local(t, s) = h;
        decay(t, s) = prod;
      }
    }
  }
  std::vector<double> carry(static_cast<std::size_t>(n), 0.0);
  for (Eigen::Index start = 0; start < t_len; start += kChunk) {
    const Eigen::Index stop = std::min(t_len, start + kChunk);
    for (Eigen::Index t = start; t < stop; ++t) {
      double acc = 0.0;
      for (Eigen::Index s = 0; s < n; ++s) {
        acc += in.c(t, s) * (local(t, s) + decay(t, s) * carry[s]);
      }
      y(t, f) = acc + d_skip * x(t, f);
    }
    for (Eigen::Index s = 0; s < n; ++s) {
      carry[s] = local(stop - 1, s) + decay(stop - 1, s) * carry[s];
    }
  }
}

}  // namespace

double zoh_b_bar_exact(double a, double b, double delta) { return std::expm1(delta * a) / a * b; }

double zoh_b_bar_series(double a, double b, double delta) {
  const double z = delta * a;
  return delta * (1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0))) * b;
}

ZohStep zoh_discretize(double a, double b, double delta) {
  if (!(delta > 0.0)) {
    throw Error(ErrorCode::configuration, "ZOH step must be positive");
  }
  ZohStep out;
  out.a_bar = std::exp(delta * a);
  out.b_bar = b_bar_coefficient(a, delta, out.a_bar) * b;
  return out;
}

ScanInputs project_scan_inputs(const RowMatX& tokens, const SsmWeights& w) {
  ScanInputs in;
  const RowMatX low = linear_rows(tokens, w.dt_down, VecX::Zero(w.dt_down.rows()));
  in.delta = linear_rows(low, w.dt_up, w.dt_bias).unaryExpr([](double v) { return softplus(v); });
  in.b = linear_rows(tokens, w.b_proj, VecX::Zero(w.b_proj.rows()));
  in.c = linear_rows(tokens, w.c_proj, VecX::Zero(w.c_proj.rows()));
  return in;
}

RowMatX selective_scan(const RowMatX& tokens, const SsmWeights& w, ScanStrategy strategy) {
  return selective_scan(tokens, project_scan_inputs(tokens, w), w, strategy);
}

RowMatX selective_scan(const RowMatX& tokens, const ScanInputs& in, const SsmWeights& w,
                       ScanStrategy strategy) {
  if (tokens.cols() != w.channels()) {
    throw Error(ErrorCode::shape, "scan tokens do not match the SSM channel count");
  }
  const MatX a = w.a();
  RowMatX y(tokens.rows(), tokens.cols());
  parallel_for(static_cast<std::size_t>(tokens.cols()), kChannelGrain,
               [&](std::size_t begin, std::size_t end) {
                 std::vector<double> h(static_cast<std::size_t>(a.cols()));
                 for (std::size_t f = begin; f < end; ++f) {
                   const auto c = static_cast<Eigen::Index>(f);
                   if (strategy == ScanStrategy::sequential) {
                     scan_channel_sequential(c, tokens, in, a, w.d_skip[c], h, y);
                   } else {
                     scan_channel_chunked(c, tokens, in, a, w.d_skip[c], y);
                   }
                 }
               });
  return y;
}

}  // namespace gocc::head

#pragma once

#include "gocc/core/math.hpp"

namespace gocc::head {

struct ZohStep {
  double a_bar = 1.0;
  double b_bar = 0.0;
};

// |Delta A| below this uses the series form of (exp(z) - 1) / z.
inline constexpr double kZohSeriesThreshold = 1e-4;

// A_bar = exp(Delta A), B_bar = ((A_bar - 1) / A) B, with the series
// Delta B (1 + z/2 + z^2/6 + z^3/24) for |z| = |Delta A| < kZohSeriesThreshold.
ZohStep zoh_discretize(double a, double b, double delta);
// Both branches on their own, for checking one against the other.
double zoh_b_bar_exact(double a, double b, double delta);  // expm1(z) / A * B
double zoh_b_bar_series(double a, double b, double delta);

// Selective SSM parameters for F channels and N_s states. A = -exp(a_log).
struct SsmWeights {
  MatX a_log;    // F x N_s
  MatX dt_down;  // R x F
  MatX dt_up;    // F x R
  VecX dt_bias;  // F
  MatX b_proj;   // N_s x F
  MatX c_proj;   // N_s x F
  VecX d_skip;   // F

  int channels() const { return static_cast<int>(a_log.rows()); }
  int states() const { return static_cast<int>(a_log.cols()); }
  MatX a() const { return -a_log.array().exp().matrix(); }
};

// Input-dependent step sizes and couplings for every token.
struct ScanInputs {
  RowMatX delta;  // T x F, softplus so strictly positive
  RowMatX b;      // T x N_s
  RowMatX c;      // T x N_s
};

ScanInputs project_scan_inputs(const RowMatX& tokens, const SsmWeights& w);

enum class ScanStrategy {
  sequential,  // token by token per channel
  chunked,     // per-chunk local scans joined by carried states
};

// h_t = A_bar_t h_{t-1} + B_bar_t x_t, h_0 = 0, y_t = C_t . h_t + D x_t, per
// channel. Channels are independent and evaluated in parallel.
RowMatX selective_scan(const RowMatX& tokens, const SsmWeights& w,
                       ScanStrategy strategy = ScanStrategy::sequential);
RowMatX selective_scan(const RowMatX& tokens, const ScanInputs& inputs, const SsmWeights& w,
                       ScanStrategy strategy = ScanStrategy::sequential);

}  // namespace gocc::head

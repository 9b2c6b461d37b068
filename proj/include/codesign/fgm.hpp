#pragma once

#include <optional>
#include <vector>

#include "codesign/fixed_point.hpp"
#include "codesign/linalg.hpp"
#include "codesign/ocp.hpp"

namespace codesign {

struct FgmConfig {
  int iterations = 100;
  /// Empty for double precision.
  std::optional<FixedPointFormat> fixed;
  bool warm_start = true;
};

struct FgmSolution {
  Vector theta;
  Vector first_input;
  /// Some fixed-point intermediate hit the format's saturation limit.
  bool saturated = false;
};

/// Constant-step momentum (sqrt(L) - sqrt(mu)) / (sqrt(L) + sqrt(mu)).
double compute_beta(double l, double mu);

/**
 * Projected fast gradient method with constant step 1/L on a condensed
 * box-constrained QP. Each iteration performs
 *
 *   theta  = (I - H/L) nu - h/L
 *   z_next = clamp(theta, theta_min, theta_max)
 *   nu     = (1 + beta) z_next - beta z
 *
 * starting from nu = z = theta0, for exactly `iterations` iterations.
 *
 * In fixed-point mode (I - H/L), G/L, beta, 1 + beta and the bounds are
 * quantized once at construction; every matrix-vector and momentum result
 * is accumulated exactly and then rounded once to the format.
 */
class FgmSolver {
 public:
  FgmSolver(const CondensedQp& qp, FgmConfig config);

  FgmSolution solve(const Vector& x_hat, const Vector& theta0) const;

  const FgmConfig& config() const { return config_; }
  double beta() const { return beta_; }
  int size() const { return static_cast<int>(lower_.size()); }
  int inputs() const { return inputs_; }

 private:
  FgmSolution solve_double(const Vector& x_hat, const Vector& theta0) const;
  FgmSolution solve_fixed(const Vector& x_hat, const Vector& theta0) const;

  FgmConfig config_;
  int inputs_ = 0;
  double beta_ = 0.0;
  Matrix step_matrix_;   // I - H/L
  Matrix scaled_gain_;   // G/L
  Vector lower_;
  Vector upper_;

  // Fixed-point data; matrices hold exact integer raw values.
  Matrix step_raw_;
  Matrix gain_raw_;
  std::vector<std::int64_t> lower_raw_;
  std::vector<std::int64_t> upper_raw_;
  std::int64_t beta_raw_ = 0;
  std::int64_t one_plus_beta_raw_ = 0;
  // step_raw_ = sum_p step_digits_[p] * 2^(p * digit_bits_), each digit
  // matrix small enough that its double product with any raw iterate is
  // exact. Empty when no such split exists (integer fallback).
  std::vector<Matrix> step_digits_;
  int digit_bits_ = 0;
  bool constants_saturated_ = false;
};

/// One-shot convenience wrapper.
FgmSolution solve(const CondensedQp& qp, const Vector& x_hat, const Vector& theta0,
                  const FgmConfig& config);

/// Drops the first input block and repeats the last one.
Vector shift_warm_start(const Vector& theta, int inputs);

/**
 * Fixed-point format whose integer part covers every FGM intermediate:
 * the quantized constants, nu, the gradient step and h/L for any theta in
 * the box and any state with |x_j| <= state_bound. Interval bound B yields
 * integer_bits = floor(log2 B) + 2 (magnitude plus sign), at least 2.
 */
FixedPointFormat derive_fixed_format(const CondensedQp& qp, int fraction_bits,
                                     double state_bound = 1.0);

}  // namespace codesign

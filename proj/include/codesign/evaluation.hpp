#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace codesign {

using Objectives = std::array<double, 2>;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/**
 * Outcome of evaluating one design. Extreme-barrier failures (instability,
 * nonconvex quantized Hessian) leave the objectives at +inf; the timing
 * constraint is progressive and only contributes to `violation`.
 */
struct Evaluation {
  Objectives objectives{kInfinity, kInfinity};
  /// Solver time (or FPGA latency) minus sampling time; <= 0 is feasible.
  double constraint_time = 0.0;
  /// Aggregated progressive-barrier violation h >= 0.
  double violation = 0.0;
  bool stability_ok = true;
  bool convexity_ok = true;
  bool simulated = false;

  // Diagnostics; NaN / 0 when not applicable.
  double solver_time = std::numeric_limits<double>::quiet_NaN();
  double condition_number = std::numeric_limits<double>::quiet_NaN();
  double quantized_mu = std::numeric_limits<double>::quiet_NaN();
  int integer_bits = 0;

  std::string timing_model;
  std::uint64_t seed = 0;
  /// Measured evaluation time; only reported when wall-clock timing is on.
  double wall_seconds = std::numeric_limits<double>::quiet_NaN();

  /// Passed every extreme barrier.
  bool admissible() const {
    return stability_ok && convexity_ok && std::isfinite(objectives[0]) &&
           std::isfinite(objectives[1]);
  }
  bool feasible() const { return admissible() && violation <= 0.0; }
};

}  // namespace codesign

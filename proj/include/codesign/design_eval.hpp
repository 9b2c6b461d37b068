#pragma once

#include <string>
#include <vector>

#include "codesign/closed_loop.hpp"
#include "codesign/design_space.hpp"
#include "codesign/evaluation.hpp"
#include "codesign/fgm.hpp"
#include "codesign/ocp.hpp"
#include "codesign/plant_model.hpp"

namespace codesign {

enum class CaseStudy { Cpu, Fpga };

std::string to_string(CaseStudy study);
CaseStudy case_study_from_string(const std::string& name);

/// One candidate controller design. fraction_bits is only used by the FPGA study.
struct DesignPoint {
  double sampling_time = 0.1;
  int horizon = 1;
  int fgm_iterations = 20;
  double q_speed = 1.0;
  int fraction_bits = 16;
};

/// T_s in [0.02, 0.5], N in [1, 12], N_FGM in [20, 200], q_speed in [0.2, 5], plus N_frac in [5, 25] for FPGA.
DesignSpace default_design_space(CaseStudy study);

DesignPoint to_design_point(CaseStudy study, const std::vector<double>& coordinates);
std::vector<double> to_coordinates(CaseStudy study, const DesignPoint& point);

/// Euclidean norm of the four relative utilizations; throws DomainError on negatives.
double resource_measure(double r_ff, double r_lut, double r_dsp, double r_bram);

/// Per-step FGM time N_FGM (2 (Nm)^2 + c_lin Nm) t_flop.
struct CpuTimeModel {
  double seconds_per_flop = 0.0;
  double linear_coefficient = 4.0;

  double operator()(int decision_size, int iterations) const;

  /// t_flop chosen so the reference design (Nm, iterations) takes `seconds`.
  static CpuTimeModel calibrated(int decision_size, int iterations, double seconds,
                                 double linear_coefficient = 4.0);
};

/// Reference calibration: N = 5, m = 10, N_FGM = 136 takes 0.0225 s.
CpuTimeModel default_cpu_time_model();

/// Zynq-7020-class capacities and per-unit costs of a pipelined FGM datapath.
struct ResourceModelParams {
  double lut_capacity = 53200;
  double ff_capacity = 106400;
  double dsp_capacity = 220;
  double bram_blocks = 140;
  double bram_block_bits = 36864;  // 4.9 Mb over 140 blocks

  int parallel_macs = 4;
  double lut_base = 600;
  double lut_per_bit_unit = 12;
  double lut_per_address_bit = 20;
  double ff_base = 800;
  double ff_per_bit_unit = 16;
  double ff_per_address_bit = 10;
  int pipeline_depth = 12;
  double clock_hz = 100e6;

  void validate() const;
};

struct FpgaUsage {
  double r_ff = 0.0;
  double r_lut = 0.0;
  double r_dsp = 0.0;
  double r_bram = 0.0;
  double latency = 0.0;  // seconds per controller call

  double measure() const { return resource_measure(r_ff, r_lut, r_dsp, r_bram); }
};

/**
 * Analytic stand-in for synthesis results. Word width w = integer + fraction
 * bits; `parallel_macs` w-bit multiply-accumulate lanes plus two momentum
 * multipliers, each w x w multiply costing ceil(w/25) ceil(w/18) DSP slices.
 * LUT and FF counts are affine in w times the number of arithmetic units plus
 * an addressing term; BRAM holds H, G and five working vectors at w bits.
 * Latency = (ceil(n/P) Nm + N_FGM (ceil(Nm/P) Nm + 2 Nm + depth)) / clock.
 */
FpgaUsage fpga_surrogate(int states, int decision_size, int iterations, FixedPointFormat format,
                         const ResourceModelParams& params);

/// Everything the evaluators need besides the design itself.
struct StudyContext {
  CaseStudy study = CaseStudy::Cpu;
  ContinuousLinearModel plant;
  InitialConditionBank initial_conditions;
  SimulationConfig simulation;
  Vector u_min;
  Vector u_max;
  CpuTimeModel cpu_time;
  ResourceModelParams fpga;
  /// Envelope |x_j| <= state_bound used when sizing the fixed-point integer part.
  double state_bound = 1.0;
  /// Adds max(0, R_FPGA - 1)^2 to the progressive violation.
  bool resource_constraint = false;
  /// CPU study: measure the solver on this machine instead of the flop model.
  bool wallclock_timing = false;
  DesignSpace space;
  std::uint64_t seed = 0;
};

/// Default context for a study: ten-mass chain, five initial conditions,
/// unit input bounds, epsilon 0.01 (CPU) or 0.02 (FPGA).
StudyContext default_study_context(CaseStudy study);

/// Weights -> discretization -> condensing for one design.
CondensedQp build_design_qp(const StudyContext& ctx, const DesignPoint& point);

/**
 * CPU study: f1 = summed settling time under double-precision FGM MPC,
 * f2 = modelled solver time per step; timing is a progressive constraint
 * (violation = max(0, f2 - T_s)^2) and stability an extreme barrier.
 */
Evaluation evaluate_cpu(const DesignPoint& point, const StudyContext& ctx);

/**
 * FPGA study: rejects designs whose quantized Hessian is not positive
 * definite before simulating; otherwise f1 = summed settling time under
 * fixed-point FGM MPC and f2 = R_FPGA, with latency <= T_s progressive.
 */
Evaluation evaluate_fpga(const DesignPoint& point, const StudyContext& ctx);

/// Dispatches on ctx.study.
Evaluation evaluate_design(const DesignPoint& point, const StudyContext& ctx);

/// Smallest eigenvalue of the Hessian quantized to `format`.
double quantized_hessian_mu(const Matrix& hessian, FixedPointFormat format);

}  // namespace codesign

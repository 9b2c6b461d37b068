#include "codesign/design_eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "codesign/errors.hpp"

namespace codesign {

std::string to_string(CaseStudy study) { return study == CaseStudy::Cpu ? "cpu" : "fpga"; }

CaseStudy case_study_from_string(const std::string& name) {
  if (name == "cpu" || name == "CPU") return CaseStudy::Cpu;
  if (name == "fpga" || name == "FPGA") return CaseStudy::Fpga;
  throw ConfigError("unknown case study '" + name + "' (expected cpu or fpga)");
}

DesignSpace default_design_space(CaseStudy study) {
  DesignSpace space;
  space.dimensions = {
      {"Ts", 0.02, 0.5, false},
      {"N", 1, 12, true},
      {"N_FGM", 20, 200, true},
      {"q_speed", 0.2, 5.0, false},
  };
  if (study == CaseStudy::Fpga) space.dimensions.push_back({"N_frac", 5, 25, true});
  return space;
}

DesignPoint to_design_point(CaseStudy study, const std::vector<double>& c) {
  const std::size_t expected = study == CaseStudy::Fpga ? 5 : 4;
  if (c.size() != expected) throw DomainError("design vector has the wrong dimension");
  DesignPoint p;
  p.sampling_time = c[0];
  p.horizon = static_cast<int>(std::lround(c[1]));
  p.fgm_iterations = static_cast<int>(std::lround(c[2]));
  p.q_speed = c[3];
  if (study == CaseStudy::Fpga) p.fraction_bits = static_cast<int>(std::lround(c[4]));
  return p;
}

std::vector<double> to_coordinates(CaseStudy study, const DesignPoint& p) {
  std::vector<double> c{p.sampling_time, static_cast<double>(p.horizon),
                        static_cast<double>(p.fgm_iterations), p.q_speed};
  if (study == CaseStudy::Fpga) c.push_back(p.fraction_bits);
  return c;
}

double resource_measure(double r_ff, double r_lut, double r_dsp, double r_bram) {
  if (r_ff < 0.0 || r_lut < 0.0 || r_dsp < 0.0 || r_bram < 0.0) {
    throw DomainError("resource fractions must be nonnegative");
  }
  return std::sqrt(r_ff * r_ff + r_lut * r_lut + r_dsp * r_dsp + r_bram * r_bram);
}

double CpuTimeModel::operator()(int decision_size, int iterations) const {
  if (decision_size <= 0 || iterations <= 0) throw DomainError("time model needs positive sizes");
  const double nm = decision_size;
  return iterations * (2.0 * nm * nm + linear_coefficient * nm) * seconds_per_flop;
}

CpuTimeModel CpuTimeModel::calibrated(int decision_size, int iterations, double seconds,
                                      double linear_coefficient) {
  CpuTimeModel model{1.0, linear_coefficient};
  model.seconds_per_flop = seconds / model(decision_size, iterations);
  return model;
}

CpuTimeModel default_cpu_time_model() { return CpuTimeModel::calibrated(50, 136, 0.0225); }

void ResourceModelParams::validate() const {
  if (!(lut_capacity > 0 && ff_capacity > 0 && dsp_capacity > 0 && bram_blocks > 0 &&
        bram_block_bits > 0 && clock_hz > 0 && parallel_macs > 0)) {
    throw ConfigError("resource model capacities must be positive");
  }
}

FpgaUsage fpga_surrogate(int states, int decision_size, int iterations, FixedPointFormat format,
                         const ResourceModelParams& params) {
  if (states <= 0 || decision_size <= 0 || iterations <= 0) {
    throw DomainError("FPGA surrogate needs a nonempty problem");
  }
  params.validate();
  const double w = format.total_bits();
  const double nm = decision_size;
  const int lanes = params.parallel_macs;
  const double units = lanes + 2;

  const double dsp_per_multiplier = std::ceil(w / 25.0) * std::ceil(w / 18.0);
  const double words = nm * nm + nm * states + 5.0 * nm + states;
  const double control_bits = std::ceil(std::log2(words)) + std::ceil(std::log2(iterations + 1.0));

  const double dsp = units * dsp_per_multiplier;
  const double lut = params.lut_base + params.lut_per_bit_unit * w * units +
                     params.lut_per_address_bit * control_bits;
  const double ff = params.ff_base + params.ff_per_bit_unit * w * units +
                    params.ff_per_address_bit * control_bits;
  const double bram = std::ceil(words * w / params.bram_block_bits);

  const double per_iteration = std::ceil(nm / lanes) * nm + 2.0 * nm + params.pipeline_depth;
  const double cycles = std::ceil(static_cast<double>(states) / lanes) * nm +
                        iterations * per_iteration;

  FpgaUsage usage;
  usage.r_ff = ff / params.ff_capacity;
  usage.r_lut = lut / params.lut_capacity;
  usage.r_dsp = dsp / params.dsp_capacity;
  usage.r_bram = bram / params.bram_blocks;
  usage.latency = cycles / params.clock_hz;
  return usage;
}

StudyContext default_study_context(CaseStudy study) {
  StudyContext ctx;
  ctx.study = study;
  ctx.plant = build_mass_spring_chain(default_mass_spring_chain());
  ctx.initial_conditions = default_initial_conditions();
  ctx.simulation.epsilon = study == CaseStudy::Cpu ? 0.01 : 0.02;
  ctx.u_min = -Vector::Ones(ctx.plant.inputs());
  ctx.u_max = Vector::Ones(ctx.plant.inputs());
  ctx.cpu_time = default_cpu_time_model();
  ctx.space = default_design_space(study);
  return ctx;
}

CondensedQp build_design_qp(const StudyContext& ctx, const DesignPoint& point) {
  const OcpWeights weights = build_weights(point.q_speed, ctx.plant.states(), ctx.plant.inputs());
  const DiscreteOcp ocp =
      make_ocp(ctx.plant, weights, point.sampling_time, point.horizon, ctx.u_min, ctx.u_max);
  return condense(ocp);
}

double quantized_hessian_mu(const Matrix& hessian, FixedPointFormat format) {
  const Matrix quantized = symmetrized(quantize(hessian, format));
  Eigen::SelfAdjointEigenSolver<Matrix> solver(quantized, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

namespace {

void require_in_space(const DesignPoint& point, const StudyContext& ctx) {
  if (!ctx.space.contains(to_coordinates(ctx.study, point))) {
    throw DomainError("design point lies outside the design space");
  }
}

double measure_solver_seconds(const CondensedQp& qp, const FgmConfig& config,
                              const StudyContext& ctx) {
  const FgmSolver solver(qp, config);
  const Vector& x = ctx.initial_conditions.front();
  const Vector theta0 = Vector::Zero(qp.size());
  std::vector<double> samples;
  for (int rep = 0; rep < 7; ++rep) {
    const auto start = std::chrono::steady_clock::now();
    const FgmSolution solution = solver.solve(x, theta0);
    const auto stop = std::chrono::steady_clock::now();
    if (!solution.theta.allFinite()) break;
    samples.push_back(std::chrono::duration<double>(stop - start).count());
  }
  std::sort(samples.begin(), samples.end());
  return samples.empty() ? kInfinity : samples[samples.size() / 2];
}

void simulate_into(Evaluation& e, const DesignPoint& point, const CondensedQp& qp,
                   const FgmConfig& config, const StudyContext& ctx, double resource) {
  const ControllerFactory factory = [&]() -> std::unique_ptr<Controller> {
    return std::make_unique<MpcController>(qp, config, point.sampling_time);
  };
  const double settling =
      performance_measure(ctx.plant, factory, ctx.initial_conditions, ctx.simulation);
  e.simulated = true;
  if (!std::isfinite(settling)) {
    e.stability_ok = false;
    e.objectives = {kInfinity, kInfinity};
    return;
  }
  e.objectives = {settling, resource};
}

}  // namespace

Evaluation evaluate_cpu(const DesignPoint& point, const StudyContext& ctx) {
  require_in_space(point, ctx);
  Evaluation e;
  e.seed = ctx.seed;
  const CondensedQp qp = build_design_qp(ctx, point);
  e.condition_number = qp.spectrum.cond;
  if (!(qp.spectrum.mu > 0.0)) {
    e.stability_ok = false;
    e.timing_model = "cpu-flop-model";
    return e;
  }
  const FgmConfig config{point.fgm_iterations, std::nullopt, true};
  double seconds;
  if (ctx.wallclock_timing) {
    seconds = measure_solver_seconds(qp, config, ctx);
    e.timing_model = "wallclock";
  } else {
    seconds = ctx.cpu_time(qp.size(), point.fgm_iterations);
    e.timing_model = "cpu-flop-model";
  }
  e.solver_time = seconds;
  e.constraint_time = seconds - point.sampling_time;
  e.violation = std::pow(std::max(0.0, e.constraint_time), 2);
  simulate_into(e, point, qp, config, ctx, seconds);
  return e;
}

Evaluation evaluate_fpga(const DesignPoint& point, const StudyContext& ctx) {
  require_in_space(point, ctx);
  Evaluation e;
  e.seed = ctx.seed;
  e.timing_model = "fpga-surrogate";
  const CondensedQp qp = build_design_qp(ctx, point);
  e.condition_number = qp.spectrum.cond;

  FixedPointFormat format;
  try {
    format = derive_fixed_format(qp, point.fraction_bits, ctx.state_bound);
  } catch (const Error&) {
    e.convexity_ok = false;
    return e;
  }
  e.integer_bits = format.integer_bits;
  e.quantized_mu = quantized_hessian_mu(qp.hessian, format);
  if (!(e.quantized_mu > 0.0)) {
    // Extreme barrier: rejected before any simulation.
    e.convexity_ok = false;
    return e;
  }

  const FpgaUsage usage =
      fpga_surrogate(qp.states, qp.size(), point.fgm_iterations, format, ctx.fpga);
  const double resource = usage.measure();
  e.solver_time = usage.latency;
  e.constraint_time = usage.latency - point.sampling_time;
  e.violation = std::pow(std::max(0.0, e.constraint_time), 2);
  if (ctx.resource_constraint) e.violation += std::pow(std::max(0.0, resource - 1.0), 2);

  const FgmConfig config{point.fgm_iterations, format, true};
  simulate_into(e, point, qp, config, ctx, resource);
  return e;
}

Evaluation evaluate_design(const DesignPoint& point, const StudyContext& ctx) {
  return ctx.study == CaseStudy::Cpu ? evaluate_cpu(point, ctx) : evaluate_fpga(point, ctx);
}

}  // namespace codesign

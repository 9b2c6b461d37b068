#include "codesign/design_eval.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "codesign/errors.hpp"
#include "codesign/lhs.hpp"

namespace codesign {
namespace {

StudyContext quick_context(CaseStudy study) {
  StudyContext ctx = default_study_context(study);
  ctx.initial_conditions.resize(1);
  return ctx;
}

GTEST_TEST(DesignSpace, DefaultBounds) {
  const DesignSpace cpu = default_design_space(CaseStudy::Cpu);
  ASSERT_EQ(cpu.size(), 4u);
  EXPECT_EQ(cpu.dimensions[0].lower, 0.02);
  EXPECT_EQ(cpu.dimensions[0].upper, 0.5);
  EXPECT_FALSE(cpu.dimensions[0].integer);
  EXPECT_TRUE(cpu.dimensions[1].integer);
  EXPECT_EQ(cpu.dimensions[1].upper, 12);
  EXPECT_EQ(cpu.dimensions[2].lower, 20);
  EXPECT_EQ(cpu.dimensions[2].upper, 200);
  EXPECT_EQ(cpu.dimensions[3].lower, 0.2);
  EXPECT_EQ(cpu.dimensions[3].upper, 5.0);
  const DesignSpace fpga = default_design_space(CaseStudy::Fpga);
  ASSERT_EQ(fpga.size(), 5u);
  EXPECT_TRUE(fpga.dimensions[4].integer);
  EXPECT_EQ(fpga.dimensions[4].lower, 5);
  EXPECT_EQ(fpga.dimensions[4].upper, 25);
}

GTEST_TEST(DesignPoint, CoordinateRoundTrip) {
  const DesignPoint p{0.137, 7, 88, 2.5, 13};
  const DesignPoint q = to_design_point(CaseStudy::Fpga, to_coordinates(CaseStudy::Fpga, p));
  EXPECT_EQ(q.sampling_time, p.sampling_time);
  EXPECT_EQ(q.horizon, 7);
  EXPECT_EQ(q.fgm_iterations, 88);
  EXPECT_EQ(q.q_speed, 2.5);
  EXPECT_EQ(q.fraction_bits, 13);
  EXPECT_EQ(to_coordinates(CaseStudy::Cpu, p).size(), 4u);
  EXPECT_THROW(to_design_point(CaseStudy::Cpu, {0.1, 2, 30}), DomainError);
}

GTEST_TEST(CaseStudy, Names) {
  EXPECT_EQ(case_study_from_string(to_string(CaseStudy::Cpu)), CaseStudy::Cpu);
  EXPECT_EQ(case_study_from_string(to_string(CaseStudy::Fpga)), CaseStudy::Fpga);
  EXPECT_THROW(case_study_from_string("gpu"), ConfigError);
}

GTEST_TEST(ResourceMeasure, EuclideanNorm) {
  EXPECT_DOUBLE_EQ(resource_measure(0, 0, 0, 0), 0.0);
  EXPECT_DOUBLE_EQ(resource_measure(0.3, 0.4, 0, 0), 0.5);
  EXPECT_DOUBLE_EQ(resource_measure(1, 1, 1, 1), 2.0);
  // Between the largest fraction and twice it.
  EXPECT_GE(resource_measure(0.1, 0.7, 0.2, 0.05), 0.7);
  EXPECT_LE(resource_measure(0.1, 0.7, 0.2, 0.05), 1.4);
  EXPECT_THROW(resource_measure(-0.1, 0, 0, 0), DomainError);
}

GTEST_TEST(CpuTimeModel, CalibrationAndScaling) {
  const CpuTimeModel model = default_cpu_time_model();
  EXPECT_NEAR(model(50, 136), 0.0225, 1e-15);
  // Linear in the iteration count.
  EXPECT_NEAR(model(50, 272), 2 * model(50, 136), 1e-15);
  EXPECT_NEAR(model(30, 99), 99 * model(30, 1), 1e-15);
  // Quadratic plus linear in the decision size.
  const double per_flop = model.seconds_per_flop;
  EXPECT_NEAR(model(10, 1), (2 * 100 + 4 * 10) * per_flop, 1e-18);
  EXPECT_THROW(model(0, 10), DomainError);
}

GTEST_TEST(FpgaSurrogate, HandComputedDesign) {
  // n = 20, Nm = 50, N_FGM = 100, 16-bit words, four MAC lanes.
  const ResourceModelParams params;
  const FpgaUsage u = fpga_surrogate(20, 50, 100, FixedPointFormat{4, 12}, params);
  EXPECT_DOUBLE_EQ(u.r_dsp, 6.0 / 220);
  EXPECT_DOUBLE_EQ(u.r_bram, 2.0 / 140);  // 3770 words of 16 bits
  EXPECT_DOUBLE_EQ(u.r_lut, (600 + 12 * 16 * 6 + 20 * 19) / 53200.0);
  EXPECT_DOUBLE_EQ(u.r_ff, (800 + 16 * 16 * 6 + 10 * 19) / 106400.0);
  EXPECT_DOUBLE_EQ(u.latency, (5 * 50 + 100 * (13 * 50 + 100 + 12)) / 100e6);
}

GTEST_TEST(FpgaSurrogate, MonotoneInEveryDriver) {
  const ResourceModelParams params;
  double previous = 0.0;
  for (int f = 5; f <= 40; ++f) {
    const double r = fpga_surrogate(20, 40, 100, FixedPointFormat{6, f}, params).measure();
    EXPECT_GE(r, previous) << f << " fraction bits";
    previous = r;
  }
  double latency = 0.0;
  for (int nm = 10; nm <= 120; nm += 10) {
    const FpgaUsage u = fpga_surrogate(20, nm, 100, FixedPointFormat{6, 12}, params);
    EXPECT_GT(u.latency, latency);
    latency = u.latency;
  }
  latency = 0.0;
  for (int it = 20; it <= 200; it += 20) {
    const FpgaUsage u = fpga_surrogate(20, 50, it, FixedPointFormat{6, 12}, params);
    EXPECT_GT(u.latency, latency);
    latency = u.latency;
  }
  ResourceModelParams broken;
  broken.clock_hz = 0;
  EXPECT_THROW(fpga_surrogate(20, 50, 100, FixedPointFormat{6, 12}, broken), ConfigError);
}

GTEST_TEST(QuantizedHessianMu, DetectsLostDefiniteness) {
  const Matrix h = (Matrix(2, 2) << 1.0, 0.0, 0.0, 0.01).finished();
  EXPECT_NEAR(quantized_hessian_mu(h, FixedPointFormat{2, 20}), 0.01, 1e-6);
  EXPECT_LE(quantized_hessian_mu(h, FixedPointFormat{2, 5}), 0.0);
}

GTEST_TEST(EvaluateCpu, TimingIsAProgressiveConstraint) {
  const StudyContext ctx = quick_context(CaseStudy::Cpu);
  const Evaluation fast = evaluate_cpu({0.3, 2, 30, 1.0}, ctx);
  EXPECT_EQ(fast.timing_model, "cpu-flop-model");
  EXPECT_DOUBLE_EQ(fast.objectives[1], ctx.cpu_time(20, 30));
  EXPECT_DOUBLE_EQ(fast.constraint_time, fast.objectives[1] - 0.3);
  EXPECT_EQ(fast.violation, 0.0);

  const Evaluation slow = evaluate_cpu({0.02, 12, 200, 1.0}, ctx);
  EXPECT_GT(slow.constraint_time, 0.0);
  EXPECT_DOUBLE_EQ(slow.violation, std::pow(slow.constraint_time, 2));
  EXPECT_FALSE(slow.feasible());
}

GTEST_TEST(EvaluateCpu, DeterministicAndInsideSpace) {
  const StudyContext ctx = quick_context(CaseStudy::Cpu);
  const DesignPoint p{0.15, 4, 60, 1.5};
  const Evaluation a = evaluate_cpu(p, ctx);
  const Evaluation b = evaluate_cpu(p, ctx);
  EXPECT_EQ(a.objectives, b.objectives);
  EXPECT_EQ(a.violation, b.violation);
  EXPECT_TRUE(a.simulated);
  EXPECT_THROW(evaluate_cpu({0.01, 4, 60, 1.5}, ctx), DomainError);
  EXPECT_THROW(evaluate_cpu({0.15, 13, 60, 1.5}, ctx), DomainError);
}

GTEST_TEST(EvaluateFpga, BarrierInvariantsOnSampledDesigns) {
  const StudyContext ctx = quick_context(CaseStudy::Fpga);
  int rejected = 0;
  int simulated = 0;
  for (const auto& coordinates : lhs_sample(ctx.space, 16, 21)) {
    const DesignPoint p = to_design_point(CaseStudy::Fpga, coordinates);
    const Evaluation e = evaluate_fpga(p, ctx);
    EXPECT_EQ(e.timing_model, "fpga-surrogate");
    if (!e.convexity_ok) {
      ++rejected;
      EXPECT_FALSE(e.simulated);
      EXPECT_FALSE(e.admissible());
      EXPECT_TRUE(std::isinf(e.objectives[0]) && std::isinf(e.objectives[1]));
      if (e.integer_bits > 0) EXPECT_LE(e.quantized_mu, 0.0);
      continue;
    }
    ++simulated;
    EXPECT_GT(e.quantized_mu, 0.0);
    EXPECT_TRUE(e.simulated);
    const CondensedQp qp = build_design_qp(ctx, p);
    const FpgaUsage usage = fpga_surrogate(qp.states, qp.size(), p.fgm_iterations,
                                           FixedPointFormat{e.integer_bits, p.fraction_bits},
                                           ctx.fpga);
    if (e.admissible()) EXPECT_DOUBLE_EQ(e.objectives[1], usage.measure());
    EXPECT_DOUBLE_EQ(e.constraint_time, usage.latency - p.sampling_time);
    EXPECT_DOUBLE_EQ(e.violation, std::pow(std::max(0.0, e.constraint_time), 2));
  }
  EXPECT_EQ(rejected + simulated, 16);
}

GTEST_TEST(EvaluateDesign, DispatchesOnStudy) {
  const StudyContext cpu = quick_context(CaseStudy::Cpu);
  EXPECT_EQ(evaluate_design({0.3, 2, 30, 1.0}, cpu).timing_model, "cpu-flop-model");
  const StudyContext fpga = quick_context(CaseStudy::Fpga);
  EXPECT_EQ(evaluate_design({0.3, 2, 30, 1.0, 20}, fpga).timing_model, "fpga-surrogate");
}

}  // namespace
}  // namespace codesign

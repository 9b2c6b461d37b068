#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "codesign/config.hpp"
#include "codesign/errors.hpp"
#include "codesign/experiment.hpp"

namespace {

using namespace codesign;
namespace fs = std::filesystem;

enum ExitCode { kOk = 0, kConfigError = 1, kInfeasibleSpace = 2, kNumericalFailure = 3 };

struct RunOptions {
  std::string config;
  std::optional<int> budget;
  std::vector<std::uint64_t> seeds;
  std::string algo;
  std::string out;
  bool svg = false;
  bool wallclock = false;
};

ExperimentConfig resolve_config(const RunOptions& o, CaseStudy study) {
  ExperimentConfig config =
      o.config.empty() ? default_experiment_config(study) : load_config(o.config, study);
  if (o.budget) config.budget = *o.budget;
  if (!o.seeds.empty()) config.seeds = o.seeds;
  if (!o.algo.empty() && o.algo != "both") config.algorithms = {algorithm_from_string(o.algo)};
  if (!o.out.empty()) config.output_dir = o.out;
  if (o.wallclock) config.wallclock_timing = true;
  config.validate();
  return config;
}

int run_study(const RunOptions& o, CaseStudy study) {
  const ExperimentConfig config = resolve_config(o, study);
  const ExperimentResult result = run_experiment(config, o.svg, &std::cerr);
  if (result.reference) {
    std::cout << "reference point: " << (*result.reference)[0] << ' ' << (*result.reference)[1]
              << '\n';
  }
  for (const RunRecord& run : result.runs) {
    std::cout << to_string(run.algorithm) << " seed " << run.seed << ": "
              << run.archive.nondominated().size() << " front designs, hypervolume "
              << (result.reference ? run.archive.hypervolume(*result.reference) : 0.0) << '\n';
  }
  std::cout << "outputs written to " << config.output_dir.string() << '\n';
  if (result.infeasible_space) {
    std::cerr << "error: every evaluated design failed an extreme barrier in at least one run\n";
    return kInfeasibleSpace;
  }
  return kOk;
}

struct InspectOptions {
  std::string study = "cpu";
  std::string config;
  DesignPoint point{0.236, 5, 136, 0.2, 13};
  std::string out;
};

nlohmann::json matrix_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> row(m.cols());
    for (Eigen::Index j = 0; j < m.cols(); ++j) row[j] = m(i, j);
    rows.push_back(row);
  }
  return rows;
}

int inspect(const InspectOptions& o) {
  const CaseStudy study = case_study_from_string(o.study);
  const ExperimentConfig config =
      o.config.empty() ? default_experiment_config(study) : load_config(o.config, study);
  const StudyContext ctx = make_study_context(config);
  const Evaluation e = evaluate_design(o.point, ctx);
  std::cout << "settling_time " << e.objectives[0] << "\n"
            << (study == CaseStudy::Cpu ? "solver_time " : "r_fpga ") << e.objectives[1] << "\n"
            << "constraint_time " << e.constraint_time << "\n"
            << "violation " << e.violation << "\n"
            << "stability_ok " << e.stability_ok << "\n"
            << "convexity_ok " << e.convexity_ok << "\n"
            << "condition_number " << e.condition_number << "\n";
  if (study == CaseStudy::Fpga) {
    std::cout << "integer_bits " << e.integer_bits << "\nquantized_mu " << e.quantized_mu << "\n";
  }
  if (o.out.empty()) return kOk;

  const fs::path dir = o.out;
  fs::create_directories(dir);
  const CondensedQp qp = build_design_qp(ctx, o.point);
  nlohmann::json j;
  j["hessian"] = matrix_json(qp.hessian);
  j["state_gain"] = matrix_json(qp.state_gain);
  j["theta_min"] = std::vector<double>(qp.theta_min.data(), qp.theta_min.data() + qp.size());
  j["theta_max"] = std::vector<double>(qp.theta_max.data(), qp.theta_max.data() + qp.size());
  j["l"] = qp.spectrum.l;
  j["mu"] = qp.spectrum.mu;
  j["condition_number"] = qp.spectrum.cond;
  std::ofstream(dir / "qp.json") << j.dump(1) << '\n';

  std::optional<FixedPointFormat> format;
  if (study == CaseStudy::Fpga && e.convexity_ok) {
    format = derive_fixed_format(qp, o.point.fraction_bits, ctx.state_bound);
  }
  MpcController controller(qp, FgmConfig{o.point.fgm_iterations, format, true},
                           o.point.sampling_time);
  const Trajectory t =
      simulate(ctx.plant, controller, ctx.initial_conditions.front(), ctx.simulation);
  std::ofstream csv(dir / "trajectory.csv");
  csv << "time,norm";
  for (int i = 0; i < ctx.plant.states(); ++i) csv << ",x" << i;
  csv << '\n';
  for (std::size_t k = 0; k < t.times.size(); ++k) {
    csv << t.times[k] << ',' << t.states[k].norm();
    for (Eigen::Index i = 0; i < t.states[k].size(); ++i) csv << ',' << t.states[k](i);
    csv << '\n';
  }
  std::cout << "wrote " << (dir / "qp.json").string() << " and "
            << (dir / "trajectory.csv").string() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Co-design of fast-gradient MPC controllers by bi-objective direct search"};
  app.require_subcommand(1);

  RunOptions run;
  auto add_run_options = [&run](CLI::App* sub) {
    sub->add_option("--config", run.config, "JSON experiment configuration")
        ->check(CLI::ExistingFile);
    sub->add_option("--budget", run.budget, "Evaluations per run (>= 10)");
    sub->add_option("--seed", run.seeds, "Seed (repeat for several runs)");
    sub->add_option("--algo", run.algo, "Algorithm")
        ->check(CLI::IsMember({"bimads", "lhs", "both"}));
    sub->add_option("--out", run.out, "Output directory");
    sub->add_flag("--svg", run.svg, "Also write SVG fronts and hypervolume profiles");
    sub->add_flag("--wallclock-timing", run.wallclock,
                  "CPU study: measure solver time instead of the flop model (not reproducible)");
  };
  CLI::App* run_cpu = app.add_subcommand("run-cpu", "Optimize the CPU implementation");
  CLI::App* run_fpga = app.add_subcommand("run-fpga", "Optimize the FPGA implementation");
  add_run_options(run_cpu);
  add_run_options(run_fpga);

  std::string run_a, run_b, compare_out = "compare";
  CLI::App* compare = app.add_subcommand("compare", "Compare two run directories");
  compare->add_option("run_a", run_a, "First run directory")->required();
  compare->add_option("run_b", run_b, "Second run directory")->required();
  compare->add_option("--out", compare_out, "Directory for compare.csv and summary.txt");

  std::string report_dir;
  bool report_svg = false;
  CLI::App* report = app.add_subcommand("report", "Summarize every run in a directory");
  report->add_option("dir", report_dir, "Output directory of run-cpu or run-fpga")->required();
  report->add_flag("--svg", report_svg, "Write SVG fronts and hypervolume profiles");

  InspectOptions ins;
  CLI::App* inspect_cmd = app.add_subcommand("inspect", "Evaluate one design and dump its QP");
  inspect_cmd->add_option("--study", ins.study, "cpu or fpga")
      ->check(CLI::IsMember({"cpu", "fpga"}));
  inspect_cmd->add_option("--config", ins.config, "JSON experiment configuration")
      ->check(CLI::ExistingFile);
  inspect_cmd->add_option("--ts", ins.point.sampling_time, "Sampling time [s]");
  inspect_cmd->add_option("--horizon", ins.point.horizon, "Prediction horizon N");
  inspect_cmd->add_option("--iterations", ins.point.fgm_iterations, "FGM iterations N_FGM");
  inspect_cmd->add_option("--q-speed", ins.point.q_speed, "Velocity weight ratio");
  inspect_cmd->add_option("--frac-bits", ins.point.fraction_bits, "Fraction bits N_frac");
  inspect_cmd->add_option("--out", ins.out, "Directory for qp.json and trajectory.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (run_cpu->parsed()) return run_study(run, CaseStudy::Cpu);
    if (run_fpga->parsed()) return run_study(run, CaseStudy::Fpga);
    if (compare->parsed()) {
      const Comparison c = compare_runs(run_a, run_b, compare_out);
      std::cout << "hypervolume A " << c.hypervolume_a << ", B " << c.hypervolume_b
                << "; dominated A " << c.a_dominated_by_b << ", B " << c.b_dominated_by_a
                << '\n';
      return kOk;
    }
    if (report->parsed()) {
      std::cout << write_report(report_dir, report_svg);
      return kOk;
    }
    if (inspect_cmd->parsed()) return inspect(ins);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const InfeasibleSpaceError& e) {
    std::cerr << "infeasible design space: " << e.what() << '\n';
    return kInfeasibleSpace;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
  return kOk;
}

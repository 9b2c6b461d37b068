#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "codesign/bimads.hpp"
#include "codesign/closed_loop.hpp"
#include "codesign/design_eval.hpp"
#include "codesign/plant_model.hpp"

namespace codesign {

enum class Algorithm { Bimads, Lhs };

std::string to_string(Algorithm algorithm);
Algorithm algorithm_from_string(const std::string& name);

/// Calibration of the CPU flop model: the reference design takes `seconds`.
struct CpuTimingConfig {
  int reference_decision_size = 50;
  int reference_iterations = 136;
  double reference_seconds = 0.0225;
  double linear_coefficient = 4.0;
};

/**
 * One experiment: a case study, the search settings and everything the
 * evaluator depends on. Loaded from a JSON file whose sections mirror the
 * fields below; every key is optional and unknown keys are rejected.
 */
struct ExperimentConfig {
  CaseStudy case_study = CaseStudy::Cpu;
  int budget = 200;
  std::vector<std::uint64_t> seeds{1};
  std::vector<Algorithm> algorithms{Algorithm::Bimads, Algorithm::Lhs};

  DesignSpace space = default_design_space(CaseStudy::Cpu);
  SimulationConfig simulation;
  InitialConditionLayout initial_condition_layout = InitialConditionLayout::Columns;
  /// Use only the first `initial_condition_count` conditions; 0 keeps all.
  int initial_condition_count = 0;

  MassSpringChain plant = default_mass_spring_chain();
  double u_min = -1.0;
  double u_max = 1.0;
  double state_bound = 1.0;

  CpuTimingConfig cpu_timing;
  bool wallclock_timing = false;
  ResourceModelParams fpga;
  bool resource_constraint = false;

  double bootstrap_fraction = 0.1;
  int sub_budget = 15;
  double initial_mesh_fraction = 0.25;
  double min_mesh_ratio = 1e-6;
  /// Every extreme_period-th guided run extends a front end; 0 disables.
  int extreme_period = 3;

  std::filesystem::path output_dir = "out";

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Defaults for a study: its design space and settling threshold.
ExperimentConfig default_experiment_config(CaseStudy study);

/**
 * Parses JSON text. The study comes from `case_study` in the text, else from
 * `expected`, else CPU; a text naming a different study than `expected` is
 * rejected.
 */
ExperimentConfig parse_config(const std::string& text, const std::string& source = "<config>",
                              std::optional<CaseStudy> expected = std::nullopt);

/// Reads and parses a config file; throws ConfigError with line or field information.
ExperimentConfig load_config(const std::filesystem::path& path,
                             std::optional<CaseStudy> expected = std::nullopt);

/// Canonical JSON (sorted keys, fixed formatting) of every field.
std::string canonical_json(const ExperimentConfig& config);

/// 64-bit FNV-1a of the canonical JSON, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

/// Evaluator context for the configured study.
StudyContext make_study_context(const ExperimentConfig& config, std::uint64_t seed = 0);

}  // namespace codesign

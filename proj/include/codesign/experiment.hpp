#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "codesign/config.hpp"
#include "codesign/pareto.hpp"

namespace codesign {

/// Bumped whenever a CSV header or the manifest layout changes.
inline constexpr int kSchemaVersion = 1;

struct RunRecord {
  CaseStudy study = CaseStudy::Cpu;
  Algorithm algorithm = Algorithm::Bimads;
  std::uint64_t seed = 0;
  ParetoArchive archive;
  /// Every evaluated design failed an extreme barrier.
  bool infeasible_space = false;
};

/// Runs one algorithm with one seed; nothing is written.
RunRecord execute_run(const ExperimentConfig& config, Algorithm algorithm, std::uint64_t seed);

/// `<out>/<algorithm>_seed<seed>`.
std::filesystem::path run_directory(const std::filesystem::path& out, Algorithm algorithm,
                                    std::uint64_t seed);

/// Column names of the evaluation log for a study.
std::vector<std::string> evaluation_columns(CaseStudy study, bool wall_time);

/**
 * Writes evaluations.csv, hypervolume.csv, pareto.csv and manifest.json into
 * `dir`. The hypervolume profile uses `reference` (none: empty profile).
 */
void write_run(const std::filesystem::path& dir, const ExperimentConfig& config,
               const RunRecord& run, const std::optional<Objectives>& reference);

struct ExperimentResult {
  std::vector<RunRecord> runs;
  std::optional<Objectives> reference;
  bool infeasible_space = false;
};

/**
 * Every configured (algorithm, seed) pair, written under config.output_dir
 * together with summary.csv. All runs share one reporting reference point.
 * `log` (optional) receives one progress line per run.
 */
ExperimentResult run_experiment(const ExperimentConfig& config, bool svg, std::ostream* log);

/// A run read back from its directory.
struct LoadedRun {
  std::filesystem::path dir;
  CaseStudy study = CaseStudy::Cpu;
  Algorithm algorithm = Algorithm::Bimads;
  std::uint64_t seed = 0;
  ParetoArchive archive;
};

/// Throws ConfigError when the directory does not hold a readable run.
LoadedRun load_run(const std::filesystem::path& dir);

struct Comparison {
  Objectives reference{0.0, 0.0};
  double hypervolume_a = 0.0;
  double hypervolume_b = 0.0;
  std::size_t front_a = 0;
  std::size_t front_b = 0;
  /// Share of A's front strongly dominated by some point of B's front.
  double a_dominated_by_b = 0.0;
  double b_dominated_by_a = 0.0;
};

/// Share of `front` strongly dominated by at least one point of `other`.
double dominated_fraction(const std::vector<Objectives>& front,
                          const std::vector<Objectives>& other);

/// Joint reference point, hypervolumes and dominance shares; throws DomainError without feasible points.
Comparison compare_archives(const ParetoArchive& a, const ParetoArchive& b);

/// Writes compare.csv and summary.txt into `out`; refuses runs of different case studies.
Comparison compare_runs(const std::filesystem::path& run_a, const std::filesystem::path& run_b,
                        const std::filesystem::path& out);

/**
 * Scans `dir` for run directories, recomputes a joint reference point per
 * seed and writes report.csv and report.txt (plus fronts and profiles as SVG
 * when requested). Returns the text summary.
 */
std::string write_report(const std::filesystem::path& dir, bool svg);

}  // namespace codesign

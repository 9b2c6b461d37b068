#include "codesign/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "codesign/errors.hpp"
#include "codesign/svg.hpp"

namespace codesign {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

std::string second_objective_name(CaseStudy study) {
  return study == CaseStudy::Cpu ? "solver_time" : "r_fpga";
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(path.string() + ": cannot write output file");
  out << text;
  if (!out) throw ConfigError(path.string() + ": write failed");
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": cannot open");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void append_point(std::ostringstream& out, const DesignSpace& space,
                  const std::vector<double>& point) {
  for (std::size_t j = 0; j < point.size(); ++j) {
    if (j) out << ',';
    if (space.dimensions[j].integer) {
      out << static_cast<long long>(std::llround(point[j]));
    } else {
      out << fmt(point[j]);
    }
  }
}

std::string evaluations_csv(const ExperimentConfig& config, const RunRecord& run) {
  std::ostringstream out;
  const auto columns = evaluation_columns(run.study, config.wallclock_timing);
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
  const auto& front = run.archive.nondominated();
  for (std::size_t i = 0; i < run.archive.size(); ++i) {
    const ArchiveEntry& entry = run.archive[i];
    const Evaluation& e = entry.evaluation;
    const bool on_front = std::find(front.begin(), front.end(), i) != front.end();
    out << i << ',';
    append_point(out, config.space, entry.point);
    out << ',' << fmt(e.objectives[0]) << ',' << fmt(e.objectives[1]) << ','
        << fmt(e.constraint_time) << ',' << fmt(e.violation) << ',' << e.stability_ok << ','
        << e.convexity_ok << ',' << e.simulated << ',' << e.feasible() << ',' << on_front << ','
        << fmt(e.solver_time) << ',' << fmt(e.condition_number) << ',' << fmt(e.quantized_mu)
        << ',' << e.integer_bits << ',' << e.timing_model << ',' << e.seed;
    if (config.wallclock_timing) out << ',' << fmt(e.wall_seconds);
    out << '\n';
  }
  return out.str();
}

std::string pareto_csv(const ExperimentConfig& config, const RunRecord& run) {
  std::vector<std::size_t> order = run.archive.nondominated();
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return run.archive[a].evaluation.objectives[0] < run.archive[b].evaluation.objectives[0];
  });
  std::ostringstream out;
  out << "evaluation";
  for (const Dimension& d : config.space.dimensions) out << ',' << d.name;
  out << ",settling_time," << second_objective_name(run.study) << ",constraint_time\n";
  for (std::size_t i : order) {
    const ArchiveEntry& entry = run.archive[i];
    out << i << ',';
    append_point(out, config.space, entry.point);
    out << ',' << fmt(entry.evaluation.objectives[0]) << ','
        << fmt(entry.evaluation.objectives[1]) << ',' << fmt(entry.evaluation.constraint_time)
        << '\n';
  }
  return out.str();
}

std::string hypervolume_csv(const RunRecord& run, const std::optional<Objectives>& reference) {
  std::ostringstream out;
  out << "evaluation,hypervolume\n";
  if (!reference) return out.str();
  const auto profile = run.archive.hypervolume_profile(*reference);
  for (std::size_t i = 0; i < profile.size(); ++i) out << i + 1 << ',' << fmt(profile[i]) << '\n';
  return out.str();
}

json reference_json(const std::optional<Objectives>& reference) {
  if (!reference) return nullptr;
  return json::array({(*reference)[0], (*reference)[1]});
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& text, const fs::path& file) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str()) throw ConfigError(file.string() + ": bad number '" + text + "'");
  return v;
}

std::vector<svg::Series> front_series(const std::vector<const RunRecord*>& runs) {
  static const char* colors[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd"};
  std::vector<svg::Series> series;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    svg::Series s;
    s.label = to_string(runs[k]->algorithm) + " seed " + std::to_string(runs[k]->seed);
    s.color = colors[k % 4];
    for (const Objectives& y : runs[k]->archive.front()) s.points.push_back({y[1], y[0]});
    series.push_back(std::move(s));
  }
  return series;
}

std::vector<svg::Series> profile_series(const std::vector<const RunRecord*>& runs,
                                        const Objectives& reference) {
  static const char* colors[] = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd"};
  std::vector<svg::Series> series;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    svg::Series s;
    s.label = to_string(runs[k]->algorithm) + " seed " + std::to_string(runs[k]->seed);
    s.color = colors[k % 4];
    s.line = true;
    const auto profile = runs[k]->archive.hypervolume_profile(reference);
    for (std::size_t i = 0; i < profile.size(); ++i) {
      s.points.push_back({static_cast<double>(i + 1), profile[i]});
    }
    series.push_back(std::move(s));
  }
  return series;
}

void write_svgs(const fs::path& dir, CaseStudy study, std::uint64_t seed,
                const std::vector<const RunRecord*>& runs, const Objectives& reference) {
  const std::string x = study == CaseStudy::Cpu ? "Algorithm time [s]" : "R_FPGA";
  const std::string tag = to_string(study) + " seed " + std::to_string(seed);
  write_file(dir / ("fronts_seed" + std::to_string(seed) + ".svg"),
             svg::render_plot(front_series(runs),
                              {"Pareto fronts (" + tag + ")", x, "Settling time [s]"}));
  write_file(dir / ("profiles_seed" + std::to_string(seed) + ".svg"),
             svg::render_plot(profile_series(runs, reference),
                              {"Hypervolume profiles (" + tag + ")", "Evaluations",
                               "Hypervolume"}));
}

}  // namespace

std::vector<std::string> evaluation_columns(CaseStudy study, bool wall_time) {
  std::vector<std::string> columns{"evaluation"};
  for (const Dimension& d : default_design_space(study).dimensions) columns.push_back(d.name);
  const bool cpu = study == CaseStudy::Cpu;
  columns.insert(columns.end(),
                 {"settling_time", second_objective_name(study), "constraint_time", "violation",
                  "stability_ok", "convexity_ok", "simulated", "feasible", "nondominated",
                  cpu ? "modelled_time" : "latency", "condition_number", "quantized_mu",
                  "integer_bits", "timing_model", "seed"});
  if (wall_time) columns.push_back("wall_time");
  return columns;
}

RunRecord execute_run(const ExperimentConfig& config, Algorithm algorithm, std::uint64_t seed) {
  const StudyContext ctx = make_study_context(config, seed);
  const CaseStudy study = config.case_study;
  const bool timed = config.wallclock_timing;
  const Evaluator evaluator = [&ctx, study, timed](const std::vector<double>& x) {
    const auto start = std::chrono::steady_clock::now();
    Evaluation e;
    try {
      e = evaluate_design(to_design_point(study, x), ctx);
    } catch (const DivergenceError&) {
      e = Evaluation{};
      e.stability_ok = false;
    }
    e.seed = ctx.seed;
    if (timed) {
      e.wall_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    return e;
  };

  RunRecord run;
  run.study = study;
  run.algorithm = algorithm;
  run.seed = seed;
  if (algorithm == Algorithm::Bimads) {
    BimadsOptions options;
    options.budget = config.budget;
    options.bootstrap_fraction = config.bootstrap_fraction;
    options.sub_budget = config.sub_budget;
    options.extreme_period = config.extreme_period;
    options.initial_mesh_fraction = config.initial_mesh_fraction;
    options.seed = seed;
    options.mads.min_mesh_ratio = config.min_mesh_ratio;
    BimadsResult result = bimads(config.space, evaluator, options);
    run.archive = std::move(result.archive);
    run.infeasible_space = result.infeasible_space;
  } else {
    run.archive = lhs_run(config.space, evaluator, config.budget, seed);
    run.infeasible_space = !run.archive.has_admissible();
  }
  return run;
}

fs::path run_directory(const fs::path& out, Algorithm algorithm, std::uint64_t seed) {
  return out / (to_string(algorithm) + "_seed" + std::to_string(seed));
}

void write_run(const fs::path& dir, const ExperimentConfig& config, const RunRecord& run,
               const std::optional<Objectives>& reference) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError(dir.string() + ": cannot create output directory");
  write_file(dir / "evaluations.csv", evaluations_csv(config, run));
  write_file(dir / "hypervolume.csv", hypervolume_csv(run, reference));
  write_file(dir / "pareto.csv", pareto_csv(config, run));

  json manifest;
  manifest["schema_version"] = kSchemaVersion;
  manifest["case_study"] = to_string(run.study);
  manifest["algorithm"] = to_string(run.algorithm);
  manifest["seed"] = run.seed;
  manifest["budget"] = config.budget;
  manifest["evaluations"] = run.archive.size();
  manifest["front_size"] = run.archive.nondominated().size();
  manifest["infeasible_space"] = run.infeasible_space;
  manifest["reference"] = reference_json(reference);
  manifest["hypervolume"] = reference ? json(run.archive.hypervolume(*reference)) : json(nullptr);
  manifest["config_hash"] = config_hash(config);
  manifest["config"] = json::parse(canonical_json(config));
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

ExperimentResult run_experiment(const ExperimentConfig& config, bool svg, std::ostream* log) {
  config.validate();
  ExperimentResult result;
  for (std::uint64_t seed : config.seeds) {
    for (Algorithm algorithm : config.algorithms) {
      const auto start = std::chrono::steady_clock::now();
      result.runs.push_back(execute_run(config, algorithm, seed));
      const RunRecord& run = result.runs.back();
      result.infeasible_space = result.infeasible_space || run.infeasible_space;
      if (log) {
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        *log << to_string(config.case_study) << ' ' << to_string(algorithm) << " seed " << seed
             << ": " << run.archive.size() << " evaluations, front of "
             << run.archive.nondominated().size() << " designs (" << std::lround(seconds * 10) / 10.0 << " s)\n";
      }
    }
  }

  std::vector<const ParetoArchive*> archives;
  for (const RunRecord& run : result.runs) archives.push_back(&run.archive);
  result.reference = reporting_reference(archives);

  std::ostringstream summary;
  summary << "algorithm,seed,evaluations,front_size,hypervolume\n";
  for (const RunRecord& run : result.runs) {
    write_run(run_directory(config.output_dir, run.algorithm, run.seed), config, run,
              result.reference);
    summary << to_string(run.algorithm) << ',' << run.seed << ',' << run.archive.size() << ','
            << run.archive.nondominated().size() << ','
            << (result.reference ? fmt(run.archive.hypervolume(*result.reference)) : "nan")
            << '\n';
  }
  write_file(config.output_dir / "summary.csv", summary.str());

  if (svg && result.reference) {
    for (std::uint64_t seed : config.seeds) {
      std::vector<const RunRecord*> runs;
      for (const RunRecord& run : result.runs) {
        if (run.seed == seed) runs.push_back(&run);
      }
      write_svgs(config.output_dir, config.case_study, seed, runs, *result.reference);
    }
  }
  return result;
}

LoadedRun load_run(const fs::path& dir) {
  LoadedRun run;
  run.dir = dir;
  json manifest;
  try {
    manifest = json::parse(read_file(dir / "manifest.json"));
    run.study = case_study_from_string(manifest.at("case_study").get<std::string>());
    run.algorithm = algorithm_from_string(manifest.at("algorithm").get<std::string>());
    run.seed = manifest.at("seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw ConfigError((dir / "manifest.json").string() + ": malformed manifest");
  }

  const fs::path file = dir / "evaluations.csv";
  std::istringstream in(read_file(file));
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(file.string() + ": empty log");
  const std::vector<std::string> header = split(line);
  auto column = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw ConfigError(file.string() + ": missing column " + name);
    return static_cast<std::size_t>(it - header.begin());
  };
  const DesignSpace space = default_design_space(run.study);
  std::vector<std::size_t> point_columns;
  for (const Dimension& d : space.dimensions) point_columns.push_back(column(d.name));
  const std::size_t f1 = column("settling_time");
  const std::size_t f2 = column(second_objective_name(run.study));
  const std::size_t ct = column("constraint_time");
  const std::size_t viol = column("violation");
  const std::size_t stab = column("stability_ok");
  const std::size_t conv = column("convexity_ok");
  const std::size_t sim = column("simulated");

  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != header.size()) {
      throw ConfigError(file.string() + ":" + std::to_string(row) + ": wrong field count");
    }
    std::vector<double> point;
    for (std::size_t c : point_columns) point.push_back(parse_double(fields[c], file));
    Evaluation e;
    e.objectives = {parse_double(fields[f1], file), parse_double(fields[f2], file)};
    e.constraint_time = parse_double(fields[ct], file);
    e.violation = parse_double(fields[viol], file);
    e.stability_ok = fields[stab] == "1";
    e.convexity_ok = fields[conv] == "1";
    e.simulated = fields[sim] == "1";
    run.archive.add(std::move(point), e);
  }
  return run;
}

double dominated_fraction(const std::vector<Objectives>& front,
                          const std::vector<Objectives>& other) {
  if (front.empty()) return 0.0;
  std::size_t count = 0;
  for (const Objectives& y : front) {
    if (std::any_of(other.begin(), other.end(),
                    [&](const Objectives& z) { return strongly_dominates(z, y); })) {
      ++count;
    }
  }
  return static_cast<double>(count) / static_cast<double>(front.size());
}

Comparison compare_archives(const ParetoArchive& a, const ParetoArchive& b) {
  const ParetoArchive* both[] = {&a, &b};
  const auto reference = reporting_reference(both);
  if (!reference) throw DomainError("neither run contains a feasible design");
  Comparison c;
  c.reference = *reference;
  c.hypervolume_a = a.hypervolume(c.reference);
  c.hypervolume_b = b.hypervolume(c.reference);
  const auto front_a = a.front();
  const auto front_b = b.front();
  c.front_a = front_a.size();
  c.front_b = front_b.size();
  c.a_dominated_by_b = dominated_fraction(front_a, front_b);
  c.b_dominated_by_a = dominated_fraction(front_b, front_a);
  return c;
}

Comparison compare_runs(const fs::path& run_a, const fs::path& run_b, const fs::path& out) {
  const LoadedRun a = load_run(run_a);
  const LoadedRun b = load_run(run_b);
  if (a.study != b.study) {
    throw ConfigError("cannot compare a " + to_string(a.study) + " run with a " +
                      to_string(b.study) + " run");
  }
  const Comparison c = compare_archives(a.archive, b.archive);

  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw ConfigError(out.string() + ": cannot create output directory");
  std::ostringstream csv;
  csv << "run,algorithm,seed,front_size,hypervolume,dominated_fraction,reference_f1,"
         "reference_f2\n";
  csv << "A," << to_string(a.algorithm) << ',' << a.seed << ',' << c.front_a << ','
      << fmt(c.hypervolume_a) << ',' << fmt(c.a_dominated_by_b) << ',' << fmt(c.reference[0])
      << ',' << fmt(c.reference[1]) << '\n';
  csv << "B," << to_string(b.algorithm) << ',' << b.seed << ',' << c.front_b << ','
      << fmt(c.hypervolume_b) << ',' << fmt(c.b_dominated_by_a) << ',' << fmt(c.reference[0])
      << ',' << fmt(c.reference[1]) << '\n';
  write_file(out / "compare.csv", csv.str());

  std::ostringstream text;
  text << "Case study: " << to_string(a.study) << "\n"
       << "Reference point: (" << fmt(c.reference[0]) << ", " << fmt(c.reference[1]) << ")\n"
       << "A = " << run_a.string() << ": hypervolume " << fmt(c.hypervolume_a) << ", "
       << c.front_a << " front designs, " << fmt(100.0 * c.a_dominated_by_b)
       << "% dominated by B\n"
       << "B = " << run_b.string() << ": hypervolume " << fmt(c.hypervolume_b) << ", "
       << c.front_b << " front designs, " << fmt(100.0 * c.b_dominated_by_a)
       << "% dominated by A\n"
       << "Verdict: "
       << (c.hypervolume_a > c.hypervolume_b   ? "A has the larger hypervolume"
           : c.hypervolume_a < c.hypervolume_b ? "B has the larger hypervolume"
                                               : "equal hypervolumes")
       << "\n";
  write_file(out / "summary.txt", text.str());
  return c;
}

std::string write_report(const fs::path& dir, bool svg) {
  std::vector<LoadedRun> runs;
  std::vector<fs::path> candidates;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_directory() && fs::exists(entry.path() / "manifest.json")) {
      candidates.push_back(entry.path());
    }
  }
  std::sort(candidates.begin(), candidates.end());
  for (const fs::path& p : candidates) runs.push_back(load_run(p));
  if (runs.empty()) throw ConfigError(dir.string() + ": no run directories found");
  for (const LoadedRun& run : runs) {
    if (run.study != runs.front().study) {
      throw ConfigError(dir.string() + ": runs of different case studies");
    }
  }
  const CaseStudy study = runs.front().study;

  std::map<std::uint64_t, std::vector<const LoadedRun*>> by_seed;
  for (const LoadedRun& run : runs) by_seed[run.seed].push_back(&run);

  std::ostringstream csv, text;
  csv << "seed,algorithm,evaluations,front_size,hypervolume,reference_f1,reference_f2\n";
  text << "Case study: " << to_string(study) << "\n";
  int bimads_wins = 0, paired = 0;
  for (const auto& [seed, group] : by_seed) {
    std::vector<const ParetoArchive*> archives;
    for (const LoadedRun* run : group) archives.push_back(&run->archive);
    const auto reference = reporting_reference(archives);
    std::map<Algorithm, double> hv;
    for (const LoadedRun* run : group) {
      const double h = reference ? run->archive.hypervolume(*reference) : 0.0;
      hv[run->algorithm] = h;
      csv << seed << ',' << to_string(run->algorithm) << ',' << run->archive.size() << ','
          << run->archive.nondominated().size() << ',' << fmt(h) << ','
          << (reference ? fmt((*reference)[0]) : "nan") << ','
          << (reference ? fmt((*reference)[1]) : "nan") << '\n';
      text << "seed " << seed << ' ' << to_string(run->algorithm) << ": hypervolume " << fmt(h)
           << ", front " << run->archive.nondominated().size() << "\n";
    }
    if (hv.count(Algorithm::Bimads) && hv.count(Algorithm::Lhs)) {
      ++paired;
      if (hv[Algorithm::Bimads] >= hv[Algorithm::Lhs]) ++bimads_wins;
    }
    if (svg && reference) {
      std::vector<RunRecord> records;
      for (const LoadedRun* run : group) {
        records.push_back({run->study, run->algorithm, run->seed, run->archive, false});
      }
      std::vector<const RunRecord*> pointers;
      for (const RunRecord& r : records) pointers.push_back(&r);
      write_svgs(dir, study, seed, pointers, *reference);
    }
  }
  if (paired > 0) {
    text << "BiMADS hypervolume >= LHS hypervolume on " << bimads_wins << " of " << paired
         << " seeds\n";
  }
  write_file(dir / "report.csv", csv.str());
  write_file(dir / "report.txt", text.str());
  return text.str();
}

}  // namespace codesign

// Acceptance suite: one PASS/FAIL line per criterion. Run with criterion
// numbers as arguments to select a subset (default: all).

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "codesign/bimads.hpp"
#include "codesign/design_eval.hpp"
#include "codesign/experiment.hpp"
#include "codesign/fgm.hpp"
#include "codesign/lhs.hpp"
#include "codesign/ocp.hpp"
#include "codesign/pareto.hpp"
#include "codesign/plant_model.hpp"
#include "oracles/fixtures.hpp"
#include "oracles/oracles.hpp"

namespace codesign::acceptance {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string format(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buffer[256];
  std::snprintf(buffer, sizeof buffer, pattern, a, b, c);
  return buffer;
}

// 1. FGM against projected gradient on random box QPs.
Outcome solver_correctness() {
  constexpr int kProblems = 50;
  constexpr double kTolerance = 1e-6;
  constexpr double kSeconds = 30.0;
  const auto start = Clock::now();
  double worst = 0.0;
  for (int k = 0; k < kProblems; ++k) {
    const int dim = 1 + k % 20;
    const double cond = 1.0 + 99.0 * static_cast<double>(k % 10) / 9.0;
    const auto p = fixtures::random_box_qp(dim, cond, 1000 + k);
    const Vector theta = solve(p.qp, p.x_hat, Vector::Zero(dim), FgmConfig{2000}).theta;
    const Vector oracle = oracles::projected_gradient(p.qp.hessian, p.x_hat, p.qp.theta_min,
                                                      p.qp.theta_max);
    worst = std::max(worst, (theta - oracle).lpNorm<Eigen::Infinity>());
  }
  const double elapsed = seconds_since(start);
  return {worst <= kTolerance && elapsed <= kSeconds,
          format("max inf-norm error %.3g over 50 QPs (tol 1e-6), %.2f s (limit 30 s)", worst,
                 elapsed)};
}

// 2. Condensed minimizer against the sparse KKT solution.
Outcome condensing_equivalence() {
  constexpr int kProblems = 20;
  constexpr double kTolerance = 1e-8;
  constexpr double kSeconds = 10.0;
  const auto start = Clock::now();
  double worst = 0.0;
  for (int k = 0; k < kProblems; ++k) {
    const int n = 2 + k % 4, m = 1 + k % 3, horizon = 1 + k % 6;
    const auto r = fixtures::random_ocp(n, m, horizon, 2000 + k);
    const CondensedQp qp = condense(r.ocp);
    const Vector condensed = qp.hessian.ldlt().solve(-qp.linear_term(r.x0));
    const auto& c = r.ocp.cost;
    const Vector sparse = oracles::sparse_kkt_inputs(r.ocp.model.a, r.ocp.model.b, c.q, c.r, c.w,
                                                     c.p, horizon, r.x0);
    worst = std::max(worst, (condensed - sparse).lpNorm<Eigen::Infinity>());
  }
  const double elapsed = seconds_since(start);
  return {worst <= kTolerance && elapsed <= kSeconds,
          format("max inf-norm error %.3g over 20 OCPs (tol 1e-8), %.2f s (limit 10 s)", worst,
                 elapsed)};
}

// 3. ZOH model and sampled cost against integration and quadrature.
Outcome discretization() {
  constexpr double kTolerance = 1e-6;
  constexpr double kSeconds = 10.0;
  const auto start = Clock::now();
  const ContinuousLinearModel plant = build_mass_spring_chain(default_mass_spring_chain());
  const OcpWeights weights = build_weights(1.0, plant.states(), plant.inputs());
  const int n = plant.states();
  const int m = plant.inputs();
  auto relative = [](const Matrix& a, const Matrix& b) { return (a - b).norm() / b.norm(); };
  double worst = 0.0;
  for (double ts : {0.02, 0.236, 0.5}) {
    const DiscreteLinearModel d = discretize_zoh(plant, ts);
    const oracles::ZohState flow = oracles::integrate_zoh(plant.a, plant.b, ts, 2000);
    worst = std::max({worst, relative(d.a, flow.phi), relative(d.b, flow.gamma)});
    const DiscreteCost cost = discretize_cost(weights, plant, ts);
    const Matrix block =
        oracles::simpson_cost(plant.a, plant.b, weights.q, weights.r, weights.w, ts, 2000);
    worst = std::max({worst, relative(cost.q, block.topLeftCorner(n, n)),
                      relative(cost.r, block.bottomRightCorner(m, m)),
                      relative(cost.w, block.topRightCorner(n, m))});
  }
  const double elapsed = seconds_since(start);
  return {worst <= kTolerance && elapsed <= kSeconds,
          format("max relative error %.3g at Ts in {0.02, 0.236, 0.5} (tol 1e-6), %.2f s "
                 "(limit 10 s)",
                 worst, elapsed)};
}

// 4. Sweep-line hypervolume against Monte Carlo.
Outcome hypervolume() {
  constexpr double kTolerance = 0.01;
  constexpr double kSeconds = 20.0;
  const auto start = Clock::now();
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    std::mt19937_64 rng(3000 + k);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Objectives> points;
    std::vector<std::array<double, 2>> raw;
    for (int i = 0; i < 50; ++i) {
      // Points near a convex curve so that many are mutually nondominated.
      const double a = u(rng);
      const Objectives y{a, (1.0 - std::sqrt(a)) + 0.2 * u(rng)};
      points.push_back(y);
      raw.push_back({y[0], y[1]});
    }
    const double exact = hypervolume_2d(points, {1.1, 1.3});
    const double mc = oracles::monte_carlo_hypervolume(raw, {1.1, 1.3}, 1000000, 4000 + k);
    worst = std::max(worst, std::abs(exact - mc) / exact);
  }
  const double elapsed = seconds_since(start);
  return {worst <= kTolerance && elapsed <= kSeconds,
          format("max relative deviation %.3g over 10 fronts (tol 0.01), %.2f s (limit 20 s)",
                 worst, elapsed)};
}

// 5. Condition number trends over horizon and sampling time.
Outcome condition_number_trend() {
  constexpr double kSeconds = 10.0;
  const auto start = Clock::now();
  const ContinuousLinearModel plant = build_mass_spring_chain(default_mass_spring_chain());
  const OcpWeights weights = build_weights(0.2, plant.states(), plant.inputs());
  const Vector lo = -Vector::Ones(plant.inputs());
  const Vector hi = Vector::Ones(plant.inputs());
  auto cond = [&](double ts, int horizon) {
    return condense(make_ocp(plant, weights, ts, horizon, lo, hi)).spectrum.cond;
  };
  const double long_horizon = cond(0.1, 12);
  const double short_horizon = cond(0.1, 2);
  double low = kInfinity, high = 0.0;
  for (int i = 0; i <= 24; ++i) {
    const double c = cond(0.02 + 0.02 * i, 4);
    low = std::min(low, c);
    high = std::max(high, c);
  }
  const double elapsed = seconds_since(start);
  const bool pass = long_horizon > short_horizon && high > 2.0 * low && elapsed <= kSeconds;
  return {pass, format("cond(N=12)/cond(N=2) = %.3g (need > 1), cond spread over Ts at N=4 = "
                       "%.3gx (need > 2), %.2f s",
                       long_horizon / short_horizon, high / low, elapsed)};
}

// 6. BiMADS against LHS on both studies.
Outcome bimads_versus_lhs() {
  constexpr int kBudget = 200;
  constexpr int kInitialConditions = 3;
  constexpr int kRequiredWins = 4;
  constexpr double kSecondsPerStudy = 15 * 60.0;
  bool pass = true;
  std::ostringstream detail;
  for (CaseStudy study : {CaseStudy::Cpu, CaseStudy::Fpga}) {
    const auto start = Clock::now();
    ExperimentConfig config = default_experiment_config(study);
    config.budget = kBudget;
    config.initial_condition_count = kInitialConditions;
    int wins = 0;
    bool monotone = true;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const RunRecord guided = execute_run(config, Algorithm::Bimads, seed);
      const RunRecord sampled = execute_run(config, Algorithm::Lhs, seed);
      const std::vector<const ParetoArchive*> both{&guided.archive, &sampled.archive};
      const auto reference = reporting_reference(both);
      if (!reference) continue;
      for (const RunRecord* run : {&guided, &sampled}) {
        const auto profile = run->archive.hypervolume_profile(*reference);
        for (std::size_t i = 1; i < profile.size(); ++i) monotone = monotone && profile[i] >= profile[i - 1];
      }
      const double hv_guided = guided.archive.hypervolume(*reference);
      const double hv_sampled = sampled.archive.hypervolume(*reference);
      if (hv_guided >= hv_sampled) ++wins;
      std::cerr << to_string(study) << " seed " << seed << ": bimads " << hv_guided << ", lhs "
                << hv_sampled << '\n';
    }
    const double elapsed = seconds_since(start);
    const bool ok = wins >= kRequiredWins && monotone && elapsed <= kSecondsPerStudy;
    pass = pass && ok;
    detail << to_string(study) << ": BiMADS >= LHS on " << wins << "/5 seeds (need 4), profiles "
           << (monotone ? "nondecreasing" : "NOT monotone") << ", "
           << format("%.0f s (limit 900 s)", elapsed) << (study == CaseStudy::Cpu ? "; " : "");
  }
  return {pass, detail.str()};
}

// 7. Progressive and extreme barrier behaviour on crafted designs.
Outcome barrier_semantics() {
  std::ostringstream detail;
  bool pass = true;

  StudyContext cpu = default_study_context(CaseStudy::Cpu);
  cpu.initial_conditions.resize(1);
  const DesignPoint fast{0.3, 2, 30, 1.0};
  const DesignPoint slow{0.02, 12, 200, 1.0};  // modelled solve time far above T_s
  ParetoArchive archive;
  const std::size_t fast_index = archive.add(to_coordinates(CaseStudy::Cpu, fast), evaluate_cpu(fast, cpu));
  const std::size_t slow_index = archive.add(to_coordinates(CaseStudy::Cpu, slow), evaluate_cpu(slow, cpu));
  const Evaluation& late = archive[slow_index].evaluation;
  const auto& front = archive.nondominated();
  const bool in_front = std::find(front.begin(), front.end(), slow_index) != front.end();
  const bool progressive = late.violation > 0.0 && !late.feasible() && archive.size() == 2 &&
                           !in_front && archive[fast_index].evaluation.feasible();
  pass = pass && progressive;
  detail << "timing-violating design archived with violation " << late.violation
         << (in_front ? " but IN the front" : " and excluded from the front");

  StudyContext fpga = default_study_context(CaseStudy::Fpga);
  fpga.initial_conditions.resize(1);
  // Five fraction bits cannot resolve the small curvature of a long, slow horizon.
  const DesignPoint coarse{0.5, 12, 100, 0.2, 5};
  const Evaluation rejected = evaluate_fpga(coarse, fpga);
  const bool extreme = !rejected.convexity_ok && !rejected.simulated && !rejected.admissible() &&
                       rejected.quantized_mu <= 0.0 && std::isinf(rejected.objectives[0]) &&
                       std::isinf(rejected.objectives[1]);
  pass = pass && extreme;
  detail << "; quantized mu " << rejected.quantized_mu
         << (extreme ? " -> rejected before simulation" : " -> NOT rejected as required");
  return {pass, detail.str()};
}

// 8. Byte-identical CSV output for identical runs.
Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "codesign_acceptance_replay";
  fs::remove_all(root);
  fs::create_directories(root);
  {
    std::ofstream config(root / "config.json");
    config << R"({"case_study": "cpu", "budget": 40, "seeds": [7],
                  "simulation": {"initial_conditions": {"count": 2}}})";
  }
  auto run = [&](const std::string& name) {
    const std::string command = std::string(CODESIGN_CLI_PATH) + " run-cpu --config " +
                                (root / "config.json").string() + " --out " +
                                (root / name).string() + " > /dev/null 2>&1";
    return std::system(command.c_str()) == 0;
  };
  if (!run("a") || !run("b")) return {false, "run-cpu failed"};
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  };
  int compared = 0;
  bool identical = true;
  for (const auto& entry : fs::recursive_directory_iterator(root / "a")) {
    if (entry.path().extension() != ".csv") continue;
    const fs::path twin = root / "b" / fs::relative(entry.path(), root / "a");
    identical = identical && fs::exists(twin) && slurp(entry.path()) == slurp(twin);
    ++compared;
  }
  return {identical && compared >= 7,
          std::to_string(compared) + " CSV files compared, " +
              (identical ? "all byte-identical" : "DIFFERENCES found")};
}

// 9. Continuity and sign of the reference-point scalarization.
Outcome scalarization() {
  const Objectives r{0.7, 1.3};
  // The two branches meet on the faces of the box f <= r where one coordinate equals r.
  double boundary = 0.0;
  double jump = 0.0;
  constexpr double kStep = 1e-7;
  for (int i = 0; i < 100; ++i) {
    const double s = 2.0 * i / 99.0;
    const Objectives on_first{r[0], r[1] - s};
    const Objectives on_second{r[0] - s, r[1]};
    boundary = std::max({boundary, std::abs(scalarize_phi_r(on_first, r)),
                         std::abs(scalarize_phi_r(on_second, r))});
    // One-sided limits across each face.
    jump = std::max({jump,
                     std::abs(scalarize_phi_r({r[0] - kStep, r[1] - s}, r) -
                              scalarize_phi_r({r[0] + kStep, r[1] - s}, r)),
                     std::abs(scalarize_phi_r({r[0] - s, r[1] - kStep}, r) -
                              scalarize_phi_r({r[0] - s, r[1] + kStep}, r))});
  }
  bool signs = true;
  for (int i = 0; i < 41; ++i) {
    for (int j = 0; j < 41; ++j) {
      const Objectives f{r[0] - 1.0 + 0.05 * i, r[1] - 1.0 + 0.05 * j};
      const double product = (r[0] - f[0]) * (r[1] - f[1]);
      const bool weakly_better = f[0] <= r[0] && f[1] <= r[1];
      const bool strictly_better = f[0] < r[0] && f[1] < r[1];
      const bool should_be_negative = strictly_better || (weakly_better && product != 0.0);
      signs = signs && ((scalarize_phi_r(f, r) < 0.0) == should_be_negative);
    }
  }
  // Both sides of a face are O(kStep^2) away from zero.
  return {boundary <= 1e-12 && jump <= 1e-12 && signs,
          format("max |phi| on 100-point boundary grid %.3g (tol 1e-12), max jump across it "
                 "%.3g, sign rule ",
                 boundary, jump) +
              (signs ? "holds on 41x41 grid" : "VIOLATED")};
}

// 10. One sample per stratum with k = 200.
Outcome lhs_stratification() {
  constexpr int k = 200;
  bool exact = true;
  for (CaseStudy study : {CaseStudy::Cpu, CaseStudy::Fpga}) {
    const DesignSpace space = default_design_space(study);
    const auto samples = lhs_sample(space, k, 5000 + static_cast<int>(study));
    for (std::size_t d = 0; d < space.size(); ++d) {
      const Dimension& dim = space.dimensions[d];
      std::vector<int> per_stratum(k, 0);
      if (dim.integer) {
        // Strata sharing one grid value must receive exactly as many samples as they number.
        std::map<long, int> expected, got;
        for (int j = 0; j < k; ++j) {
          const auto [lo, hi] = integer_stratum(dim, k, j);
          if (lo != hi) exact = false;  // k exceeds every integer range here
          ++expected[lo];
        }
        for (const auto& s : samples) ++got[std::lround(s[d])];
        exact = exact && expected == got;
      } else {
        for (const auto& s : samples) {
          for (int j = 0; j < k; ++j) {
            const auto [lo, hi] = continuous_stratum(dim, k, j);
            if (s[d] >= lo && s[d] < hi) ++per_stratum[j];
          }
        }
        for (int count : per_stratum) exact = exact && count == 1;
      }
    }
  }
  return {exact, std::string("k = 200 over both design spaces: ") +
                     (exact ? "exactly one sample per stratum in every dimension"
                            : "stratum counts DIFFER")};
}

}  // namespace
}  // namespace codesign::acceptance

int main(int argc, char** argv) {
  using namespace codesign::acceptance;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"solver correctness", solver_correctness},
      {"condensing equivalence", condensing_equivalence},
      {"discretization", discretization},
      {"hypervolume", hypervolume},
      {"condition number trend", condition_number_trend},
      {"BiMADS vs LHS", bimads_versus_lhs},
      {"barrier semantics", barrier_semantics},
      {"determinism and replay", determinism},
      {"scalarization properties", scalarization},
      {"LHS stratification", lhs_stratification},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int n = std::atoi(argv[i]);
    if (n < 1 || n > static_cast<int>(criteria.size())) {
      std::cerr << "unknown criterion '" << argv[i] << "' (expected 1-" << criteria.size() << ")\n";
      return 2;
    }
    selected.insert(n);
  }
  if (selected.empty()) {
    for (int n = 1; n <= static_cast<int>(criteria.size()); ++n) selected.insert(n);
  }
  bool all = true;
  for (int n : selected) {
    const auto& [name, check] = criteria[n - 1];
    Outcome outcome;
    try {
      outcome = check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    all = all && outcome.pass;
    std::cout << "criterion " << n << " (" << name << "): " << (outcome.pass ? "PASS" : "FAIL")
              << " - " << outcome.detail << std::endl;
  }
  return all ? 0 : 1;
}

#include "codesign/bimads.hpp"

#include <algorithm>
#include <cmath>

#include "codesign/errors.hpp"
#include "codesign/lhs.hpp"
#include "codesign/parallel.hpp"
#include "codesign/random.hpp"

namespace codesign {

namespace {

struct Range {
  Objectives low{kInfinity, kInfinity};
  Objectives high{-kInfinity, -kInfinity};
  void include(const Objectives& y) {
    for (int k = 0; k < 2; ++k) {
      low[k] = std::min(low[k], y[k]);
      high[k] = std::max(high[k], y[k]);
    }
  }
};

Range admissible_range(const ParetoArchive& archive) {
  Range range;
  for (const auto& entry : archive.entries()) {
    if (entry.evaluation.admissible()) range.include(entry.evaluation.objectives);
  }
  return range;
}

}  // namespace

ObjectiveScaling front_scaling(const ParetoArchive& archive) {
  Range front;
  for (std::size_t i : archive.nondominated()) front.include(archive[i].evaluation.objectives);
  const Range fallback = admissible_range(archive);
  ObjectiveScaling scaling;
  for (int k = 0; k < 2; ++k) {
    double low = front.low[k];
    double span = front.high[k] - front.low[k];
    if (!(span > 0.0)) {
      low = fallback.low[k];
      span = fallback.high[k] - fallback.low[k];
    }
    if (!std::isfinite(low)) low = 0.0;
    if (!(span > 0.0) || !std::isfinite(span)) span = std::max(std::abs(low), 1.0);
    scaling.offset[k] = low;
    scaling.scale[k] = span;
  }
  return scaling;
}

GapSelection ReferencePointSelector::select(const ParetoArchive& archive) {
  const auto& front = archive.nondominated();
  if (front.empty()) throw DomainError("reference point selection needs a feasible bootstrap");
  const long call = calls_++;

  if (front.size() == 1) {
    const std::size_t only = front.front();
    const Objectives& y = archive[only].evaluation.objectives;
    const Range range = admissible_range(archive);
    GapSelection selection{y, only, only, 0};
    for (int k = 0; k < 2; ++k) {
      double span = range.high[k] - range.low[k];
      if (!(span > 0.0)) span = std::max(std::abs(y[k]), 1e-3);
      selection.reference[k] = y[k] + 0.1 * span;
    }
    History& h = history_[{only, only}];
    selection.times_targeted = h.count++;
    h.last_call = call;
    return selection;
  }

  Range extent;
  for (std::size_t i : front) extent.include(archive[i].evaluation.objectives);
  auto normalized = [&](std::size_t i) {
    const Objectives& y = archive[i].evaluation.objectives;
    Objectives n;
    for (int k = 0; k < 2; ++k) {
      const double span = extent.high[k] - extent.low[k];
      n[k] = span > 0.0 ? (y[k] - extent.low[k]) / span : 0.0;
    }
    return n;
  };

  std::size_t best = 0;
  double best_score = -1.0;
  long best_last = 0;
  for (std::size_t g = 0; g + 1 < front.size(); ++g) {
    const Objectives a = normalized(front[g]);
    const Objectives b = normalized(front[g + 1]);
    const double distance = std::hypot(b[0] - a[0], b[1] - a[1]);
    const auto it = history_.find({front[g], front[g + 1]});
    const int count = it == history_.end() ? 0 : it->second.count;
    const long last = it == history_.end() ? -1 : it->second.last_call;
    const double score = distance / (1.0 + count);
    const double tolerance = 1e-12 * std::max(1.0, std::abs(best_score));
    if (score > best_score + tolerance ||
        (std::abs(score - best_score) <= tolerance && last < best_last)) {
      best = g;
      best_score = score;
      best_last = last;
    }
  }
  const std::size_t first = front[best];
  const std::size_t second = front[best + 1];
  const Objectives& y1 = archive[first].evaluation.objectives;
  const Objectives& y2 = archive[second].evaluation.objectives;
  GapSelection selection{{std::max(y1[0], y2[0]), std::max(y1[1], y2[1])}, first, second, 0};
  History& h = history_[{first, second}];
  selection.times_targeted = h.count++;
  h.last_call = call;
  return selection;
}

GapSelection extreme_reference(const ParetoArchive& archive, FrontEnd end) {
  const auto& front = archive.nondominated();
  if (front.empty()) throw DomainError("reference point selection needs a feasible bootstrap");
  const Range range = admissible_range(archive);
  GapSelection selection;
  if (end == FrontEnd::LowSecond) {
    // Front is sorted by the first objective, so its last point has the smallest second one.
    const std::size_t last = front.back();
    selection.reference = {range.high[0], archive[last].evaluation.objectives[1]};
    selection.first = selection.second = last;
  } else {
    const std::size_t first = front.front();
    selection.reference = {archive[first].evaluation.objectives[0], range.high[1]};
    selection.first = selection.second = first;
  }
  return selection;
}

Objectives select_reference_point(const ParetoArchive& archive) {
  ReferencePointSelector selector;
  return selector.select(archive).reference;
}

void evaluate_into(ParetoArchive& archive, const std::vector<std::vector<double>>& points,
                   const Evaluator& evaluator) {
  auto evaluations = parallel_map(points.size(), [&](std::size_t i) { return evaluator(points[i]); });
  for (std::size_t i = 0; i < points.size(); ++i) archive.add(points[i], std::move(evaluations[i]));
}

BimadsResult bimads(const DesignSpace& space, const Evaluator& evaluator,
                    const BimadsOptions& options) {
  space.validate();
  if (options.budget < 1) throw DomainError("budget must be positive");
  const int bootstrap = std::clamp(
      static_cast<int>(std::lround(options.bootstrap_fraction * options.budget)), 1,
      options.budget);

  BimadsResult result;
  ParetoArchive& archive = result.archive;
  evaluate_into(archive, lhs_sample(space, bootstrap, mix_seed(options.seed, 1)), evaluator);

  double h_max = 0.0;
  for (const auto& entry : archive.entries()) {
    if (entry.evaluation.admissible() && entry.evaluation.violation > 0.0) {
      h_max = std::max(h_max, entry.evaluation.violation);
    }
  }

  ReferencePointSelector selector;
  int guided_runs = 0;
  int extreme_runs = 0;
  std::uint64_t run = 0;
  int stalled_runs = 0;
  while (static_cast<int>(archive.size()) < options.budget) {
    const int remaining = options.budget - static_cast<int>(archive.size());
    if (!archive.has_admissible()) {
      // Nothing to poll around yet: spend another bootstrap-sized sample.
      const int extra = std::min(remaining, bootstrap);
      evaluate_into(archive, lhs_sample(space, extra, mix_seed(options.seed, 400000 + run)),
                    evaluator);
      ++run;
      continue;
    }
    MadsState state = make_mads_state(space, options.initial_mesh_fraction,
                                      mix_seed(options.seed, 1000 + run));
    state.h_max = h_max;

    ScalarObjective phi;
    std::optional<std::size_t> start;
    if (archive.has_feasible()) {
      const bool extreme = options.extreme_period > 0 &&
                           guided_runs % options.extreme_period == options.extreme_period - 1;
      ++guided_runs;
      GapSelection selection;
      if (extreme) {
        const FrontEnd end = extreme_runs % 2 == 0 ? FrontEnd::LowSecond : FrontEnd::LowFirst;
        selection = extreme_reference(archive, end);
        selection.times_targeted = extreme_runs / 2;
        ++extreme_runs;
      } else {
        selection = selector.select(archive);
      }
      result.selections.push_back(selection);
      ScalarizedProblem problem{selection.reference, front_scaling(archive)};
      phi = [problem](const Evaluation& e) { return problem.phi(e); };
      start = selection.times_targeted % 2 == 0 ? selection.first : selection.second;
      // Revisited gaps are polled on a finer mesh.
      state.level = std::min(selection.times_targeted, 8);
    } else {
      // Progressive barrier only: drive the violation down.
      phi = [](const Evaluation&) { return 0.0; };
    }
    seed_incumbents(state, archive, phi, start);
    if (!state.feasible && !state.infeasible) {
      // No admissible point under h_max: let the barrier accept any admissible violation.
      state.h_max = kInfinity;
      seed_incumbents(state, archive, phi, start);
    }

    const MadsResult mads = mads_minimize(space, evaluator, phi, archive, state,
                                          std::min(options.sub_budget, remaining), options.mads);
    ++run;

    for (const auto& entry : archive.entries()) {
      const Evaluation& e = entry.evaluation;
      if (e.admissible() && e.violation > 0.0 && archive.has_feasible()) {
        h_max = std::min(h_max, e.violation);
      }
    }
    // Every cached neighbourhood exhausted: restart from a fresh sample.
    if (mads.evaluations == 0) {
      if (++stalled_runs > 50) {
        const int extra = std::min(remaining, std::max(1, bootstrap / 2));
        evaluate_into(archive, lhs_sample(space, extra, mix_seed(options.seed, 500000 + run)),
                      evaluator);
        stalled_runs = 0;
      }
    } else {
      stalled_runs = 0;
    }
  }
  result.infeasible_space = !archive.has_admissible();
  return result;
}

ParetoArchive lhs_run(const DesignSpace& space, const Evaluator& evaluator, int budget,
                      std::uint64_t seed) {
  ParetoArchive archive;
  evaluate_into(archive, lhs_sample(space, budget, mix_seed(seed, 2)), evaluator);
  return archive;
}

}  // namespace codesign

#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "codesign/design_space.hpp"
#include "codesign/mads.hpp"
#include "codesign/pareto.hpp"

namespace codesign {

/// Per-objective affine map onto [0, 1] used before scalarizing.
struct ObjectiveScaling {
  Objectives offset{0.0, 0.0};
  Objectives scale{1.0, 1.0};

  Objectives apply(const Objectives& y) const {
    return {(y[0] - offset[0]) / scale[0], (y[1] - offset[1]) / scale[1]};
  }
};

/// Min-max scaling of the current front (admissible ranges as fallback).
ObjectiveScaling front_scaling(const ParetoArchive& archive);

/// phi_r applied to scaled objectives.
struct ScalarizedProblem {
  Objectives reference;  // raw objective space
  ObjectiveScaling scaling;

  double phi(const Evaluation& e) const {
    return scalarize_phi_r(scaling.apply(e.objectives), scaling.apply(reference));
  }
};

struct GapSelection {
  Objectives reference;
  /// Archive entries bounding the gap (equal for a single-point front).
  std::size_t first = 0;
  std::size_t second = 0;
  int times_targeted = 0;
};

/**
 * Picks the reference point for the next scalarized run. With one front
 * point, returns it moved 10% of the admissible objective ranges toward
 * worse values. Otherwise scores each pair of adjacent front points by
 * their Euclidean distance in min-max normalized objective space divided by
 * (1 + times the pair was already targeted), takes the best (ties go to the
 * least recently targeted, then leftmost) and returns the pair's local nadir.
 */
class ReferencePointSelector {
 public:
  /// Throws DomainError when the archive has no feasible point.
  GapSelection select(const ParetoArchive& archive);

 private:
  struct History {
    int count = 0;
    long last_call = -1;
  };
  std::map<std::pair<std::size_t, std::size_t>, History> history_;
  long calls_ = 0;
};

enum class FrontEnd { LowFirst, LowSecond };

/**
 * Reference point for extending the front beyond one of its ends. For
 * LowSecond the reference is (worst admissible first objective, second
 * objective of the front point with the smallest second objective), so only
 * designs that beat that point in the second objective score below zero;
 * LowFirst mirrors this. The bounding entries are both the end point.
 */
GapSelection extreme_reference(const ParetoArchive& archive, FrontEnd end);

/// Stateless variant: the first selection a fresh selector would make.
Objectives select_reference_point(const ParetoArchive& archive);

struct BimadsOptions {
  int budget = 200;
  double bootstrap_fraction = 0.1;
  int sub_budget = 15;
  double initial_mesh_fraction = 0.25;
  /// Every extreme_period-th MADS run extends an end of the front (ends
  /// alternate); 0 targets interior gaps only.
  int extreme_period = 3;
  std::uint64_t seed = 0;
  MadsOptions mads;
};

struct BimadsResult {
  ParetoArchive archive;
  std::vector<GapSelection> selections;
  /// Set when every evaluated design failed an extreme barrier.
  bool infeasible_space = false;
};

/// Evaluates the points in order; evaluations may run concurrently.
void evaluate_into(ParetoArchive& archive, const std::vector<std::vector<double>>& points,
                   const Evaluator& evaluator);

/**
 * Bi-objective MADS: a Latin hypercube bootstrap, then repeated MADS runs
 * on phi_r with r chosen by ReferencePointSelector, until the evaluation
 * budget is spent. While no design has passed the extreme barriers, further
 * bootstrap-sized samples are drawn instead of MADS runs.
 */
BimadsResult bimads(const DesignSpace& space, const Evaluator& evaluator,
                    const BimadsOptions& options);

/// Baseline: one Latin hypercube of `budget` designs, evaluated in order.
ParetoArchive lhs_run(const DesignSpace& space, const Evaluator& evaluator, int budget,
                      std::uint64_t seed);

}  // namespace codesign

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "codesign/design_space.hpp"
#include "codesign/evaluation.hpp"
#include "codesign/pareto.hpp"

namespace codesign {

using Evaluator = std::function<Evaluation(const std::vector<double>&)>;

/// Scalar merit of an admissible evaluation; lower is better.
using ScalarObjective = std::function<double(const Evaluation&)>;

struct Incumbent {
  std::size_t index = 0;  // archive entry
  double phi = kInfinity;
  double violation = 0.0;
};

struct MadsState {
  /// Mesh size at level 0, per dimension.
  std::vector<double> initial_mesh;
  /// Current mesh is initial_mesh * 2^-level; level >= 0.
  int level = 0;
  std::optional<Incumbent> feasible;
  /// Best infeasible point with violation <= h_max (progressive barrier).
  std::optional<Incumbent> infeasible;
  double h_max = kInfinity;
  std::uint64_t direction_seed = 0;
  int iterations = 0;
  std::vector<double> last_success_direction;

  std::vector<double> mesh_size() const;
};

/// Level-0 mesh of `fraction` times each dimension's range (at least 1 for integers).
MadsState make_mads_state(const DesignSpace& space, double fraction, std::uint64_t seed);

struct MadsOptions {
  /// Continuous dimensions stop polling once their mesh is below this fraction of the range.
  double min_mesh_ratio = 1e-6;
};

struct MadsResult {
  int evaluations = 0;
  int iterations = 0;
  int successes = 0;
  bool mesh_converged = false;
};

/**
 * Sets the incumbents of `state` from an archive: `start` becomes the
 * feasible incumbent when feasible, and the admissible infeasible entry with
 * the smallest violation <= h_max becomes the infeasible one.
 */
void seed_incumbents(MadsState& state, const ParetoArchive& archive, const ScalarObjective& phi,
                     std::optional<std::size_t> start);

/**
 * Mesh adaptive direct search on `phi` with extreme and progressive barriers.
 *
 * Each iteration polls the feasible incumbent (or the infeasible one when no
 * feasible point exists) along 2q directions +-h_j, where h_j are the columns
 * of a seeded Householder reflection over the dimensions still polling,
 * scaled so the largest component is one and multiplied by the mesh.
 * Integer coordinates are rounded to the lattice; continuous coordinates are
 * snapped to a grid of min_mesh_ratio * range. Polling is opportunistic and
 * tries the last successful direction first.
 *
 * Success (strict phi decrease of the feasible incumbent, or strict h
 * decrease of the infeasible one within h_max) doubles the mesh; failure
 * halves it. Integer dimensions stop polling once their mesh drops below 1.
 * Stops after `budget` new evaluations or when no dimension polls. Cached
 * points are reused without spending budget; every new evaluation is added
 * to `archive`.
 */
MadsResult mads_minimize(const DesignSpace& space, const Evaluator& evaluator,
                         const ScalarObjective& phi, ParetoArchive& archive, MadsState& state,
                         int budget, const MadsOptions& options = {});

}  // namespace codesign

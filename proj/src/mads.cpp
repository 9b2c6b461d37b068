#include "codesign/mads.hpp"

#include <algorithm>
#include <cmath>

#include "codesign/errors.hpp"
#include "codesign/random.hpp"

namespace codesign {

std::vector<double> MadsState::mesh_size() const {
  std::vector<double> mesh(initial_mesh.size());
  for (std::size_t i = 0; i < mesh.size(); ++i) mesh[i] = std::ldexp(initial_mesh[i], -level);
  return mesh;
}

MadsState make_mads_state(const DesignSpace& space, double fraction, std::uint64_t seed) {
  space.validate();
  if (!(fraction > 0.0)) throw DomainError("initial mesh fraction must be positive");
  MadsState state;
  state.direction_seed = seed;
  for (const auto& d : space.dimensions) {
    const double mesh = fraction * d.range();
    state.initial_mesh.push_back(d.integer ? std::max(1.0, std::round(mesh)) : mesh);
  }
  return state;
}

void seed_incumbents(MadsState& state, const ParetoArchive& archive, const ScalarObjective& phi,
                     std::optional<std::size_t> start) {
  state.feasible.reset();
  state.infeasible.reset();
  if (start && archive[*start].evaluation.feasible()) {
    state.feasible = Incumbent{*start, phi(archive[*start].evaluation), 0.0};
  }
  for (std::size_t i = 0; i < archive.size(); ++i) {
    const Evaluation& e = archive[i].evaluation;
    if (!e.admissible() || e.violation <= 0.0 || e.violation > state.h_max) continue;
    const double value = phi(e);
    if (!state.infeasible || e.violation < state.infeasible->violation ||
        (e.violation == state.infeasible->violation && value < state.infeasible->phi)) {
      state.infeasible = Incumbent{i, value, e.violation};
    }
  }
}

namespace {

/// Columns of a Householder reflection over `active`, scaled to unit max-norm, then negated.
std::vector<std::vector<double>> poll_directions(std::size_t dims,
                                                 const std::vector<std::size_t>& active,
                                                 Random& rng) {
  const std::size_t q = active.size();
  std::vector<double> v(q);
  double norm2 = 0.0;
  while (norm2 < 1e-12) {
    norm2 = 0.0;
    for (auto& x : v) {
      x = rng.normal();
      norm2 += x * x;
    }
  }
  std::vector<std::vector<double>> directions;
  for (std::size_t c = 0; c < q; ++c) {
    std::vector<double> column(q);
    double max_abs = 0.0;
    for (std::size_t r = 0; r < q; ++r) {
      column[r] = (r == c ? 1.0 : 0.0) - 2.0 * v[r] * v[c] / norm2;
      max_abs = std::max(max_abs, std::abs(column[r]));
    }
    std::vector<double> d(dims, 0.0);
    for (std::size_t r = 0; r < q; ++r) d[active[r]] = column[r] / max_abs;
    directions.push_back(d);
  }
  for (std::size_t c = 0; c < q; ++c) {
    std::vector<double> d = directions[c];
    for (auto& x : d) x = -x;
    directions.push_back(std::move(d));
  }
  return directions;
}

}  // namespace

MadsResult mads_minimize(const DesignSpace& space, const Evaluator& evaluator,
                         const ScalarObjective& phi, ParetoArchive& archive, MadsState& state,
                         int budget, const MadsOptions& options) {
  MadsResult result;
  if (budget <= 0) return result;
  space.validate();
  const std::size_t dims = space.size();
  if (state.initial_mesh.size() != dims) throw DomainError("mesh does not match design space");

  auto snap = [&](std::vector<double> point) {
    point = space.project(std::move(point));
    for (std::size_t i = 0; i < dims; ++i) {
      const Dimension& d = space.dimensions[i];
      if (d.integer) continue;
      const double grid = options.min_mesh_ratio * d.range();
      point[i] = std::clamp(d.lower + std::round((point[i] - d.lower) / grid) * grid, d.lower,
                            d.upper);
    }
    return point;
  };

  while (result.evaluations < budget) {
    const std::optional<Incumbent>& center = state.feasible ? state.feasible : state.infeasible;
    if (!center) break;
    const std::vector<double> origin = archive[center->index].point;

    const std::vector<double> mesh = state.mesh_size();
    std::vector<std::size_t> active;
    std::vector<double> step(dims, 0.0);
    for (std::size_t i = 0; i < dims; ++i) {
      const Dimension& d = space.dimensions[i];
      if (d.integer ? mesh[i] >= 1.0 : mesh[i] >= options.min_mesh_ratio * d.range()) {
        active.push_back(i);
        step[i] = d.integer ? std::round(mesh[i]) : mesh[i];
      }
    }
    if (active.empty()) {
      result.mesh_converged = true;
      break;
    }

    Random rng(mix_seed(state.direction_seed, static_cast<std::uint64_t>(state.iterations)));
    auto directions = poll_directions(dims, active, rng);
    if (!state.last_success_direction.empty()) {
      directions.insert(directions.begin(), state.last_success_direction);
    }

    bool success = false;
    bool out_of_budget = false;
    for (const auto& direction : directions) {
      std::vector<double> candidate = origin;
      bool moved = false;
      for (std::size_t i : active) {
        const double delta = step[i] * direction[i];
        candidate[i] += space.dimensions[i].integer ? std::round(delta) : delta;
      }
      candidate = snap(std::move(candidate));
      for (std::size_t i = 0; i < dims; ++i) moved = moved || candidate[i] != origin[i];
      if (!moved) continue;

      std::size_t index;
      if (auto cached = archive.find(candidate)) {
        index = *cached;
      } else {
        if (result.evaluations >= budget) {
          out_of_budget = true;
          break;
        }
        Evaluation evaluation = evaluator(candidate);
        index = archive.add(candidate, std::move(evaluation));
        ++result.evaluations;
      }
      const Evaluation& e = archive[index].evaluation;
      if (!e.admissible()) continue;
      const double value = phi(e);
      if (e.violation <= 0.0) {
        if (!state.feasible || value < state.feasible->phi) {
          state.feasible = Incumbent{index, value, 0.0};
          success = true;
        }
      } else if (e.violation <= state.h_max) {
        if (!state.infeasible || e.violation < state.infeasible->violation) {
          state.infeasible = Incumbent{index, value, e.violation};
          success = true;
        }
      }
      if (success) {
        state.last_success_direction = direction;
        break;
      }
    }
    if (out_of_budget) break;

    ++state.iterations;
    ++result.iterations;
    if (success) {
      ++result.successes;
      state.level = std::max(0, state.level - 1);
    } else {
      ++state.level;
      state.last_success_direction.clear();
    }
  }
  return result;
}

}  // namespace codesign

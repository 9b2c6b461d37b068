#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "codesign/evaluation.hpp"

namespace codesign {

enum class Dominance { Strong, Weak, None };

/// Strong: a <= b componentwise and a != b. Weak: a == b. None otherwise.
Dominance dominates(const Objectives& a, const Objectives& b);

inline bool strongly_dominates(const Objectives& a, const Objectives& b) {
  return dominates(a, b) == Dominance::Strong;
}

/// Indices of the points no other point strongly dominates, in input order.
std::vector<std::size_t> pareto_filter(std::span<const Objectives> points);

/**
 * Area dominated by `front` and bounded by `reference`. Points with a
 * coordinate above the reference are ignored; dominated points are harmless.
 */
double hypervolume_2d(std::span<const Objectives> front, const Objectives& reference);

/**
 * Reference-point scalarization:
 *   -(r1 - f1)^2 (r2 - f2)^2                 if f <= r componentwise,
 *   max(0, f1 - r1)^2 + max(0, f2 - r2)^2    otherwise.
 */
double scalarize_phi_r(const Objectives& f, const Objectives& r);

struct ArchiveEntry {
  std::vector<double> point;
  Evaluation evaluation;
};

/**
 * Every evaluated design in evaluation order, plus the nondominated subset
 * of the feasible ones.
 */
class ParetoArchive {
 public:
  std::size_t add(std::vector<double> point, Evaluation evaluation);

  const std::vector<ArchiveEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  const ArchiveEntry& operator[](std::size_t i) const { return entries_[i]; }

  /// Nondominated feasible entries, sorted by first objective (then second, then index).
  const std::vector<std::size_t>& nondominated() const { return nondominated_; }
  std::vector<Objectives> front() const;

  std::optional<std::size_t> find(const std::vector<double>& point) const;

  bool has_feasible() const;
  bool has_admissible() const;

  double hypervolume(const Objectives& reference) const;
  /// Hypervolume of the front after each evaluation, in evaluation order.
  std::vector<double> hypervolume_profile(const Objectives& reference) const;

 private:
  std::vector<ArchiveEntry> entries_;
  std::vector<std::size_t> nondominated_;
};

/**
 * Componentwise worst feasible objective over the archives plus `margin`
 * times the feasible range (or |worst| when the range is zero).
 * Returns nullopt when no archive holds a feasible point.
 */
std::optional<Objectives> reporting_reference(std::span<const ParetoArchive* const> archives,
                                              double margin = 0.05);

}  // namespace codesign

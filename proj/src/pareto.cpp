#include "codesign/pareto.hpp"

#include <algorithm>
#include <numeric>

namespace codesign {

Dominance dominates(const Objectives& a, const Objectives& b) {
  if (a[0] <= b[0] && a[1] <= b[1]) {
    return (a[0] != b[0] || a[1] != b[1]) ? Dominance::Strong : Dominance::Weak;
  }
  return Dominance::None;
}

std::vector<std::size_t> pareto_filter(std::span<const Objectives> points) {
  // Sort by (f1, f2); a point is dominated iff some earlier point in that
  // order has f2 no larger and differs from it.
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return points[i] < points[j];
  });
  std::vector<bool> keep(points.size(), false);
  double best_f2 = kInfinity;
  std::optional<Objectives> best_point;
  for (std::size_t idx : order) {
    const Objectives& p = points[idx];
    const bool dominated = best_point && (best_f2 < p[1] || (best_f2 == p[1] && *best_point != p));
    if (!dominated) keep[idx] = true;
    if (!best_point || p[1] < best_f2) {
      best_f2 = p[1];
      best_point = p;
    }
  }
  std::vector<std::size_t> result;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (keep[i]) result.push_back(i);
  }
  return result;
}

double hypervolume_2d(std::span<const Objectives> front, const Objectives& reference) {
  std::vector<Objectives> clipped;
  for (const auto& p : front) {
    if (p[0] <= reference[0] && p[1] <= reference[1]) clipped.push_back(p);
  }
  std::sort(clipped.begin(), clipped.end());
  double area = 0.0;
  double ceiling = reference[1];
  for (const auto& p : clipped) {
    if (p[1] < ceiling) {
      area += (reference[0] - p[0]) * (ceiling - p[1]);
      ceiling = p[1];
    }
  }
  return area;
}

double scalarize_phi_r(const Objectives& f, const Objectives& r) {
  if (f[0] <= r[0] && f[1] <= r[1]) {
    const double a = r[0] - f[0];
    const double b = r[1] - f[1];
    return -(a * a) * (b * b);
  }
  const double a = std::max(0.0, f[0] - r[0]);
  const double b = std::max(0.0, f[1] - r[1]);
  return a * a + b * b;
}

std::size_t ParetoArchive::add(std::vector<double> point, Evaluation evaluation) {
  const std::size_t index = entries_.size();
  entries_.push_back({std::move(point), std::move(evaluation)});
  const ArchiveEntry& entry = entries_.back();
  if (!entry.evaluation.feasible()) return index;

  const Objectives& y = entry.evaluation.objectives;
  for (std::size_t i : nondominated_) {
    if (strongly_dominates(entries_[i].evaluation.objectives, y)) return index;
  }
  std::erase_if(nondominated_, [&](std::size_t i) {
    return strongly_dominates(y, entries_[i].evaluation.objectives);
  });
  const auto key = [&](std::size_t i) {
    const auto& o = entries_[i].evaluation.objectives;
    return std::make_tuple(o[0], o[1], i);
  };
  const auto pos = std::lower_bound(nondominated_.begin(), nondominated_.end(), index,
                                    [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
  nondominated_.insert(pos, index);
  return index;
}

std::vector<Objectives> ParetoArchive::front() const {
  std::vector<Objectives> result;
  result.reserve(nondominated_.size());
  for (std::size_t i : nondominated_) result.push_back(entries_[i].evaluation.objectives);
  return result;
}

std::optional<std::size_t> ParetoArchive::find(const std::vector<double>& point) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].point == point) return i;
  }
  return std::nullopt;
}

bool ParetoArchive::has_feasible() const { return !nondominated_.empty(); }

bool ParetoArchive::has_admissible() const {
  return std::any_of(entries_.begin(), entries_.end(),
                     [](const ArchiveEntry& e) { return e.evaluation.admissible(); });
}

double ParetoArchive::hypervolume(const Objectives& reference) const {
  const auto points = front();
  return hypervolume_2d(points, reference);
}

std::vector<double> ParetoArchive::hypervolume_profile(const Objectives& reference) const {
  std::vector<double> profile;
  profile.reserve(entries_.size());
  std::vector<Objectives> feasible;
  double current = 0.0;
  for (const auto& entry : entries_) {
    if (entry.evaluation.feasible()) {
      feasible.push_back(entry.evaluation.objectives);
      current = hypervolume_2d(feasible, reference);
    }
    profile.push_back(current);
  }
  return profile;
}

std::optional<Objectives> reporting_reference(std::span<const ParetoArchive* const> archives,
                                              double margin) {
  Objectives worst{-kInfinity, -kInfinity};
  Objectives best{kInfinity, kInfinity};
  bool any = false;
  for (const ParetoArchive* archive : archives) {
    for (const auto& entry : archive->entries()) {
      if (!entry.evaluation.feasible()) continue;
      any = true;
      for (int k = 0; k < 2; ++k) {
        worst[k] = std::max(worst[k], entry.evaluation.objectives[k]);
        best[k] = std::min(best[k], entry.evaluation.objectives[k]);
      }
    }
  }
  if (!any) return std::nullopt;
  Objectives reference;
  for (int k = 0; k < 2; ++k) {
    const double range = worst[k] - best[k];
    const double span = range > 0.0 ? range : std::max(std::abs(worst[k]), 1e-12);
    reference[k] = worst[k] + margin * span;
  }
  return reference;
}

}  // namespace codesign

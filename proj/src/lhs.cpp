#include "codesign/lhs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "codesign/errors.hpp"
#include "codesign/random.hpp"

namespace codesign {

void DesignSpace::validate() const {
  if (dimensions.empty()) throw DomainError("design space has no dimensions");
  for (const auto& d : dimensions) {
    if (!(d.lower < d.upper) || !std::isfinite(d.lower) || !std::isfinite(d.upper)) {
      throw DomainError("dimension '" + d.name + "' needs finite bounds with lower < upper");
    }
    if (d.integer && (d.lower != std::floor(d.lower) || d.upper != std::floor(d.upper))) {
      throw DomainError("integer dimension '" + d.name + "' needs integral bounds");
    }
  }
}

bool DesignSpace::contains(const std::vector<double>& point) const {
  if (point.size() != dimensions.size()) return false;
  for (std::size_t i = 0; i < point.size(); ++i) {
    const auto& d = dimensions[i];
    if (!(point[i] >= d.lower && point[i] <= d.upper)) return false;
    if (d.integer && point[i] != std::round(point[i])) return false;
  }
  return true;
}

std::vector<double> DesignSpace::project(std::vector<double> point) const {
  for (std::size_t i = 0; i < point.size(); ++i) {
    const auto& d = dimensions[i];
    if (d.integer) point[i] = std::round(point[i]);
    point[i] = std::clamp(point[i], d.lower, d.upper);
  }
  return point;
}

std::pair<double, double> continuous_stratum(const Dimension& dim, int k, int j) {
  const double width = dim.range() / k;
  const double lo = dim.lower + j * width;
  const double hi = j + 1 == k ? dim.upper : dim.lower + (j + 1) * width;
  return {lo, hi};
}

std::pair<long, long> integer_stratum(const Dimension& dim, int k, int j) {
  const long count = static_cast<long>(dim.upper - dim.lower) + 1;
  const long base = static_cast<long>(dim.lower);
  const long first = (static_cast<long>(j) * count) / k;
  const long next = (static_cast<long>(j + 1) * count) / k;
  return {base + first, base + std::max(first, next - 1)};
}

std::vector<std::vector<double>> lhs_sample(const DesignSpace& space, int k, std::uint64_t seed) {
  space.validate();
  if (k < 1) throw DomainError("LHS needs at least one sample");
  Random rng(seed);
  std::vector<std::vector<double>> samples(k, std::vector<double>(space.size()));
  for (std::size_t d = 0; d < space.size(); ++d) {
    const Dimension& dim = space.dimensions[d];
    std::vector<int> strata(k);
    std::iota(strata.begin(), strata.end(), 0);
    rng.shuffle(strata);
    for (int s = 0; s < k; ++s) {
      const int j = strata[s];
      double value;
      if (dim.integer) {
        const auto [lo, hi] = integer_stratum(dim, k, j);
        value = static_cast<double>(lo + static_cast<long>(rng.below(hi - lo + 1)));
      } else {
        const auto [lo, hi] = continuous_stratum(dim, k, j);
        value = lo + rng.uniform() * (hi - lo);
        if (value >= hi) value = std::nextafter(hi, lo);
      }
      samples[s][d] = value;
    }
  }
  return samples;
}

}  // namespace codesign

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "codesign/design_space.hpp"

namespace codesign {

/**
 * Latin hypercube sample of k points: each dimension is cut into k strata,
 * every stratum receives exactly one sample, and strata are paired across
 * dimensions by independent random permutations.
 *
 * Continuous dimensions sample uniformly inside [lower + j w, lower + (j+1) w).
 * Integer dimensions use strata aligned to the integer grid (see
 * integer_stratum) and sample uniformly among the integers of the stratum.
 */
std::vector<std::vector<double>> lhs_sample(const DesignSpace& space, int k, std::uint64_t seed);

/// Half-open bounds of continuous stratum j of k.
std::pair<double, double> continuous_stratum(const Dimension& dim, int k, int j);

/**
 * Inclusive integer range of stratum j of k over the c = upper - lower + 1
 * grid values: [lower + floor(j c / k), lower + max(floor(j c / k), floor((j+1) c / k) - 1)].
 * When k > c several strata share one value.
 */
std::pair<long, long> integer_stratum(const Dimension& dim, int k, int j);

}  // namespace codesign

#include "codesign/lhs.hpp"

#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "codesign/errors.hpp"

namespace codesign {
namespace {

DesignSpace mixed_space() {
  return DesignSpace{{{"a", 0.02, 0.5, false}, {"b", 1, 12, true}, {"c", 20, 200, true},
                      {"d", -3.0, 3.0, false}}};
}

GTEST_TEST(LhsSample, OnePointPerContinuousStratum) {
  const DesignSpace space = mixed_space();
  for (int k : {1, 7, 20, 50}) {
    const auto points = lhs_sample(space, k, 42);
    ASSERT_EQ(points.size(), static_cast<std::size_t>(k));
    for (int d : {0, 3}) {
      std::vector<int> hits(k, 0);
      for (const auto& p : points) {
        int found = -1;
        for (int j = 0; j < k; ++j) {
          const auto [lo, hi] = continuous_stratum(space.dimensions[d], k, j);
          if (p[d] >= lo && p[d] < hi) found = j;
        }
        ASSERT_GE(found, 0) << p[d];
        ++hits[found];
      }
      for (int j = 0; j < k; ++j) EXPECT_EQ(hits[j], 1) << "k " << k << " stratum " << j;
    }
  }
}

GTEST_TEST(LhsSample, OnePointPerIntegerStratum) {
  const DesignSpace space = mixed_space();
  for (int k : {5, 12, 30}) {
    const auto points = lhs_sample(space, k, 9);
    for (int d : {1, 2}) {
      const Dimension& dim = space.dimensions[d];
      std::vector<int> hits(k, 0);
      for (const auto& p : points) {
        EXPECT_EQ(p[d], std::round(p[d]));
        EXPECT_TRUE(space.contains(p));
        // Strata may share values when k exceeds the grid; count the first free one.
        bool placed = false;
        for (int j = 0; j < k && !placed; ++j) {
          const auto [lo, hi] = integer_stratum(dim, k, j);
          if (p[d] >= lo && p[d] <= hi && hits[j] == 0) {
            ++hits[j];
            placed = true;
          }
        }
        EXPECT_TRUE(placed) << dim.name << " = " << p[d];
      }
    }
  }
}

GTEST_TEST(IntegerStratum, PartitionsTheGrid) {
  const Dimension dim{"n", 1, 12, true};
  long next = 1;
  for (int j = 0; j < 5; ++j) {
    const auto [lo, hi] = integer_stratum(dim, 5, j);
    EXPECT_EQ(lo, next);
    EXPECT_GE(hi, lo);
    next = hi + 1;
  }
  EXPECT_EQ(next, 13);
  // More strata than values: every stratum holds exactly one value.
  for (int j = 0; j < 30; ++j) {
    const auto [lo, hi] = integer_stratum(dim, 30, j);
    EXPECT_EQ(lo, hi);
    EXPECT_EQ(lo, 1 + (j * 12) / 30);
  }
}

GTEST_TEST(LhsSample, DeterministicPerSeed) {
  const DesignSpace space = mixed_space();
  EXPECT_EQ(lhs_sample(space, 25, 3), lhs_sample(space, 25, 3));
  EXPECT_NE(lhs_sample(space, 25, 3), lhs_sample(space, 25, 4));
}

GTEST_TEST(LhsSample, RejectsBadInput) {
  EXPECT_THROW(lhs_sample(mixed_space(), 0, 1), DomainError);
  EXPECT_THROW(lhs_sample(DesignSpace{}, 3, 1), DomainError);
  EXPECT_THROW(lhs_sample(DesignSpace{{{"x", 1.0, 0.0, false}}}, 3, 1), DomainError);
}

}  // namespace
}  // namespace codesign

#include "cfmimo/stats.hpp"

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

namespace cfmimo {
namespace {

TEST(EmpiricalCdf, SortsAndAssignsSteps) {
  const std::vector<double> v{3.0, 1.0, 2.0};
  const auto cdf = empirical_cdf(v);
  ASSERT_EQ(cdf.points.size(), 3u);
  EXPECT_EQ(cdf.points[0].value, 1.0);
  EXPECT_EQ(cdf.points[1].value, 2.0);
  EXPECT_EQ(cdf.points[2].value, 3.0);
  EXPECT_DOUBLE_EQ(cdf.points[0].probability, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(cdf.points[1].probability, 2.0 / 3.0);
  EXPECT_EQ(cdf.points[2].probability, 1.0);
}

TEST(EmpiricalCdf, SingleValue) {
  const std::vector<double> v{5.0};
  const auto cdf = empirical_cdf(v);
  ASSERT_EQ(cdf.points.size(), 1u);
  EXPECT_EQ(cdf.points[0].value, 5.0);
  EXPECT_EQ(cdf.points[0].probability, 1.0);
}

TEST(EmpiricalCdf, DuplicatesKept) {
  const std::vector<double> v{2.0, 2.0};
  const auto cdf = empirical_cdf(v);
  ASSERT_EQ(cdf.points.size(), 2u);
  EXPECT_EQ(cdf.points[0].probability, 0.5);
  EXPECT_EQ(cdf.points[1].probability, 1.0);
}

TEST(EmpiricalCdf, RejectsBadInput) {
  EXPECT_THROW(empirical_cdf(std::vector<double>{}), std::invalid_argument);
  EXPECT_THROW(empirical_cdf(std::vector<double>{1.0, std::nan("")}), std::invalid_argument);
}

TEST(EmpiricalCdf, MonotoneAndEndsAtOne) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n;
  std::vector<double> v(501);
  for (auto& x : v) x = n(rng);
  const auto cdf = empirical_cdf(v);
  for (std::size_t i = 1; i < cdf.points.size(); ++i) {
    EXPECT_LE(cdf.points[i - 1].value, cdf.points[i].value);
    EXPECT_LT(cdf.points[i - 1].probability, cdf.points[i].probability);
  }
  EXPECT_EQ(cdf.points.back().probability, 1.0);
}

TEST(Median, OddAndEven) {
  EXPECT_EQ(median(std::vector<double>{3.0, 1.0, 2.0}), 2.0);
  EXPECT_EQ(median(std::vector<double>{4.0, 1.0, 3.0, 2.0}), 2.5);
  EXPECT_EQ(median(std::vector<double>{7.0}), 7.0);
  EXPECT_THROW(median(std::vector<double>{}), std::invalid_argument);
}

TEST(Quantile, LinearInterpolation) {
  const std::vector<double> v{1.0, 2.0, 3.0, 4.0, 5.0};
  EXPECT_EQ(quantile(v, 0.0), 1.0);
  EXPECT_EQ(quantile(v, 1.0), 5.0);
  EXPECT_DOUBLE_EQ(quantile(v, 0.1), 1.4);
  EXPECT_DOUBLE_EQ(interquartile_range(v), 2.0);
  EXPECT_THROW(quantile(v, 1.5), std::invalid_argument);
}

}  // namespace
}  // namespace cfmimo

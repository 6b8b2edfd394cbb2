#pragma once

#include <span>
#include <utility>
#include <vector>

namespace cfmimo {

struct CdfPoint {
  double value;
  double probability;
};

/// Empirical CDF: the i-th order statistic (1-based) carries probability i/n.
/// Duplicates are kept as separate points.
struct CdfSeries {
  std::vector<CdfPoint> points;
};

CdfSeries empirical_cdf(std::span<const double> values);

/// Middle order statistic for odd n, mean of the two central ones for even n.
double median(std::span<const double> values);

/// Linear-interpolated sample quantile (type 7), p in [0, 1].
double quantile(std::span<const double> values, double p);

double interquartile_range(std::span<const double> values);

}  // namespace cfmimo

#include "cfmimo/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cfmimo {
namespace {

std::vector<double> sorted_finite(std::span<const double> values, const char* what) {
  if (values.empty()) throw std::invalid_argument(std::string(what) + ": empty input");
  std::vector<double> v(values.begin(), values.end());
  for (double x : v) {
    if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + ": non-finite value");
  }
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

CdfSeries empirical_cdf(std::span<const double> values) {
  const auto sorted = sorted_finite(values, "empirical_cdf");
  const auto n = static_cast<double>(sorted.size());
  CdfSeries out;
  out.points.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    out.points.push_back({sorted[i], static_cast<double>(i + 1) / n});
  }
  return out;
}

double median(std::span<const double> values) {
  const auto sorted = sorted_finite(values, "median");
  const std::size_t n = sorted.size();
  if (n % 2 == 1) return sorted[n / 2];
  return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

double quantile(std::span<const double> values, double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("quantile: p outside [0, 1]");
  const auto sorted = sorted_finite(values, "quantile");
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double interquartile_range(std::span<const double> values) {
  return quantile(values, 0.75) - quantile(values, 0.25);
}

}  // namespace cfmimo

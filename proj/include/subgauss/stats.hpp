#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace subgauss {

double mean(std::span<const double> xs);
double sample_stddev(std::span<const double> xs);

/// Type-7 quantile of an ascending-sorted sample, q in [0, 1].
double quantile_sorted(std::span<const double> sorted, double q);

/// Standard normal quantile.
double normal_quantile(double p);

/// Wilson score interval for `successes` out of `trials` at the given
/// two-sided confidence level.
std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials,
                                          double level = 0.95);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rss = 0.0;
  std::vector<double> residuals;
};

/// Ordinary least squares y ~ intercept + slope * x. Throws DegenerateFit
/// when x has fewer than two distinct values.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

/// Survival counts #{v >= t} for each t, from an ascending-sorted sample.
std::vector<std::size_t> survival_counts(std::span<const double> sorted,
                                         std::span<const double> ts);

/// Log-spaced grid of `count` points on [lo, hi].
std::vector<double> log_grid(double lo, double hi, std::size_t count);

}  // namespace subgauss

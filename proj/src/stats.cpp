#include "subgauss/stats.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>

#include "subgauss/error.hpp"

namespace subgauss {

double mean(std::span<const double> xs) {
  require(!xs.empty(), ErrorKind::InvalidArgument, "mean of empty sample");
  double total = 0.0;
  for (double x : xs) total += x;
  return total / static_cast<double>(xs.size());
}

double sample_stddev(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double mu = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - mu) * (x - mu);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double quantile_sorted(std::span<const double> sorted, double q) {
  require(!sorted.empty(), ErrorKind::InvalidArgument, "quantile of empty sample");
  q = std::clamp(q, 0.0, 1.0);
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double normal_quantile(double p) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials,
                                          double level) {
  require(trials > 0, ErrorKind::InvalidArgument, "wilson interval needs trials > 0");
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z = normal_quantile(0.5 + 0.5 * level);
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (phat + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  // The limits are exactly 0 and 1 at the extremes; rounding would leave dust.
  const double lo = successes == 0 ? 0.0 : std::max(0.0, centre - half);
  const double hi = successes == trials ? 1.0 : std::min(1.0, centre + half);
  return {lo, hi};
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  require(x.size() == y.size(), ErrorKind::InvalidArgument, "fit arrays differ in length");
  const bool distinct =
      x.size() >= 2 && std::any_of(x.begin(), x.end(), [&](double v) { return v != x[0]; });
  require(distinct, ErrorKind::DegenerateFit, "need at least two distinct regressor values");
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.residuals.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    fit.residuals[i] = y[i] - (fit.intercept + fit.slope * x[i]);
    fit.rss += fit.residuals[i] * fit.residuals[i];
  }
  return fit;
}

std::vector<std::size_t> survival_counts(std::span<const double> sorted,
                                         std::span<const double> ts) {
  std::vector<std::size_t> counts(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), ts[k]);
    counts[k] = static_cast<std::size_t>(sorted.end() - it);
  }
  return counts;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  require(lo > 0.0 && hi > lo && count >= 2, ErrorKind::InvalidArgument, "bad log grid");
  std::vector<double> grid(count);
  const double step = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) grid[k] = lo * std::exp(step * static_cast<double>(k));
  grid.back() = hi;
  return grid;
}

}  // namespace subgauss

#pragma once

// Fixed experiment configurations shared by calibration, acceptance runs and
// the command-line tool. Only the seeds differ between those callers.

#include <cmath>
#include <cstdint>
#include <vector>

#include "subgauss/distribution.hpp"
#include "subgauss/ensembles.hpp"
#include "subgauss/rng.hpp"

namespace subgauss::scenarios {

/// Master seed reserved for fitting constants; acceptance runs use
/// kDefaultSeed, so the two never share a substream.
constexpr std::uint64_t kCalibrationSeed = 0x5EED0CA1B7A7EULL;

/// Unit-variance, mean-zero laws used for the tail-domination experiments.
inline std::vector<Distribution> domination_laws() {
  return {Distribution::gaussian(1.0), Distribution::scaled_bernoulli(4.0),
          Distribution::standardized_bernoulli(0.1)};
}

constexpr std::size_t kBernsteinTerms = 50;
constexpr std::size_t kQuadraticDim = 20;

/// Equal weights 1/sqrt(terms).
inline std::vector<double> bernstein_weights(std::size_t terms = kBernsteinTerms) {
  return std::vector<double>(terms, 1.0 / std::sqrt(static_cast<double>(terms)));
}

/// Dense Gaussian matrix scaled by 1/dim.
inline Matrix quadratic_form_matrix(std::uint64_t seed, std::size_t dim = kQuadraticDim) {
  Rng rng(seed);
  const auto n = static_cast<Eigen::Index>(dim);
  Matrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = rng.normal() / static_cast<double>(dim);
  return a;
}

constexpr std::size_t kJlPoints = 100;
constexpr std::size_t kJlDim = 256;
constexpr double kJlEps = 0.2;
constexpr double kJlDelta = 0.05;

/// Gaussian point cloud, one point per row.
inline Matrix jl_point_cloud(std::uint64_t seed, std::size_t points = kJlPoints,
                             std::size_t dim = kJlDim) {
  Rng rng(seed);
  Matrix x(static_cast<Eigen::Index>(points), static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    for (Eigen::Index j = 0; j < x.cols(); ++j) x(i, j) = rng.normal();
  return x;
}

constexpr std::size_t kSketchRows = 400;
constexpr std::size_t kSketchCols = 10;
constexpr double kSketchNoise = 1.0;
constexpr double kSketchDelta = 0.1;

constexpr std::size_t kNspColumns = 12;
constexpr std::size_t kNspSparsity = 2;
constexpr double kNspRho = 0.5;

/// u with 3 exp(-u^2) = 0.1.
inline double nsp_u() { return std::sqrt(std::log(30.0)); }

}  // namespace subgauss::scenarios

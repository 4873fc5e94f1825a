#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "subgauss/ensembles.hpp"

namespace subgauss {

/// A set T in R^n: finite points, the s-sparse unit sphere, or one point.
/// Sparse spheres may be scaled and shifted (c T + u) for width tests.
class PointSet {
 public:
  enum class Variant { Finite, SparseSphere, Singleton };

  static PointSet finite(std::vector<Vector> points);
  static PointSet finite(const Matrix& rows_as_points);
  static PointSet sparse_sphere(std::size_t n, std::size_t s);
  static PointSet singleton(Vector point);

  Variant variant() const noexcept { return variant_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t sparsity() const noexcept { return sparsity_; }
  double scale() const noexcept { return scale_; }
  const Vector& shift() const noexcept { return shift_; }
  /// Points as rows (finite and singleton sets only).
  const Matrix& points() const noexcept { return points_; }

  PointSet scaled(double factor) const;
  PointSet translated(const Vector& offset) const;

  /// sup_{y in T} <g, y>, exact.
  double support(const Vector& g) const;

 private:
  PointSet() = default;

  Variant variant_ = Variant::Finite;
  std::size_t dim_ = 0;
  std::size_t sparsity_ = 0;
  double scale_ = 1.0;
  Vector shift_;
  Matrix points_;
};

struct WidthEstimate {
  double estimate = 0.0;
  std::pair<double, double> ci{0.0, 0.0};  // 95% normal approximation
  std::size_t trials = 0;
};

WidthEstimate gaussian_width(const PointSet& t, std::size_t trials, std::uint64_t seed,
                             unsigned threads = 1);

/// sup_{y in T} ||y||_2, exact.
double radius(const PointSet& t);

/// Number of supports enumerated before EnumerationTooLarge is raised.
constexpr double kEnumerationCap = 1e5;

/// binom(n, k) as a double (exact below 2^53).
double binomial_coefficient(std::size_t n, std::size_t k);

/// Calls fn(support) for every k-subset of {0..n-1} in lexicographic order.
void for_each_combination(std::size_t n, std::size_t k,
                          const std::function<void(std::span<const int>)>& fn);

/// Extreme singular values of M restricted to a column support.
struct SupportSpectrum {
  double sigma_max = 0.0;
  double sigma_min = 0.0;
};

/// Spectra of M_S for every size-k support, via the Gram matrix M^T M.
/// sigma_min is 0 when M has fewer rows than k.
std::vector<SupportSpectrum> support_spectra(const Matrix& m, std::size_t k);

/// sup_{x in T} | ||M x||_2 - target ||x||_2 |.
double exact_sup_deviation(const Matrix& m, const PointSet& t, double target);

/// Points stored one per CSV row.
PointSet load_points_csv(const std::filesystem::path& path);

/// Euclidean norm of the k largest-magnitude coordinates.
double top_k_norm(const Vector& g, std::size_t k);

}  // namespace subgauss

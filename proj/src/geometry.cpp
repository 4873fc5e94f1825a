#include "subgauss/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "subgauss/error.hpp"
#include "subgauss/parallel.hpp"
#include "subgauss/stats.hpp"

namespace subgauss {

PointSet PointSet::finite(std::vector<Vector> points) {
  require(!points.empty(), ErrorKind::InvalidArgument, "finite point set must be non-empty");
  const Eigen::Index n = points.front().size();
  require(n > 0, ErrorKind::InvalidArgument, "points must have positive dimension");
  Matrix rows(static_cast<Eigen::Index>(points.size()), n);
  for (std::size_t i = 0; i < points.size(); ++i) {
    require(points[i].size() == n, ErrorKind::InvalidArgument, "points differ in dimension");
    rows.row(static_cast<Eigen::Index>(i)) = points[i].transpose();
  }
  return finite(rows);
}

PointSet PointSet::finite(const Matrix& rows_as_points) {
  require(rows_as_points.rows() > 0 && rows_as_points.cols() > 0, ErrorKind::InvalidArgument,
          "finite point set must be non-empty");
  PointSet t;
  t.variant_ = rows_as_points.rows() == 1 ? Variant::Singleton : Variant::Finite;
  t.dim_ = static_cast<std::size_t>(rows_as_points.cols());
  t.points_ = rows_as_points;
  t.shift_ = Vector::Zero(rows_as_points.cols());
  return t;
}

PointSet PointSet::sparse_sphere(std::size_t n, std::size_t s) {
  require(n > 0 && s > 0 && s <= n, ErrorKind::InvalidArgument, "sparse sphere needs 0 < s <= n");
  PointSet t;
  t.variant_ = Variant::SparseSphere;
  t.dim_ = n;
  t.sparsity_ = s;
  t.shift_ = Vector::Zero(static_cast<Eigen::Index>(n));
  return t;
}

PointSet PointSet::singleton(Vector point) {
  Matrix rows = point.transpose();
  return finite(rows);
}

PointSet PointSet::scaled(double factor) const {
  require(factor > 0.0, ErrorKind::InvalidArgument, "scale factor must be positive");
  PointSet t = *this;
  if (variant_ == Variant::SparseSphere) {
    t.scale_ *= factor;
    t.shift_ *= factor;
  } else {
    t.points_ *= factor;
  }
  return t;
}

PointSet PointSet::translated(const Vector& offset) const {
  require(static_cast<std::size_t>(offset.size()) == dim_, ErrorKind::InvalidArgument,
          "offset dimension mismatch");
  PointSet t = *this;
  if (variant_ == Variant::SparseSphere) t.shift_ += offset;
  else t.points_.rowwise() += offset.transpose();
  return t;
}

double top_k_norm(const Vector& g, std::size_t k) {
  std::vector<double> mags(static_cast<std::size_t>(g.size()));
  for (Eigen::Index i = 0; i < g.size(); ++i) mags[static_cast<std::size_t>(i)] = std::fabs(g(i));
  k = std::min(k, mags.size());
  std::nth_element(mags.begin(), mags.begin() + static_cast<std::ptrdiff_t>(k) - 1, mags.end(),
                   std::greater<>());
  double ss = 0.0;
  for (std::size_t i = 0; i < k; ++i) ss += mags[i] * mags[i];
  return std::sqrt(ss);
}

double PointSet::support(const Vector& g) const {
  if (variant_ == Variant::SparseSphere) return g.dot(shift_) + scale_ * top_k_norm(g, sparsity_);
  return (points_ * g).maxCoeff();
}

WidthEstimate gaussian_width(const PointSet& t, std::size_t trials, std::uint64_t seed,
                             unsigned threads) {
  require(trials >= 2, ErrorKind::InvalidArgument, "width needs at least 2 trials");
  const auto n = static_cast<Eigen::Index>(t.dim());
  std::vector<double> values(trials);
  parallel_for(trials, threads, [&](std::size_t i) {
    Rng rng = Rng::substream(seed, i);
    Vector g(n);
    for (Eigen::Index j = 0; j < n; ++j) g(j) = rng.normal();
    values[i] = t.support(g);
  });
  WidthEstimate out;
  out.trials = trials;
  out.estimate = mean(values);
  const double half = 1.959963984540054 * sample_stddev(values) / std::sqrt(double(trials));
  out.ci = {out.estimate - half, out.estimate + half};
  return out;
}

double radius(const PointSet& t) {
  if (t.variant() == PointSet::Variant::SparseSphere) {
    // sup ||u + c y||^2 = ||u||^2 + c^2 + 2c sup <u, y>.
    const Vector& u = t.shift();
    const double c = t.scale();
    return std::sqrt(u.squaredNorm() + c * c + 2.0 * c * top_k_norm(u, t.sparsity()));
  }
  return t.points().rowwise().norm().maxCoeff();
}

double binomial_coefficient(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  k = std::min(k, n - k);
  double out = 1.0;
  for (std::size_t i = 1; i <= k; ++i) out = out * static_cast<double>(n - k + i) / double(i);
  return std::round(out);
}

void for_each_combination(std::size_t n, std::size_t k,
                          const std::function<void(std::span<const int>)>& fn) {
  if (k > n) return;
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    fn(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == static_cast<int>(n - k + i - 1)) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::vector<SupportSpectrum> support_spectra(const Matrix& m, std::size_t k) {
  const auto n = static_cast<std::size_t>(m.cols());
  require(k >= 1 && k <= n, ErrorKind::InvalidArgument, "support size must be in [1, n]");
  const double count = binomial_coefficient(n, k);
  require(count <= kEnumerationCap, ErrorKind::EnumerationTooLarge,
          std::to_string(static_cast<long long>(count)) + " supports exceed the cap of 1e5");
  const Matrix gram = m.transpose() * m;
  const bool rank_short = static_cast<std::size_t>(m.rows()) < k;
  const auto kk = static_cast<Eigen::Index>(k);
  std::vector<SupportSpectrum> out;
  out.reserve(static_cast<std::size_t>(count));
  Matrix sub(kk, kk);
  Eigen::SelfAdjointEigenSolver<Matrix> eig;
  for_each_combination(n, k, [&](std::span<const int> s) {
    for (Eigen::Index a = 0; a < kk; ++a)
      for (Eigen::Index b = 0; b < kk; ++b) sub(a, b) = gram(s[a], s[b]);
    eig.compute(sub, Eigen::EigenvaluesOnly);
    const Vector& ev = eig.eigenvalues();  // ascending
    SupportSpectrum spec;
    spec.sigma_max = std::sqrt(std::max(ev(kk - 1), 0.0));
    spec.sigma_min = rank_short ? 0.0 : std::sqrt(std::max(ev(0), 0.0));
    out.push_back(spec);
  });
  return out;
}

double exact_sup_deviation(const Matrix& m, const PointSet& t, double target) {
  require(static_cast<std::size_t>(m.cols()) == t.dim(), ErrorKind::InvalidArgument,
          "matrix columns do not match set dimension");
  if (t.variant() == PointSet::Variant::SparseSphere) {
    require(t.shift().isZero(0.0), ErrorKind::InvalidArgument,
            "deviation over a shifted sparse sphere is not supported");
    double worst = 0.0;
    for (const SupportSpectrum& s : support_spectra(m, t.sparsity())) {
      worst = std::max({worst, s.sigma_max - target, target - s.sigma_min});
    }
    return t.scale() * worst;
  }
  const Matrix& p = t.points();
  const Matrix images = m * p.transpose();  // one column per point
  double worst = 0.0;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    worst = std::max(worst, std::fabs(images.col(i).norm() - target * p.row(i).norm()));
  }
  return worst;
}

PointSet load_points_csv(const std::filesystem::path& path) {
  return PointSet::finite(read_matrix_csv(path));
}

}  // namespace subgauss

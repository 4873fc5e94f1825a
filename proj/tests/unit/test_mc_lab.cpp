#include "doctest.h"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>

#include "subgauss/error.hpp"
#include "subgauss/mc_lab.hpp"

using namespace subgauss;

namespace {

// psi_2 of ||X|| - sqrt(m) with ||X||^2 = L^2 J, J ~ Bin(m, 1/L^2), by direct
// bisection on the pmf-weighted mgf.
double tightness_oracle(double K, std::size_t m) {
  const double L2 = K * K * std::log(K), p = 1.0 / L2;
  std::vector<double> logw(m + 1), dev(m + 1);
  for (std::size_t j = 0; j <= m; ++j) {
    logw[j] = std::lgamma(m + 1.0) - std::lgamma(j + 1.0) - std::lgamma(m - j + 1.0) +
              j * std::log(p) + (m - j) * std::log1p(-p);
    dev[j] = std::sqrt(L2 * j) - std::sqrt(double(m));
  }
  const auto log_mgf = [&](double t) {
    double top = -INFINITY;
    for (std::size_t j = 0; j <= m; ++j) top = std::max(top, logw[j] + dev[j] * dev[j] / (t * t));
    double acc = 0.0;
    for (std::size_t j = 0; j <= m; ++j) acc += std::exp(logw[j] + dev[j] * dev[j] / (t * t) - top);
    return top + std::log(acc);
  };
  double lo = 0.1, hi = 100.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = std::sqrt(lo * hi);
    (log_mgf(mid) > std::log(2.0) ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace

TEST_CASE("degenerate sums have no tail") {
  SumSpec spec{{1.0, 0.5}, {Distribution::rademacher(), Distribution::rademacher()}};
  const std::vector<double> grid{0.1, 1.0};
  const TrialBatch b = empirical_tail(spec, 1000, grid, 1);
  for (double v : b.values) CHECK(v == doctest::Approx(0.0).epsilon(1e-12));
  for (const auto& s : b.survival) CHECK(s.count == 0);
}

TEST_CASE("diagonal quadratic form equals the weighted sum") {
  const std::vector<double> a{0.5, -1.0, 2.0};
  Matrix A = Matrix::Zero(3, 3);
  for (int i = 0; i < 3; ++i) A(i, i) = a[static_cast<std::size_t>(i)];
  const Distribution law = Distribution::standardized_bernoulli(0.3);
  const TrialBatch hw = empirical_hw_tail(A, law, 2000, {}, 4);
  const TrialBatch sum = empirical_tail(SumSpec{a, {law, law, law}}, 2000, {}, 4);
  for (std::size_t t = 0; t < hw.values.size(); ++t)
    CHECK(hw.values[t] == doctest::Approx(std::fabs(sum.values[t])).epsilon(1e-12));
}

TEST_CASE("identity quadratic form follows the chi-square law") {
  const std::size_t n = 10;
  const double t = 2.0 * std::sqrt(2.0 * n);
  const std::vector<double> grid{t};
  const TrialBatch b = empirical_hw_tail(Matrix::Identity(n, n), Distribution::gaussian(), 200000, grid, 5);
  boost::math::chi_squared chi(static_cast<double>(n));
  const double exact = boost::math::cdf(boost::math::complement(chi, n + t)) +
                       (n - t > 0 ? boost::math::cdf(chi, n - t) : 0.0);
  const double sigma = std::sqrt(exact * (1 - exact) / 200000.0);
  CHECK(std::fabs(b.survival[0].survival - exact) <= 4.0 * sigma);
}

TEST_CASE("rank-one Rademacher form by enumeration") {
  // x1 (x2 + x3) is 0 or +-2 with equal mass on |.| in {0, 2}.
  Matrix A = Matrix::Zero(3, 3);
  A(0, 1) = A(0, 2) = 1.0;
  const std::vector<double> grid{1.0};
  const TrialBatch b = empirical_hw_tail(A, Distribution::rademacher(), 100000, grid, 6);
  for (double v : b.values) CHECK((v == 0.0 || v == 2.0));
  CHECK(b.survival[0].lo <= 0.5);
  CHECK(b.survival[0].hi >= 0.5);
}

TEST_CASE("deviation batch") {
  Vector e = Vector::Zero(3);
  e(0) = 1.0;
  const PointSet T = PointSet::singleton(e);
  const EnsembleSpec g = make_ensemble(Distribution::gaussian(), 16, 3);
  const Multiplier id = Multiplier::identity(16);
  TrialBatch b = deviation_batch(g, id, T, 4001, 7);
  std::vector<double> v = b.values;
  std::sort(v.begin(), v.end());
  CHECK(v[2000] <= 1.0);

  const TrialBatch twice = deviation_batch(g, id.scaled(2.0), T, 4001, 7);
  for (std::size_t t = 0; t < b.values.size(); ++t)
    CHECK(twice.values[t] == doctest::Approx(2.0 * b.values[t]).epsilon(1e-12));

  const EnsembleSpec skewed = make_ensemble(Distribution::bernoulli01(0.3), 16, 3);
  CHECK_THROWS_AS(deviation_batch(skewed, Multiplier::ortho_projection(16), T, 10, 1), Error);
  CHECK_NOTHROW(deviation_batch(skewed, id, T, 10, 1));
}

TEST_CASE("results do not depend on the thread count") {
  const EnsembleSpec g = make_ensemble(Distribution::scaled_bernoulli(4.0), 8, 6);
  const PointSet T = PointSet::sparse_sphere(6, 2);
  const TrialBatch a = deviation_batch(g, Multiplier::identity(8), T, 3000, 8, 1);
  const TrialBatch b = deviation_batch(g, Multiplier::identity(8), T, 3000, 8, 4);
  CHECK(a.values == b.values);
}

TEST_CASE("domination report") {
  TrialBatch batch;
  batch.trials = 100;
  batch.survival = {{1.0, 50, 0.5, 0.4, 0.6}, {2.0, 30, 0.3, 0.2, 0.4}, {3.0, 0, 0.0, 0.0, 0.04}};
  const TailBound loose{"loose", 1.0, 1.0, 0.1, Provenance::User};
  CHECK(check_domination(batch, loose).holds);
  const TailBound tight{"tight", 1.0, 1.0, 5.0, Provenance::User};
  const DominationReport r = check_domination(batch, tight);
  CHECK(r.checked <= 3);
}

TEST_CASE("tightness") {
  CHECK(tightness_exact_psi2(4.0, 23) == doctest::Approx(tightness_oracle(4.0, 23)).epsilon(1e-8));
  CHECK(tightness_exact_psi2(8.0, 200) == doctest::Approx(tightness_oracle(8.0, 200)).epsilon(1e-8));
  const TightnessReport r = tightness_check(4.0, 23, 100000, 9);
  CHECK(r.passes);
  CHECK(r.threshold == doctest::Approx(0.2 * 4.0 * std::sqrt(std::log(4.0))));
  CHECK(tightness_check(4.0, 230, 100000, 9).passes);
}

TEST_CASE("scaling fit needs several K") {
  const std::vector<double> one{4.0};
  Vector e = Vector::Ones(1);
  CHECK_THROWS_AS(scaling_fit(one, [](double) { return std::size_t{23}; }, PointSet::singleton(e), 10000, 1), Error);
}

TEST_CASE("increments") {
  const EnsembleSpec r = make_ensemble(Distribution::rademacher(), 12, 4);
  const Multiplier id = Multiplier::identity(12);
  Vector x = Vector::Zero(4);
  x(0) = 0.6;
  x(2) = 0.8;
  const PsiNorm zero = increment_psi2(r, id, x, -x, 20000, 3);
  CHECK(zero.degenerate);
  const PsiNorm doubled = increment_psi2(r, id, 2.0 * x, x, 20000, 3);
  TrialBatch direct = deviation_batch(r, id, PointSet::singleton(x), 20000, 3);
  attach_psi2(direct);
  CHECK(std::fabs(doubled.value - direct.psi2->value) <=
        doubled.ci_half_width() + direct.psi2->ci_half_width() + 1e-9);
}

TEST_CASE("JL helpers") {
  const double K = std::sqrt(8.0 / 3.0);
  CHECK(jl_all_pairs_dimension(K, 0.2, 0.05, 100, 0.7) == jl_dimension(K, 0.2, 0.05 / 4950.0, 0.7));
  Matrix pts(2, 8);
  pts.setZero();
  pts(0, 0) = 1.0;
  pts(1, 1) = 1.0;
  const JlReport big = jl_probe(pts, Distribution::gaussian(), 4000, 0.2, 20, 4);
  CHECK(big.pairs == 1);
  CHECK(big.success_rate == 1.0);

  const JlOptimalityReport o = jl_optimality_probe(0.1, 4, 0.1, 50000, 2);
  CHECK(o.proof_event_exact == doctest::Approx(1.0 - std::pow(0.9, 4)));
  CHECK(o.failure_rate >= 0.2);
  CHECK(o.floor == doctest::Approx(1.0 - std::exp(-0.25)));
  CHECK(o.reproduces);
  CHECK(jl_optimality_probe(0.01, 0, 0.1, 1000, 2).m == 50);
}

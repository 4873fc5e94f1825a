#include "doctest.h"

#include <cmath>
#include <filesystem>

#include "subgauss/ensembles.hpp"
#include "subgauss/error.hpp"
#include "subgauss/orlicz.hpp"

using namespace subgauss;

namespace {

// Plain bisection on K^2 log K = level over K > 1.
double k_oracle(double level) {
  double lo = 1.0, hi = 2.0;
  while (hi * hi * std::log(hi) < level) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid * mid * std::log(mid) < level ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("K for standardized Bernoulli") {
  CHECK(k_for_standardized_bernoulli(0.5) == doctest::Approx(k_oracle(4.0)).epsilon(1e-10));
  CHECK(k_for_standardized_bernoulli(0.5) == doctest::Approx(2.232018).epsilon(1e-6));
  CHECK(k_for_standardized_bernoulli(0.1) == doctest::Approx(k_oracle(1.0 / 0.09)).epsilon(1e-10));
  CHECK(k_for_standardized_bernoulli(0.1) == doctest::Approx(3.12342).epsilon(1e-5));
  CHECK(k_for_standardized_bernoulli(0.3) == doctest::Approx(2.35680).epsilon(1e-5));
  CHECK(k_for_standardized_bernoulli(0.2) == doctest::Approx(k_for_standardized_bernoulli(0.8)));
  const double K = solve_k_log_k(4.0);
  CHECK(K * K * std::log(K) == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("entry psi_2 stays below the reported K") {
  Rng rng(21);
  for (double p : {0.1, 0.5}) {
    const Distribution d = Distribution::standardized_bernoulli(p);
    std::vector<double> xs(1'000'000);
    for (double& x : xs) x = d.sample(rng);
    SampleOptions opts;
    opts.resamples = 50;
    const PsiNorm est = psi_norm_from_samples(xs, 2.0, opts);
    CHECK(est.value - est.ci_half_width() <= sub_gaussian_parameter(d));
  }
}

TEST_CASE("sub-Gaussian parameters") {
  CHECK(sub_gaussian_parameter(Distribution::gaussian()) == doctest::Approx(std::sqrt(8.0 / 3.0)));
  CHECK(sub_gaussian_parameter(Distribution::scaled_bernoulli(8.0)) == doctest::Approx(8.0));
  CHECK(sub_gaussian_parameter(Distribution::rademacher()) >= kUnitVarianceFloor);
  CHECK_THROWS_AS(sub_gaussian_parameter(Distribution::exponential(1.0)), Error);
}

TEST_CASE("sample_matrix is deterministic") {
  const EnsembleSpec spec = make_ensemble(Distribution::rademacher(), 2, 2);
  const Matrix a = sample_matrix(spec, 5), b = sample_matrix(spec, 5), c = sample_matrix(spec, 6);
  CHECK(a == b);
  CHECK(a.cwiseAbs() == Matrix::Ones(2, 2));
  CHECK(a.rows() == 2);
  (void)c;
}

TEST_CASE("scaled Bernoulli nonzero count") {
  // Expected nonzeros in a 100 x 1 matrix: 100 / (16 log 4).
  const EnsembleSpec spec = make_ensemble(Distribution::scaled_bernoulli(4.0), 100, 1);
  const double p = 1.0 / (16.0 * std::log(4.0));
  constexpr int seeds = 10000;
  double total = 0.0;
  for (int s = 0; s < seeds; ++s) total += (sample_matrix(spec, substream_seed(1, s)).array() != 0.0).count();
  const double mean = total / seeds;
  const double sigma = std::sqrt(100.0 * p * (1.0 - p) / seeds);
  CHECK(std::fabs(mean - 100.0 * p) <= 3.0 * sigma);
}

TEST_CASE("isotropy reports") {
  const IsotropyReport g = isotropy_report(make_ensemble(Distribution::gaussian(), 4, 8), 100000, 1);
  CHECK(g.passes);
  CHECK(g.frobenius_error <= 0.15);
  const IsotropyReport sb = isotropy_report(make_ensemble(Distribution::scaled_bernoulli(4.0), 4, 6), 20000, 2);
  CHECK(sb.passes);
  const IsotropyReport c = isotropy_report(make_ensemble(Distribution::constant(1.0), 4, 3), 1000, 3);
  CHECK_FALSE(c.passes);
  CHECK(c.mean_off_diagonal == doctest::Approx(1.0));
}

TEST_CASE("row K estimate for sparse ternary") {
  const EnsembleSpec spec = make_ensemble(Distribution::sparse_ternary(0.5), 4, 16);
  const RowKEstimate est = estimate_row_k(spec, 4, 20000, 9);
  CHECK(est.per_direction.size() == 6);
  CHECK(est.K > 1.0);
}

TEST_CASE("multipliers") {
  const Multiplier id = Multiplier::identity(9);
  CHECK(id.frobenius_norm() == doctest::Approx(3.0));
  CHECK(id.operator_norm() == doctest::Approx(1.0));
  CHECK(id.is_diagonal());
  const Multiplier proj = Multiplier::ortho_projection(5);
  CHECK((proj.matrix() * Vector::Ones(5)).norm() <= 1e-14);
  CHECK(proj.operator_norm() == doctest::Approx(1.0));
  CHECK(proj.frobenius_norm() == doctest::Approx(2.0));
  CHECK_FALSE(proj.is_diagonal());
  const Multiplier twice = id.scaled(2.0);
  CHECK(twice.operator_norm() == doctest::Approx(2.0));
  CHECK_THROWS_AS(Multiplier::dense(Matrix::Zero(2, 2)), Error);
  Vector d(3);
  d << 3.0, -4.0, 0.0;
  CHECK(Multiplier::diagonal(d).operator_norm() == doctest::Approx(4.0));
}

TEST_CASE("matrix IO round trips") {
  Matrix m(2, 3);
  m << 1.5, -2.0, 1e-300, 0.1, 3.0, -7.25;
  const auto dir = std::filesystem::temp_directory_path();
  write_matrix_csv(m, dir / "sg_test.csv");
  CHECK(read_matrix_csv(dir / "sg_test.csv") == m);
  write_matrix_binary(m, dir / "sg_test.bin");
  CHECK(read_matrix_binary(dir / "sg_test.bin") == m);
  CHECK_THROWS_AS(read_matrix_csv(dir / "does_not_exist.csv"), Error);
}

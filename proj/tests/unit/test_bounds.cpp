#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "subgauss/bounds.hpp"
#include "subgauss/error.hpp"

using namespace subgauss;

TEST_CASE("new Bernstein arithmetic") {
  const std::vector<double> a{1.0}, k{2.0};
  const TailBound b = new_bernstein_bound(a, k);
  CHECK(b.V == doctest::Approx(4.0 * std::log(2.0)));
  CHECK(b.S == doctest::Approx(4.0 * std::log(2.0)));
  CHECK(b.provenance == Provenance::ProofTraced);
  CHECK(b.c == doctest::Approx(1.0 / (144.0 * std::numbers::e * std::numbers::e)));

  const std::size_t m = 16;
  const std::vector<double> eq(m, 0.25), ks(m, 3.0);
  const TailBound e = new_bernstein_bound(eq, ks);
  CHECK(e.V == doctest::Approx(9.0 * std::log(3.0)));
  CHECK(e.S == doctest::Approx(9.0 * std::log(3.0) / 4.0));
  CHECK_THROWS_AS(new_bernstein_bound(a, std::vector<double>{1.1}), Error);
}

TEST_CASE("standard Bernstein and the variance comparison") {
  const std::vector<double> a{1.0};
  const TailBound s = standard_bernstein_bound(a, 2.0, 1.0);
  CHECK(s.V == doctest::Approx(16.0));
  CHECK(s.S == doctest::Approx(4.0));
  CHECK(standard_bernstein_bound(a, 1.0, 1.0).V == doctest::Approx(1.0));
  const double ratio = new_bernstein_bound(a, std::vector<double>{8.0}, 1.0).V / standard_bernstein_bound(a, 8.0, 1.0).V;
  CHECK(ratio == doctest::Approx(std::log(8.0) / 64.0));
  for (double K = 1.2; K < 50.0; K *= 1.1) {
    const std::vector<double> ks{K};
    CHECK(new_bernstein_bound(a, ks, 1.0).V <= standard_bernstein_bound(a, K, 1.0).V);
  }
}

TEST_CASE("tail bound shape") {
  const TailBound b{"x", 4.0, 2.0, 0.3, Provenance::User};
  const double sw = b.switch_point();
  CHECK(sw == doctest::Approx(2.0));
  CHECK(std::min(sw * sw / b.V, sw / b.S) == doctest::Approx(sw / b.S));
  CHECK(b(sw * (1 - 1e-12)) == doctest::Approx(b(sw * (1 + 1e-12))));
  double prev = 1.0;
  for (double t = 0.0; t < 100.0; t += 0.25) {
    CHECK(b(t) <= prev + 1e-15);
    CHECK(b(t) <= 1.0);
    CHECK(b(t) > 0.0);
    prev = b(t);
  }
}

TEST_CASE("Hanson-Wright arithmetic") {
  const double K = 2.0, kappa = 4.0 * std::log(2.0);
  const TailBound id = new_hanson_wright_bound(Matrix::Identity(5, 5), K, 1.0);
  CHECK(id.V == doctest::Approx(5.0 * kappa));
  CHECK(id.S == doctest::Approx(kappa));
  Vector u = Vector::Ones(4) / 2.0;
  const TailBound r1 = new_hanson_wright_bound(u * u.transpose(), K, 1.0);
  CHECK(r1.V == doctest::Approx(kappa));
  CHECK(r1.S == doctest::Approx(kappa));
  CHECK_THROWS_AS(new_hanson_wright_bound(Matrix::Identity(2, 2), 1.0, 1.0), Error);
}

TEST_CASE("diagonal Hanson-Wright equals Bernstein bitwise") {
  std::vector<double> a{0.3, -1.7, 0.05, 2.2, 1e-3};
  Matrix A = Matrix::Zero(5, 5);
  for (int i = 0; i < 5; ++i) A(i, i) = a[static_cast<std::size_t>(i)];
  for (double K : {1.25, 2.0, 3.7}) {
    const std::vector<double> ks(a.size(), K);
    const TailBound hw = new_hanson_wright_bound(A, K, 0.25);
    const TailBound bn = new_bernstein_bound(a, ks, 0.25);
    CHECK(hw.V == bn.V);
    CHECK(hw.S == bn.S);
  }
}

TEST_CASE("non-unit Hanson-Wright") {
  Matrix A(2, 2);
  A << 1.0, 0.5, 0.5, -2.0;
  const TailBound base = new_hanson_wright_bound(A, 3.0, 1.0);
  const TailBound same = hanson_wright_nonunit(A, 3.0, 1.0, 1.0, 1.0);
  CHECK(same.V == doctest::Approx(base.V));
  CHECK(same.S == doctest::Approx(base.S));
  const TailBound worst = hanson_wright_nonunit(A, 3.0, 1.0, 3.0, 1.0);
  // alpha2^2 gamma^2 K^2 log(K / alpha1) with gamma = alpha2 = K = 3.
  CHECK(worst.V == doctest::Approx(A.squaredNorm() * std::pow(3.0, 6) * std::log(3.0)));
  const double op = Eigen::JacobiSVD<Matrix>(A).singularValues()(0);
  CHECK(worst.S == doctest::Approx(op * std::pow(3.0, 4) * std::log(3.0)));
}

TEST_CASE("moment bound") {
  CHECK(moment_bound(1.0, 2.0) == doctest::Approx(6.0));
  CHECK(moment_bound(1.0, 7.0) == doctest::Approx(6.0));
  CHECK(moment_bound(2.0, 2.0) == doctest::Approx(36.0 * 4.0 * 4.0 * std::log(2.0)));
  CHECK(moment_bound(2.0, 2.0) == doctest::Approx(399.3).epsilon(2e-4));
  CHECK(moment_bound(2.0, 2.0, 3.0) == doctest::Approx(81.0 * 4.0 * 4.0 * std::log(2.0)));
}

TEST_CASE("dimension formulas") {
  const std::size_t m = jl_dimension(2.0, 0.2, 0.01, 1.0);
  CHECK(m == static_cast<std::size_t>(std::ceil(4.0 * std::log(2.0) / 0.04 * std::log(100.0))));
  const std::size_t half = jl_dimension(2.0, 0.1, 0.01, 1.0);
  CHECK(std::fabs(double(half) - 4.0 * double(m)) <= 4.0);
  CHECK(std::fabs(double(jl_dimension(2.0, 0.2, 1e-4, 1.0)) - 2.0 * double(m)) <= 2.0);

  const double complexity = 2.0 * std::log(std::numbers::e * 12.0 / 2.0) + 1.0;
  CHECK(nsp_dimension(0.5, 0.5, 2, 12, 1.0, 1.0) ==
        static_cast<std::size_t>(std::ceil(4.0 * 4.0 * complexity)));
  CHECK(nsp_dimension(0.5, 0.3, 2, 12, 1.0, 1.0) == nsp_dimension(0.5, 0.7, 2, 12, 1.0, 1.0));

  const std::size_t sk = sketch_dimension(2.0, 10.0, 0.2, 1.0);
  CHECK(std::fabs(double(sketch_dimension(2.0, 10.0, 0.1, 1.0)) - 4.0 * double(sk)) <= 4.0);
}

TEST_CASE("RIP to robust null space parameters") {
  const RnspParameters p = rip_to_rnsp(0.25);
  CHECK(p.rho_prime == doctest::Approx(0.25 / (std::sqrt(0.9375) - 0.0625)));
  CHECK(p.rho_prime == doctest::Approx(0.27602).epsilon(1e-4));
  CHECK(p.tau_prime == doctest::Approx(1.23438).epsilon(1e-4));
  const RnspParameters small = rip_to_rnsp(1e-9);
  CHECK(small.rho_prime == doctest::Approx(1e-9).epsilon(1e-6));
  CHECK(small.tau_prime == doctest::Approx(1.0).epsilon(1e-6));
  const RnspParameters edge = rip_to_rnsp(0.49);
  CHECK(edge.rho_prime < 0.98);
  CHECK(edge.tau_prime < 2.0);
  CHECK_THROWS_AS(rip_to_rnsp(0.5), Error);
  CHECK_THROWS_AS(rip_to_rnsp(0.0), Error);
}

TEST_CASE("binomial tail lower bound") {
  CHECK(kl_bernoulli(0.2, 0.1) == doctest::Approx(0.2 * std::log(2.0) + 0.8 * std::log(8.0 / 9.0)));
  CHECK(kl_bernoulli(0.3, 0.3) == doctest::Approx(0.0));
  const double b = binom_tail_lower(50, 0.1, 10.0);
  CHECK(b == doctest::Approx(0.01357).epsilon(1e-3));

  // Direct summation oracle in linear space.
  double direct = 0.0;
  for (int j = 9; j <= 50; ++j) direct += std::exp(std::lgamma(51.0) - std::lgamma(j + 1.0) - std::lgamma(51.0 - j) +
                                              j * std::log(0.1) + (50 - j) * std::log(0.9));
  CHECK(binom_tail_exact(50, 0.1, 9) == doctest::Approx(direct).epsilon(1e-12));
  CHECK(binom_tail_exact(50, 0.1, 9) >= b);

  double prev = 1.0;
  for (double k = 6.01; k < 25.0; k += 0.37) {
    const double v = binom_tail_lower(50, 0.1, k);
    CHECK(v <= prev + 1e-15);
    prev = v;
  }
  CHECK_THROWS_AS(binom_tail_lower(50, 0.3, 10.0), Error);
  CHECK_THROWS_AS(binom_tail_lower(50, 0.1, 30.0), Error);
}

TEST_CASE("scalar inequalities") {
  const auto checks = appendix_c_check(100000);
  CHECK(checks.size() >= 4);
  for (const auto& c : checks) {
    CAPTURE(c.name);
    CHECK(c.holds);
    CHECK(c.max_slack <= 1e-12);
  }
  CHECK(0.5 * std::pow(8.0, 0.125) == doctest::Approx(0.648420).epsilon(1e-6));
}

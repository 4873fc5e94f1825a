#include "doctest.h"

#include <cmath>
#include <vector>

#include "subgauss/distribution.hpp"
#include "subgauss/error.hpp"
#include "subgauss/stats.hpp"

using namespace subgauss;

TEST_CASE("factories validate parameter domains") {
  CHECK_THROWS_AS(Distribution::gaussian(0.0), Error);
  CHECK_THROWS_AS(Distribution::bernoulli01(1.5), Error);
  CHECK_THROWS_AS(Distribution::standardized_bernoulli(0.0), Error);
  CHECK_THROWS_AS(Distribution::scaled_bernoulli(3.9), Error);
  CHECK_THROWS_AS(Distribution::sparse_ternary(0.0), Error);
  CHECK_THROWS_AS(Distribution::exponential(-1.0), Error);
  CHECK_NOTHROW(Distribution::scaled_bernoulli(4.0));
  CHECK_NOTHROW(Distribution::sparse_ternary(1.0));
}

TEST_CASE("moments of the unit-variance laws") {
  for (const Distribution& d :
       {Distribution::gaussian(), Distribution::rademacher(), Distribution::standardized_bernoulli(0.1),
        Distribution::standardized_bernoulli(0.7), Distribution::scaled_bernoulli(4.0),
        Distribution::scaled_bernoulli(12.0), Distribution::sparse_ternary(0.25)}) {
    CAPTURE(d.name());
    CHECK(d.mean() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(d.second_moment() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.is_mean_zero());
  }
  CHECK(Distribution::exponential(2.0).mean() == doctest::Approx(0.5));
  CHECK(Distribution::bounded_uniform(3.0).second_moment() == doctest::Approx(3.0));
}

TEST_CASE("sample moments agree with the closed forms") {
  Rng rng(7);
  for (const Distribution& d : {Distribution::standardized_bernoulli(0.2), Distribution::scaled_bernoulli(4.0),
                                Distribution::exponential(2.0)}) {
    CAPTURE(d.name());
    constexpr int n = 400000;
    std::vector<double> xs(n);
    for (double& x : xs) x = d.sample(rng);
    const double sd = std::sqrt(d.variance());
    CHECK(std::fabs(mean(xs) - d.mean()) <= 5.0 * sd / std::sqrt(double(n)));
  }
}

TEST_CASE("scaled Bernoulli support sits at +-sqrt(K^2 log K)") {
  const Distribution d = Distribution::scaled_bernoulli(4.0);
  const double level = std::sqrt(16.0 * std::log(4.0));
  CHECK(d.scaled_bernoulli_level() == doctest::Approx(16.0 * std::log(4.0)));
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double x = d.sample(rng);
    CHECK((x == 0.0 || std::fabs(std::fabs(x) - level) < 1e-12));
  }
  const auto atoms = d.atoms();
  REQUIRE(atoms);
  double total = 0.0;
  for (double p : atoms->probs) total += p;
  CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("standardized Bernoulli at one half is Rademacher") {
  Rng rng(11);
  const Distribution d = Distribution::standardized_bernoulli(0.5);
  for (int i = 0; i < 200; ++i) CHECK(std::fabs(d.sample(rng)) == doctest::Approx(1.0));
}

TEST_CASE("expectation by quadrature") {
  const Distribution g = Distribution::gaussian();
  CHECK(g.expectation([](double x) { return x * x * x * x; }) == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(Distribution::exponential(1.0).expectation([](double x) { return x; }) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::isinf(g.expectation([](double x) { return std::exp(x * x); })));
}

TEST_CASE("parse_distribution by name") {
  CHECK(parse_distribution("rademacher", 0.0) == Distribution::rademacher());
  CHECK(parse_distribution("normal", 2.0) == Distribution::gaussian(2.0));
  CHECK(parse_distribution("scaled_bernoulli", 8.0) == Distribution::scaled_bernoulli(8.0));
  CHECK_THROWS_AS(parse_distribution("cauchy", 1.0), Error);
}

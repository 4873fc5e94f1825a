#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "subgauss/rng.hpp"

namespace subgauss {

/// Finite-support law: P(X = values[i]) = probs[i].
struct DiscreteLaw {
  std::vector<double> values;
  std::vector<double> probs;
};

/// Scalar entry law. Construct through the named factories, which validate
/// the parameter domain.
class Distribution {
 public:
  enum class Kind {
    Gaussian,               // Normal(0, sigma^2)
    Rademacher,             // +-1 with probability 1/2
    BernoulliZeroOne,       // {0, 1}, P(1) = p
    StandardizedBernoulli,  // (Bernoulli(p) - p) / sqrt(p(1-p))
    ScaledBernoulli,        // X^2 / (K^2 log K) ~ Bernoulli(1 / (K^2 log K)), Rademacher sign
    SparseTernary,          // +-1/sqrt(q) with probability q, else 0
    Exponential,            // rate lambda
    BoundedUniform,         // Uniform[-M, M]
    Constant,               // X = c almost surely
  };

  static Distribution gaussian(double sigma = 1.0);
  static Distribution rademacher();
  static Distribution bernoulli01(double p);
  static Distribution standardized_bernoulli(double p);
  static Distribution scaled_bernoulli(double K);
  static Distribution sparse_ternary(double q);
  static Distribution exponential(double lambda);
  static Distribution bounded_uniform(double M);
  static Distribution constant(double value);

  Kind kind() const noexcept { return kind_; }
  double parameter() const noexcept { return param_; }

  /// Short identifier, e.g. "scaled_bernoulli(K=4)".
  std::string name() const;

  double mean() const;
  double second_moment() const;
  double variance() const;
  bool is_mean_zero() const;
  bool is_symmetric() const;

  /// For ScaledBernoulli: L^2 = K^2 log K.
  double scaled_bernoulli_level() const;

  double sample(Rng& rng) const;

  /// Atoms of finite-support laws; nullopt for continuous laws.
  std::optional<DiscreteLaw> atoms() const;

  /// E f(X). Exact for finite-support laws, adaptive Gauss-Kronrod otherwise.
  /// Returns +inf when the integral diverges or overflows.
  double expectation(const std::function<double(double)>& f) const;

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  Distribution(Kind kind, double param) : kind_(kind), param_(param) {}

  Kind kind_;
  double param_;
};

/// Parses "gaussian", "rademacher", "bernoulli01", "std_bernoulli",
/// "scaled_bernoulli", "sparse_ternary", "exponential", "uniform", "constant"
/// with the law's parameter.
Distribution parse_distribution(const std::string& name, double parameter);

/// Parameter used by parse_distribution when none is given.
double default_parameter(const std::string& name);

}  // namespace subgauss

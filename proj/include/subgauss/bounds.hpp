#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "subgauss/ensembles.hpp"

namespace subgauss {

enum class Provenance { ProofTraced, Fitted, User };

std::string to_string(Provenance p);

/// t -> min(1, 2 exp(-c min(t^2/V, t/S))).
struct TailBound {
  std::string name;
  double V = 1.0;  // variance proxy
  double S = 1.0;  // linear scale
  double c = 1.0;
  Provenance provenance = Provenance::User;

  double operator()(double t) const;
  double log_value(double t) const;  // log of the unclamped bound
  /// t where the quadratic and linear regimes meet.
  double switch_point() const { return V / S; }
};

struct BoundRow {
  double t = 0.0;
  double bound = 0.0;
  std::optional<double> partner;
};

struct BoundReport {
  TailBound bound;
  std::optional<TailBound> partner;
  std::vector<std::pair<std::string, double>> inputs;
  std::vector<BoundRow> rows;
};

BoundReport make_bound_report(const TailBound& bound, std::optional<TailBound> partner,
                              std::span<const double> grid,
                              std::vector<std::pair<std::string, double>> inputs = {});

/// K^2 log K.
double k2logk(double K);

/// c = min(1/(4 C0), c0/2) with C0 = (C1 e)^2, c0 = 1/(2 C1 e). C1 = 6 when the
/// summands satisfy E|Y| <= 2, and 6 + first_moment above that.
double bernstein_proof_constant(double first_moment = 2.0);

/// Moment-bound constant for E|Y| <= first_moment.
double moment_constant(double first_moment = 2.0);

TailBound new_bernstein_bound(std::span<const double> a, std::span<const double> ks,
                              std::optional<double> c = std::nullopt);
TailBound standard_bernstein_bound(std::span<const double> a, double K,
                                   std::optional<double> c = std::nullopt);

/// Precondition K >= sqrt(1/log 2). c defaults to the fitted constant.
TailBound new_hanson_wright_bound(const Matrix& A, double K, std::optional<double> c = std::nullopt);
TailBound hanson_wright_nonunit(const Matrix& A, double K, double alpha1, double alpha2,
                                std::optional<double> c = std::nullopt);

/// C^p p^p (K^2 log K)^{p-1}.
double moment_bound(double p, double K, double first_moment = 2.0);

std::size_t jl_dimension(double K, double eps, double delta, double C);
std::size_t nsp_dimension(double rho, double p, std::size_t s, std::size_t n, double u,
                          double C);
std::size_t sketch_dimension(double K, double width_sq, double delta, double c0);

struct RnspParameters {
  double rho_prime = 0.0;
  double tau_prime = 0.0;
};

/// RIP constant delta in (0, 1/2) to robust null space parameters.
RnspParameters rip_to_rnsp(double delta);

/// KL divergence between Bernoulli(x) and Bernoulli(y).
double kl_bernoulli(double x, double y);

/// Lower bound on P(Binomial(m, p) >= k - 1). Requires p < 1/4, mp >= 1,
/// mp + 1 < k < m/2.
double binom_tail_lower(std::size_t m, double p, double k);

/// P(Binomial(m, p) >= j), summed in log space.
double binom_tail_exact(std::size_t m, double p, std::size_t j);

/// log P(Binomial(m, p) = j).
double binom_log_pmf(std::size_t m, double p, std::size_t j);

struct ScalarInequalityCheck {
  std::string name;
  double max_slack = 0.0;  // max of (lhs - rhs) / max(1, |rhs|); <= 0 means it holds
  double argmax = 0.0;
  std::size_t points = 0;
  bool holds = false;
};

std::vector<ScalarInequalityCheck> appendix_c_check(std::size_t grid_density);

}  // namespace subgauss

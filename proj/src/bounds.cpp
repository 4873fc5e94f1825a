#include "subgauss/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "subgauss/constants.hpp"
#include "subgauss/error.hpp"
#include "subgauss/orlicz.hpp"

namespace subgauss {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::ProofTraced: return "proof-traced";
    case Provenance::Fitted: return "fitted";
    case Provenance::User: return "user";
  }
  return "user";
}

double TailBound::log_value(double t) const {
  if (t <= 0.0) return std::log(2.0);
  return std::log(2.0) - c * std::min(t * t / V, t / S);
}

double TailBound::operator()(double t) const {
  if (t <= 0.0) return 1.0;
  return std::min(1.0, std::exp(log_value(t)));
}

BoundReport make_bound_report(const TailBound& bound, std::optional<TailBound> partner,
                              std::span<const double> grid,
                              std::vector<std::pair<std::string, double>> inputs) {
  BoundReport report{bound, partner, std::move(inputs), {}};
  report.rows.reserve(grid.size());
  for (double t : grid) {
    BoundRow row{t, bound(t), std::nullopt};
    if (partner) row.partner = (*partner)(t);
    report.rows.push_back(row);
  }
  return report;
}

double k2logk(double K) { return K * K * std::log(K); }

double moment_constant(double first_moment) {
  require(first_moment > 0.0, ErrorKind::InvalidArgument, "first moment bound must be > 0");
  return first_moment <= 2.0 ? 6.0 : 6.0 + first_moment;
}

double bernstein_proof_constant(double first_moment) {
  const double c1 = moment_constant(first_moment);
  const double big_c0 = (c1 * std::numbers::e) * (c1 * std::numbers::e);
  const double small_c0 = 1.0 / (2.0 * c1 * std::numbers::e);
  return std::min(1.0 / (4.0 * big_c0), small_c0 / 2.0);
}

TailBound new_bernstein_bound(std::span<const double> a, std::span<const double> ks,
                              std::optional<double> c) {
  require(!a.empty() && a.size() == ks.size(), ErrorKind::InvalidArgument,
          "coefficients and K values must be non-empty and aligned");
  double v = 0.0, amax = 0.0, kmax = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    require(ks[i] >= 1.2, ErrorKind::BadK, "every K_i must be >= 6/5");
    v += (a[i] * a[i]) * k2logk(ks[i]);
    amax = std::max(amax, std::fabs(a[i]));
    kmax = std::max(kmax, ks[i]);
  }
  require(amax > 0.0, ErrorKind::InvalidArgument, "coefficient vector must be nonzero");
  TailBound b;
  b.name = "new_bernstein";
  b.V = v;
  b.S = amax * k2logk(kmax);
  b.c = c.value_or(bernstein_proof_constant());
  b.provenance = c ? Provenance::User : Provenance::ProofTraced;
  return b;
}

TailBound standard_bernstein_bound(std::span<const double> a, double K, std::optional<double> c) {
  require(!a.empty(), ErrorKind::InvalidArgument, "coefficient vector must be non-empty");
  require(K > 0.0, ErrorKind::BadK, "K must be positive");
  double ss = 0.0, amax = 0.0;
  for (double x : a) {
    ss += x * x;
    amax = std::max(amax, std::fabs(x));
  }
  require(amax > 0.0, ErrorKind::InvalidArgument, "coefficient vector must be nonzero");
  TailBound b;
  b.name = "standard_bernstein";
  b.V = K * K * K * K * ss;
  b.S = K * K * amax;
  b.c = c.value_or(bernstein_proof_constant());
  b.provenance = c ? Provenance::User : Provenance::ProofTraced;
  return b;
}

namespace {

double operator_norm(const Matrix& A) {
  bool diagonal = A.rows() == A.cols();
  for (Eigen::Index i = 0; diagonal && i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      if (i != j && A(i, j) != 0.0) {
        diagonal = false;
        break;
      }
  if (diagonal) return A.diagonal().cwiseAbs().maxCoeff();
  Eigen::JacobiSVD<Matrix> svd(A);
  return svd.singularValues()(0);
}

// sum_ij A_ij^2 kappa, accumulated row by row so a diagonal A reproduces the
// Bernstein sum term for term.
double weighted_frobenius(const Matrix& A, double kappa) {
  double v = 0.0;
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j) v += (A(i, j) * A(i, j)) * kappa;
  return v;
}

TailBound hanson_wright_core(const Matrix& A, double kappa, double variance_scale,
                             std::optional<double> c, const char* name) {
  require(A.size() > 0 && A.rows() == A.cols(), ErrorKind::InvalidArgument,
          "Hanson-Wright needs a non-empty square matrix");
  const double op = operator_norm(A);
  require(op > 0.0, ErrorKind::InvalidArgument, "matrix must be nonzero");
  TailBound b;
  b.name = name;
  b.V = weighted_frobenius(A, kappa * variance_scale);
  b.S = op * kappa;
  if (c) {
    b.c = *c;
    b.provenance = Provenance::User;
  } else {
    const NamedConstant& fitted = active_constants().at("hw_c");
    b.c = fitted.value;
    b.provenance = fitted.provenance;
  }
  return b;
}

}  // namespace

TailBound new_hanson_wright_bound(const Matrix& A, double K, std::optional<double> c) {
  require(K >= kUnitVarianceFloor * (1.0 - 1e-12), ErrorKind::BadK, "K must be >= sqrt(1/log 2)");
  return hanson_wright_core(A, k2logk(K), 1.0, c, "new_hanson_wright");
}

TailBound hanson_wright_nonunit(const Matrix& A, double K, double alpha1, double alpha2,
                                std::optional<double> c) {
  require(alpha1 > 0.0 && alpha1 <= alpha2 && alpha2 <= K, ErrorKind::BadMoments,
          "need 0 < alpha1 <= alpha2 <= K");
  require(K / alpha1 >= kUnitVarianceFloor * (1.0 - 1e-12), ErrorKind::BadMoments,
          "K/alpha1 must be >= sqrt(1/log 2)");
  const double gamma = alpha2 / alpha1;
  const double kappa = gamma * gamma * K * K * std::log(K / alpha1);
  return hanson_wright_core(A, kappa, alpha2 * alpha2, c, "hanson_wright_nonunit");
}

double moment_bound(double p, double K, double first_moment) {
  require(p >= 1.0, ErrorKind::InvalidArgument, "p must be >= 1");
  require(K >= 1.2, ErrorKind::BadK, "K must be >= 6/5");
  const double C = moment_constant(first_moment);
  return std::pow(C, p) * std::pow(p, p) * std::pow(k2logk(K), p - 1.0);
}

namespace {

std::size_t ceil_size(double x) {
  require(std::isfinite(x) && x >= 0.0, ErrorKind::InvalidArgument, "dimension is not finite");
  return static_cast<std::size_t>(std::ceil(x));
}

}  // namespace

std::size_t jl_dimension(double K, double eps, double delta, double C) {
  require(K > 1.0, ErrorKind::BadK, "K must exceed 1");
  require(eps > 0.0 && eps < 1.0, ErrorKind::InvalidArgument, "eps must lie in (0, 1)");
  require(delta > 0.0 && delta < 1.0, ErrorKind::InvalidArgument, "delta must lie in (0, 1)");
  require(C > 0.0, ErrorKind::InvalidArgument, "C must be positive");
  return ceil_size(C * k2logk(K) / (eps * eps) * std::log(1.0 / delta));
}

std::size_t nsp_dimension(double rho, double p, std::size_t s, std::size_t n, double u,
                          double C) {
  require(rho > 0.0, ErrorKind::InvalidArgument, "rho must be positive");
  require(p > 0.0 && p < 1.0, ErrorKind::InvalidArgument, "p must lie in (0, 1)");
  require(s >= 1 && s <= n, ErrorKind::InvalidArgument, "need 1 <= s <= n");
  require(C > 0.0, ErrorKind::InvalidArgument, "C must be positive");
  const double sd = static_cast<double>(s);
  const double complexity = sd * std::log(std::numbers::e * static_cast<double>(n) / sd) + u * u;
  return ceil_size(C / (rho * rho) / (p * (1.0 - p)) * complexity);
}

std::size_t sketch_dimension(double K, double width_sq, double delta, double c0) {
  require(K > 1.0, ErrorKind::BadK, "K must exceed 1");
  require(width_sq >= 0.0, ErrorKind::InvalidArgument, "squared width must be >= 0");
  require(delta > 0.0, ErrorKind::InvalidArgument, "delta must be positive");
  require(c0 > 0.0, ErrorKind::InvalidArgument, "c0 must be positive");
  return ceil_size(c0 * k2logk(K) * width_sq / (delta * delta));
}

RnspParameters rip_to_rnsp(double delta) {
  require(delta > 0.0 && delta < 0.5, ErrorKind::BadDelta, "delta must lie in (0, 1/2)");
  const double denom = std::sqrt(1.0 - delta * delta) - delta / 4.0;
  RnspParameters out{delta / denom, std::sqrt(1.0 + delta) / denom};
  if (!(out.rho_prime < 2.0 * delta && out.tau_prime < 2.0)) {
    throw Error(ErrorKind::BadDelta, "rNSP parameter postcondition failed");
  }
  return out;
}

double kl_bernoulli(double x, double y) {
  require(x >= 0.0 && x <= 1.0 && y > 0.0 && y < 1.0, ErrorKind::OutOfRange,
          "kl_bernoulli needs x in [0,1], y in (0,1)");
  double d = 0.0;
  if (x > 0.0) d += x * std::log(x / y);
  if (x < 1.0) d += (1.0 - x) * std::log((1.0 - x) / (1.0 - y));
  return d;
}

double binom_tail_lower(std::size_t m, double p, double k) {
  const double md = static_cast<double>(m);
  require(p > 0.0 && p < 0.25, ErrorKind::OutOfRange, "need 0 < p < 1/4");
  require(md * p >= 1.0, ErrorKind::OutOfRange, "need mp >= 1");
  require(k > md * p + 1.0 && k < md / 2.0, ErrorKind::OutOfRange, "need mp + 1 < k < m/2");
  const double x = k / md;
  return std::exp(-md * kl_bernoulli(x, p)) / std::sqrt(8.0 * k * (1.0 - x));
}

double binom_log_pmf(std::size_t m, double p, std::size_t j) {
  require(j <= m, ErrorKind::OutOfRange, "j exceeds m");
  const double md = static_cast<double>(m), jd = static_cast<double>(j);
  double out = std::lgamma(md + 1.0) - std::lgamma(jd + 1.0) - std::lgamma(md - jd + 1.0);
  if (j > 0) out += jd * std::log(p);
  if (j < m) out += (md - jd) * std::log1p(-p);
  return out;
}

double binom_tail_exact(std::size_t m, double p, std::size_t j) {
  require(p >= 0.0 && p <= 1.0, ErrorKind::OutOfRange, "p must lie in [0, 1]");
  if (j == 0) return 1.0;
  if (j > m) return 0.0;
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  double top = -std::numeric_limits<double>::infinity();
  std::vector<double> logs;
  logs.reserve(m - j + 1);
  for (std::size_t i = j; i <= m; ++i) {
    logs.push_back(binom_log_pmf(m, p, i));
    top = std::max(top, logs.back());
  }
  double acc = 0.0;
  for (double l : logs) acc += std::exp(l - top);
  return std::min(1.0, std::exp(top + std::log(acc)));
}

std::vector<ScalarInequalityCheck> appendix_c_check(std::size_t grid_density) {
  require(grid_density >= 1000, ErrorKind::InvalidArgument, "grid density must be >= 1000");
  const double n = static_cast<double>(grid_density);
  std::vector<ScalarInequalityCheck> out;

  const auto run = [&](std::string name, double lo, double hi, bool open_lo, bool open_hi,
                       auto&& slack) {
    ScalarInequalityCheck c;
    c.name = std::move(name);
    c.max_slack = -std::numeric_limits<double>::infinity();
    // Open ends are approached through interior points of an (n+1)-cell grid.
    const double cells = n - 1.0 + (open_lo ? 1.0 : 0.0) + (open_hi ? 1.0 : 0.0);
    const double step = (hi - lo) / cells;
    for (std::size_t i = 0; i < grid_density; ++i) {
      const double x = lo + step * (static_cast<double>(i) + (open_lo ? 1.0 : 0.0));
      const double s = slack(x);
      if (s > c.max_slack) {
        c.max_slack = s;
        c.argmax = x;
      }
    }
    c.points = grid_density;
    c.holds = c.max_slack <= 1e-12;
    out.push_back(c);
  };
  const auto rel = [](double lhs, double rhs) { return (lhs - rhs) / std::max(1.0, std::fabs(rhs)); };

  run("exp_vs_cosh", -50.0, 50.0, false, false,
      [&](double x) { return rel(std::exp(x), x + std::cosh(2.0 * x)); });
  run("inv_sqrt_vs_exp", 0.0, 0.5, false, true,
      [&](double x) { return rel(1.0 / std::sqrt(1.0 - x), std::exp(x)); });
  for (double a : {2.0, 4.0, 8.0}) {
    run("min_vs_exp_a" + std::to_string(static_cast<int>(a)), -10.0, 50.0, false, false,
        [&](double x) {
          return rel(std::min(1.0, a * std::exp(-x)), 2.0 * std::exp(-x / std::log2(a)));
        });
  }
  run("kl_power", 0.0, 1.0, true, true, [&](double x) {
    const double lhs = std::exp(std::log1p(-x) + 0.5 * x * x * std::log(2.0 / (x * (1.0 - x))));
    return rel(lhs, 1.0);
  });
  return out;
}

}  // namespace subgauss

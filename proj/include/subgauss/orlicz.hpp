#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "subgauss/distribution.hpp"
#include "subgauss/rng.hpp"

namespace subgauss {

/// 1/sqrt(log 2): the smallest psi_2 norm of any law with E X^2 = 1.
inline const double kUnitVarianceFloor = 1.0 / std::sqrt(std::log(2.0));

enum class PsiMethod { Analytic, MgfRoot, SampleRoot };

std::string to_string(PsiMethod method);

struct PsiNorm {
  double alpha = 2.0;
  double value = 0.0;
  PsiMethod method = PsiMethod::Analytic;
  std::optional<std::pair<double, double>> ci;
  bool upper_bound = false;  // value bounds the norm from above only
  bool degenerate = false;   // X = 0 almost surely (value is 0)

  double ci_half_width() const { return ci ? 0.5 * (ci->second - ci->first) : 0.0; }
};

/// Closed-form psi_alpha norms. Two-point |X| laws (Rademacher, Bernoulli,
/// scaled Bernoulli, sparse ternary, constant) are exact for every alpha;
/// Gaussian needs alpha = 2 and Exponential alpha = 1. BoundedUniform returns
/// the bound M log^{-1/alpha} 2 with upper_bound set.
PsiNorm psi_norm_analytic(const Distribution& d, double alpha);

/// Root of t -> E exp(|X|^alpha / t^alpha) = 2 by geometric bisection.
PsiNorm psi_norm_from_mgf(const std::function<double(double)>& mgf_of_power, double alpha,
                          double tol = 1e-10);

/// E exp(|X|^alpha / t^alpha) for a named law (exact or by quadrature).
std::function<double(double)> power_mgf(const Distribution& d, double alpha);

/// psi_alpha of a named law through its own mgf; works for every law.
PsiNorm psi_norm_of_law(const Distribution& d, double alpha, double tol = 1e-10);

struct SampleOptions {
  double tol = 1e-9;
  std::size_t min_samples = 10'000;
  bool bootstrap = true;
  int resamples = 200;
  double level = 0.90;
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 1;
};

/// Sample analogue of the definition with a bootstrap percentile interval.
PsiNorm psi_norm_from_samples(std::span<const double> xs, double alpha,
                              const SampleOptions& options = {});

struct KFloorCheck {
  bool holds = false;
  PsiNorm estimate;
  double floor = 0.0;
  double second_moment = 0.0;
};

/// Checks that the estimated psi_2 of a unit-second-moment sample is not
/// below 1/sqrt(log 2) beyond its interval half-width. Throws BadMoments when
/// the empirical second moment is more than 5% away from 1.
KFloorCheck k_lower_bound_check(std::span<const double> samples,
                                const SampleOptions& options = {});

struct PropertyCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// Evaluates the psi_alpha property suite on empirical laws. `xs` and `ys`
/// are paired draws (ys is used for the product property). For the empirical
/// measure every listed inequality is exact, so failures indicate a bug.
std::vector<PropertyCheck> check_psi_properties(std::span<const double> xs,
                                                std::span<const double> ys, double alpha);

}  // namespace subgauss

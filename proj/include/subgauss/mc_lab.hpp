#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "subgauss/bounds.hpp"
#include "subgauss/ensembles.hpp"
#include "subgauss/geometry.hpp"
#include "subgauss/orlicz.hpp"
#include "subgauss/stats.hpp"

namespace subgauss {

struct SurvivalPoint {
  double t = 0.0;
  std::size_t count = 0;  // #{values >= t}
  double survival = 0.0;
  double lo = 0.0;  // Wilson 95%
  double hi = 0.0;
};

/// Per-trial statistics of one seeded Monte-Carlo experiment.
struct TrialBatch {
  std::string label;
  std::uint64_t seed = kDefaultSeed;
  std::size_t trials = 0;
  std::vector<double> values;
  std::vector<SurvivalPoint> survival;
  std::optional<PsiNorm> psi2;
};

void attach_survival(TrialBatch& batch, std::span<const double> grid);
/// Needs at least options.min_samples trials.
void attach_psi2(TrialBatch& batch, const SampleOptions& options = {});

/// 64 log-spaced points on [0.1 median, 10 V/S].
std::vector<double> survival_grid(std::span<const double> values, const TailBound& bound,
                                  std::size_t count = 64);

struct DominationReport {
  std::size_t checked = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;  // max of Wilson upper / bound over checked points
  bool holds = true;
};

/// Compares the Wilson upper limit with the bound wherever bound >= 10/trials.
DominationReport check_domination(const TrialBatch& batch, const TailBound& bound);

/// sum_i a_i (X_i^2 - E X_i^2) with X_i drawn from laws[i].
struct SumSpec {
  std::vector<double> a;
  std::vector<Distribution> laws;
};

/// K_i = max(6/5, sqrt(psi_1(X^2 - E X^2))), the Bernstein parameter of a
/// squared unit-variance law.
double bernstein_parameter(const Distribution& law);

TrialBatch empirical_tail(const SumSpec& spec, std::size_t trials, std::span<const double> grid,
                          std::uint64_t seed, unsigned threads = 1);

/// |X^T A X - tr(A) E X_1^2| with i.i.d. coordinates from `law`.
TrialBatch empirical_hw_tail(const Matrix& A, const Distribution& law, std::size_t trials,
                             std::span<const double> grid, std::uint64_t seed,
                             unsigned threads = 1);

/// Per-trial sup_{x in T} | ||B A x||_2 - ||B||_F ||x||_2 |. Throws
/// MeanZeroRequired for a non-diagonal B with a non-centred ensemble.
TrialBatch deviation_batch(const EnsembleSpec& ensemble, const Multiplier& B, const PointSet& T,
                           std::size_t trials, std::uint64_t seed, unsigned threads = 1);

struct ScalingFit {
  std::vector<double> Ks;
  std::vector<std::size_t> ms;
  std::vector<PsiNorm> psi2;
  std::vector<double> regressor;      // K sqrt(log K)
  std::vector<double> alt_regressor;  // K^2
  LinearFit fit;
  LinearFit alt_fit;
  bool main_model_better = false;
};

/// Deviation psi_2 of scaled-Bernoulli ensembles across K, regressed on
/// K sqrt(log K) and on K^2. B is the identity of the chosen m.
ScalingFit scaling_fit(std::span<const double> Ks,
                       const std::function<std::size_t(double)>& m_rule, const PointSet& T,
                       std::size_t trials, std::uint64_t seed, unsigned threads = 1);

/// Lower limit used by the tightness check: 0.2 K sqrt(log K).
double tightness_threshold(double K);

struct TightnessReport {
  double K = 0.0;
  std::size_t m = 0;
  PsiNorm psi2;
  double threshold = 0.0;
  double ratio = 0.0;  // psi2 / (K sqrt(log K))
  bool passes = false;
};

/// Empirical psi_2 of ||X||_2 - sqrt(m) for scaled-Bernoulli X in R^m.
TightnessReport tightness_check(double K, std::size_t m, std::size_t trials, std::uint64_t seed,
                                unsigned threads = 1);

/// Exact psi_2 of ||X||_2 - sqrt(m) through the binomial law of ||X||^2.
double tightness_exact_psi2(double K, std::size_t m);

/// psi_2 of Z_x - Z_y with Z_x = ||B A x||_2 - ||B||_F ||x||_2.
PsiNorm increment_psi2(const EnsembleSpec& ensemble, const Multiplier& B, const Vector& x,
                       const Vector& y, std::size_t trials, std::uint64_t seed,
                       unsigned threads = 1);

struct JlReport {
  std::size_t m = 0;
  std::size_t points = 0;
  std::size_t pairs = 0;
  std::size_t trials = 0;
  std::size_t successes = 0;  // trials where every pair stays in the bracket
  double success_rate = 0.0;
  double pair_failure_rate = 0.0;
  double worst_distortion = 0.0;
};

/// m for an all-pairs guarantee: jl_dimension(K, eps, delta / pairs, C).
std::size_t jl_all_pairs_dimension(double K, double eps, double delta, std::size_t points,
                                   double C);

/// Embeds the rows of `points` with (1/sqrt(m)) A, A an m x n matrix with
/// entries from `law`, and checks (1 +- eps) distortion on every pair.
JlReport jl_probe(const Matrix& points, const Distribution& law, std::size_t m, double eps,
                  std::size_t trials, std::uint64_t seed, unsigned threads = 1);

struct JlOptimalityReport {
  double p = 0.0;
  std::size_t m = 0;
  double eps = 0.0;
  std::size_t trials = 0;
  double failure_rate = 0.0;  // P(| ||A e1|| - 1 | >= eps)
  double proof_event_rate = 0.0;  // P(||A e1||^2 >= 1 + 3 eps)
  std::pair<double, double> proof_event_ci{0.0, 0.0};
  double proof_event_exact = 0.0;  // 1 - (1-p)^m
  double floor = 0.0;              // 1 - exp(-1/4)
  bool reproduces = false;         // failure and proof-event rates >= 1/5
};

/// Scaled-Bernoulli column with A_ij^2 ~ Bernoulli(p)/(mp). m = 0 selects the
/// largest m with mp <= 1/2.
JlOptimalityReport jl_optimality_probe(double p, std::size_t m, double eps, std::size_t trials,
                                       std::uint64_t seed, unsigned threads = 1);

}  // namespace subgauss

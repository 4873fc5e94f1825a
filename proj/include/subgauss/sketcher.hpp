#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "subgauss/ensembles.hpp"
#include "subgauss/geometry.hpp"

namespace subgauss {

enum class ConstraintKind { Unconstrained, NonnegativeOrthant, L1Ball };

struct Constraint {
  ConstraintKind kind = ConstraintKind::Unconstrained;
  double radius = 1.0;  // L1 ball only

  /// "none", "nonneg", "l1:<radius>".
  static Constraint parse(const std::string& text);
  std::string describe() const;
  Vector project(const Vector& x) const;
};

/// min_{x in C} ||B x - y||_2^2 with B of size n x d.
struct SketchProblem {
  Matrix B;
  Vector y;
  Constraint constraint;
};

/// Reads B from `b_csv` (n x d), y from `y_csv` (one value per row) and the
/// constraint descriptor from `constraint_txt`.
SketchProblem load_sketch_problem(const std::filesystem::path& b_csv,
                                  const std::filesystem::path& y_csv,
                                  const std::filesystem::path& constraint_txt);

struct SolverOptions {
  double tol = 1e-10;
  std::size_t max_iterations = 100'000;
};

struct Solution {
  Vector x;
  double f = 0.0;
  std::size_t iterations = 0;
  bool converged = true;
};

/// ||B x - y||_2^2.
double objective(const Matrix& B, const Vector& y, const Vector& x);

/// Householder QR when unconstrained (RankDeficient if B lacks full column
/// rank); projected gradient with step 1/sigma_max(B)^2 otherwise.
Solution solve_constrained_ls(const Matrix& B, const Vector& y, const Constraint& c,
                              const SolverOptions& options = {});

Solution solve_original(const SketchProblem& p, const SolverOptions& options = {});

struct ZQuantities {
  double z1 = 0.0;
  double z2 = 0.0;
  bool exact = false;  // false: estimated from sampled tangent directions
};

/// Z1 = inf (1/m)||A v||^2 and Z2 = sup |<u, ((1/m) A^T A - I) v>| over unit v
/// in B T. Exact on range(B) when unconstrained; otherwise min/max over
/// `samples` directions B(x_i - x*) for random feasible x_i.
ZQuantities z_quantities(const SketchProblem& p, const Matrix& A, const Vector& u,
                         const Vector& x_star, std::size_t samples = 200,
                         std::uint64_t seed = kDefaultSeed);

/// Normalized optimal residual (y - B x*)/||y - B x*||, or 0 when it vanishes.
Vector residual_direction(const SketchProblem& p, const Vector& x_star);

struct OptimalityCertificate {
  double f_star = 0.0;
  double f_hat = 0.0;
  double g_hat = 0.0;
  double delta_achieved = 0.0;  // sqrt(f_hat / f_star) - 1
  ZQuantities z;
  double lemma_ratio = 0.0;  // (1 + 2 Z2/Z1)^2
  bool lemma_holds = false;
  std::string notes;
};

struct SketchResult {
  Vector x_hat;
  OptimalityCertificate certificate;
};

/// Solves min ||A(Bx - y)||^2 over C and certifies x_hat on the original f.
SketchResult solve_sketched(const SketchProblem& p, const Matrix& A, const Solution& original,
                            const SolverOptions& options = {}, std::size_t z_samples = 200);

struct SketchTrials {
  std::size_t m = 0;
  std::size_t trials = 0;
  std::vector<double> deltas;
  std::size_t within_target = 0;  // deltas <= target
  std::size_t lemma_failures = 0;
  double median_delta = 0.0;
};

/// Repeats solve_sketched over seeds with (m x n) sketches drawn from `law`.
SketchTrials sketch_trials(const SketchProblem& p, const Distribution& law, std::size_t m,
                           double target_delta, std::size_t trials, std::uint64_t seed,
                           unsigned threads = 1);

/// Fraction of trials with sup_{x in T} |(1/m)||Ax||^2 - ||x||^2| <= delta.
double technical_lemma_rate(const PointSet& T, const Distribution& law, std::size_t m,
                            double delta, std::size_t trials, std::uint64_t seed,
                            unsigned threads = 1);

/// Gaussian n x d design with y = B x0 + noise, reproducible from the seed.
SketchProblem random_problem(std::size_t n, std::size_t d, double noise, std::uint64_t seed,
                             Constraint c = {});

}  // namespace subgauss

#include "subgauss/mc_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "subgauss/error.hpp"
#include "subgauss/parallel.hpp"

namespace subgauss {

namespace {

constexpr std::size_t kChunk = 1024;

template <class PerTrial>
std::vector<double> run_trials(std::size_t trials, std::uint64_t seed, unsigned threads,
                               PerTrial&& per_trial) {
  std::vector<double> values(trials);
  parallel_chunks(trials, kChunk, threads, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      Rng rng = Rng::substream(seed, t);
      values[t] = per_trial(rng);
    }
  });
  return values;
}

}  // namespace

void attach_survival(TrialBatch& batch, std::span<const double> grid) {
  std::vector<double> sorted = batch.values;
  std::sort(sorted.begin(), sorted.end());
  const std::vector<std::size_t> counts = survival_counts(sorted, grid);
  batch.survival.clear();
  const double n = static_cast<double>(batch.trials);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto [lo, hi] = wilson_interval(counts[k], batch.trials, 0.95);
    batch.survival.push_back({grid[k], counts[k], static_cast<double>(counts[k]) / n, lo, hi});
  }
}

void attach_psi2(TrialBatch& batch, const SampleOptions& options) {
  batch.psi2 = psi_norm_from_samples(batch.values, 2.0, options);
}

std::vector<double> survival_grid(std::span<const double> values, const TailBound& bound,
                                  std::size_t count) {
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted.empty() ? 0.0 : quantile_sorted(sorted, 0.5);
  const double hi = 10.0 * bound.switch_point();
  double lo = 0.1 * median;
  if (!(lo > 0.0) || lo >= hi) lo = 1e-3 * hi;
  return log_grid(lo, hi, count);
}

DominationReport check_domination(const TrialBatch& batch, const TailBound& bound) {
  DominationReport report;
  const double floor = 10.0 / static_cast<double>(batch.trials);
  for (const SurvivalPoint& p : batch.survival) {
    const double b = bound(p.t);
    if (b < floor) continue;
    ++report.checked;
    report.worst_ratio = std::max(report.worst_ratio, p.hi / b);
    if (p.hi > b) ++report.violations;
  }
  report.holds = report.violations == 0;
  return report;
}

double bernstein_parameter(const Distribution& law) {
  const double centre = law.second_moment();
  const auto mgf = [&](double t) {
    return law.expectation([&](double x) { return std::exp(std::fabs(x * x - centre) / t); });
  };
  const PsiNorm psi1 = psi_norm_from_mgf(mgf, 1.0, 1e-10);
  return std::max(1.2, std::sqrt(psi1.value));
}

TrialBatch empirical_tail(const SumSpec& spec, std::size_t trials, std::span<const double> grid,
                          std::uint64_t seed, unsigned threads) {
  require(!spec.a.empty() && spec.a.size() == spec.laws.size(), ErrorKind::InvalidArgument,
          "sum spec needs aligned coefficients and laws");
  require(trials > 0, ErrorKind::InvalidArgument, "trials must be positive");
  std::vector<double> centres(spec.laws.size());
  for (std::size_t i = 0; i < centres.size(); ++i) centres[i] = spec.laws[i].second_moment();
  TrialBatch batch;
  batch.label = "bernstein_sum";
  batch.seed = seed;
  batch.trials = trials;
  batch.values = run_trials(trials, seed, threads, [&](Rng& rng) {
    double s = 0.0;
    for (std::size_t i = 0; i < spec.a.size(); ++i) {
      const double x = spec.laws[i].sample(rng);
      s += spec.a[i] * (x * x - centres[i]);
    }
    return std::fabs(s);
  });
  attach_survival(batch, grid);
  return batch;
}

TrialBatch empirical_hw_tail(const Matrix& A, const Distribution& law, std::size_t trials,
                             std::span<const double> grid, std::uint64_t seed, unsigned threads) {
  require(A.rows() == A.cols() && A.size() > 0, ErrorKind::InvalidArgument,
          "quadratic form needs a square matrix");
  require(law.is_mean_zero(), ErrorKind::MeanZeroRequired, "coordinates must be mean zero");
  const double expected = A.trace() * law.second_moment();
  const Eigen::Index n = A.rows();
  TrialBatch batch;
  batch.label = "hanson_wright";
  batch.seed = seed;
  batch.trials = trials;
  batch.values = run_trials(trials, seed, threads, [&](Rng& rng) {
    Vector x(n);
    for (Eigen::Index j = 0; j < n; ++j) x(j) = law.sample(rng);
    return std::fabs(x.dot(A * x) - expected);
  });
  attach_survival(batch, grid);
  return batch;
}

namespace {

void guard_mean_zero(const EnsembleSpec& ensemble, const Multiplier& B) {
  if (!B.is_diagonal() && !ensemble.mean_zero) {
    throw Error(ErrorKind::MeanZeroRequired,
                "a non-diagonal multiplier needs a mean-zero ensemble");
  }
  require(B.cols() == ensemble.rows, ErrorKind::InvalidArgument,
          "multiplier columns must equal ensemble rows");
}

}  // namespace

TrialBatch deviation_batch(const EnsembleSpec& ensemble, const Multiplier& B, const PointSet& T,
                           std::size_t trials, std::uint64_t seed, unsigned threads) {
  guard_mean_zero(ensemble, B);
  require(T.dim() == ensemble.cols, ErrorKind::InvalidArgument,
          "set dimension must equal ensemble columns");
  const double target = B.frobenius_norm();
  TrialBatch batch;
  batch.label = "deviation";
  batch.seed = seed;
  batch.trials = trials;
  batch.values = run_trials(trials, seed, threads, [&](Rng& rng) {
    Matrix a;
    fill_matrix(ensemble, rng, a);
    return exact_sup_deviation(B.apply(a), T, target);
  });
  return batch;
}

ScalingFit scaling_fit(std::span<const double> Ks,
                       const std::function<std::size_t(double)>& m_rule, const PointSet& T,
                       std::size_t trials, std::uint64_t seed, unsigned threads) {
  require(Ks.size() >= 2, ErrorKind::DegenerateFit, "scaling fit needs at least two K values");
  ScalingFit fit;
  SampleOptions opts;
  opts.seed = seed;
  opts.threads = threads;
  for (std::size_t i = 0; i < Ks.size(); ++i) {
    const double K = Ks[i];
    require(K >= 4.0, ErrorKind::InvalidArgument, "scaling fit uses K >= 4");
    const std::size_t m = m_rule(K);
    require(static_cast<double>(m) >= k2logk(K), ErrorKind::InvalidArgument,
            "m_rule(K) must be >= K^2 log K");
    const EnsembleSpec spec =
        make_ensemble(Distribution::scaled_bernoulli(K), m, T.dim(), "scaled_bernoulli");
    TrialBatch batch =
        deviation_batch(spec, Multiplier::identity(m), T, trials, substream_seed(seed, i), threads);
    attach_psi2(batch, opts);
    fit.Ks.push_back(K);
    fit.ms.push_back(m);
    fit.psi2.push_back(*batch.psi2);
    fit.regressor.push_back(K * std::sqrt(std::log(K)));
    fit.alt_regressor.push_back(K * K);
  }
  std::vector<double> y;
  for (const PsiNorm& p : fit.psi2) y.push_back(p.value);
  fit.fit = linear_fit(fit.regressor, y);
  fit.alt_fit = linear_fit(fit.alt_regressor, y);
  fit.main_model_better = fit.fit.rss < fit.alt_fit.rss;
  return fit;
}

double tightness_threshold(double K) { return 0.2 * K * std::sqrt(std::log(K)); }

TightnessReport tightness_check(double K, std::size_t m, std::size_t trials, std::uint64_t seed,
                                unsigned threads) {
  require(K >= 4.0, ErrorKind::InvalidArgument, "tightness needs K >= 4");
  require(static_cast<double>(m) >= k2logk(K), ErrorKind::InvalidArgument,
          "tightness needs m >= K^2 log K");
  const EnsembleSpec spec = make_ensemble(Distribution::scaled_bernoulli(K), m, 1);
  const PointSet e1 = PointSet::singleton(Vector::Ones(1));
  TrialBatch batch = deviation_batch(spec, Multiplier::identity(m), e1, trials, seed, threads);
  SampleOptions opts;
  opts.seed = seed;
  opts.threads = threads;
  attach_psi2(batch, opts);
  TightnessReport r;
  r.K = K;
  r.m = m;
  r.psi2 = *batch.psi2;
  r.threshold = tightness_threshold(K);
  r.ratio = r.psi2.value / (K * std::sqrt(std::log(K)));
  r.passes = r.psi2.ci->first >= r.threshold;
  return r;
}

double tightness_exact_psi2(double K, std::size_t m) {
  const double level = k2logk(K);
  const double p = 1.0 / level;
  const double L = std::sqrt(level);
  const double root_m = std::sqrt(static_cast<double>(m));
  std::vector<double> logpmf(m + 1), dev2(m + 1);
  for (std::size_t j = 0; j <= m; ++j) {
    logpmf[j] = binom_log_pmf(m, p, j);
    const double d = L * std::sqrt(static_cast<double>(j)) - root_m;
    dev2[j] = d * d;
  }
  const auto mgf = [&](double t) {
    double acc = 0.0;
    for (std::size_t j = 0; j <= m; ++j) acc += std::exp(logpmf[j] + dev2[j] / (t * t));
    return acc;
  };
  return psi_norm_from_mgf(mgf, 2.0, 1e-12).value;
}

PsiNorm increment_psi2(const EnsembleSpec& ensemble, const Multiplier& B, const Vector& x,
                       const Vector& y, std::size_t trials, std::uint64_t seed,
                       unsigned threads) {
  guard_mean_zero(ensemble, B);
  require(x.size() == y.size() && static_cast<std::size_t>(x.size()) == ensemble.cols,
          ErrorKind::InvalidArgument, "x and y must match the ensemble columns");
  require(x != y, ErrorKind::InvalidArgument, "increment needs x != y");
  const double fro = B.frobenius_norm();
  const double nx = x.norm(), ny = y.norm();
  const std::vector<double> values = run_trials(trials, seed, threads, [&](Rng& rng) {
    Matrix a;
    fill_matrix(ensemble, rng, a);
    const Matrix ba = B.apply(a);
    return ((ba * x).norm() - fro * nx) - ((ba * y).norm() - fro * ny);
  });
  SampleOptions opts;
  opts.seed = seed;
  opts.threads = threads;
  return psi_norm_from_samples(values, 2.0, opts);
}

std::size_t jl_all_pairs_dimension(double K, double eps, double delta, std::size_t points,
                                   double C) {
  require(points >= 2, ErrorKind::InvalidArgument, "need at least two points");
  const double pairs = 0.5 * static_cast<double>(points) * static_cast<double>(points - 1);
  return jl_dimension(K, eps, delta / pairs, C);
}

JlReport jl_probe(const Matrix& points, const Distribution& law, std::size_t m, double eps,
                  std::size_t trials, std::uint64_t seed, unsigned threads) {
  require(points.rows() >= 2, ErrorKind::InvalidArgument, "need at least two points");
  require(m > 0 && trials > 0, ErrorKind::InvalidArgument, "m and trials must be positive");
  const Eigen::Index N = points.rows();
  const std::size_t pairs = static_cast<std::size_t>(N * (N - 1) / 2);
  std::vector<double> original;
  original.reserve(pairs);
  for (Eigen::Index i = 0; i < N; ++i)
    for (Eigen::Index j = i + 1; j < N; ++j)
      original.push_back((points.row(i) - points.row(j)).norm());

  const EnsembleSpec spec = make_ensemble(law, m, static_cast<std::size_t>(points.cols()));
  const Matrix pt = points.transpose();
  std::vector<double> worst(trials), failures(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    Rng rng = Rng::substream(seed, t);
    Matrix a;
    fill_matrix(spec, rng, a);
    const Matrix images = (a * pt) / std::sqrt(static_cast<double>(m));
    double w = 0.0;
    std::size_t fails = 0, k = 0;
    for (Eigen::Index i = 0; i < N; ++i) {
      for (Eigen::Index j = i + 1; j < N; ++j, ++k) {
        const double ratio = (images.col(i) - images.col(j)).norm() / original[k];
        const double d = std::fabs(ratio - 1.0);
        w = std::max(w, d);
        if (d > eps) ++fails;
      }
    }
    worst[t] = w;
    failures[t] = static_cast<double>(fails);
  });
  JlReport r;
  r.m = m;
  r.points = static_cast<std::size_t>(N);
  r.pairs = pairs;
  r.trials = trials;
  double total_failures = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    if (failures[t] == 0.0) ++r.successes;
    total_failures += failures[t];
    r.worst_distortion = std::max(r.worst_distortion, worst[t]);
  }
  r.success_rate = static_cast<double>(r.successes) / static_cast<double>(trials);
  r.pair_failure_rate = total_failures / (static_cast<double>(trials) * double(pairs));
  return r;
}

JlOptimalityReport jl_optimality_probe(double p, std::size_t m, double eps, std::size_t trials,
                                       std::uint64_t seed, unsigned threads) {
  require(p > 0.0 && p < 0.25, ErrorKind::OutOfRange, "p must lie in (0, 1/4)");
  require(eps > 0.0 && eps < 0.2, ErrorKind::OutOfRange, "eps must lie in (0, 1/5)");
  if (m == 0) m = static_cast<std::size_t>(std::floor(0.5 / p));
  require(m >= 1, ErrorKind::OutOfRange, "m must be >= 1");
  const double scale = 1.0 / (static_cast<double>(m) * p);
  const std::vector<double> sq = run_trials(trials, seed, threads, [&](Rng& rng) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < m; ++i) hits += rng.uniform() < p ? 1 : 0;
    return scale * static_cast<double>(hits);  // ||A e1||^2
  });
  std::size_t fails = 0, events = 0;
  for (double s : sq) {
    if (std::fabs(std::sqrt(s) - 1.0) >= eps) ++fails;
    if (s >= 1.0 + 3.0 * eps) ++events;
  }
  JlOptimalityReport r;
  r.p = p;
  r.m = m;
  r.eps = eps;
  r.trials = trials;
  r.failure_rate = static_cast<double>(fails) / static_cast<double>(trials);
  r.proof_event_rate = static_cast<double>(events) / static_cast<double>(trials);
  r.proof_event_ci = wilson_interval(events, trials, 0.95);
  r.proof_event_exact = 1.0 - std::pow(1.0 - p, static_cast<double>(m));
  r.floor = 1.0 - std::exp(-0.25);
  r.reproduces = r.failure_rate >= 0.2 && r.proof_event_ci.first >= 0.2;
  return r;
}

}  // namespace subgauss

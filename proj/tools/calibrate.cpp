// Fits the unnamed absolute constants on seeds disjoint from the acceptance
// seeds and writes them as a constants file.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <string>

#include "CLI11.hpp"
#include "subgauss/bounds.hpp"
#include "subgauss/constants.hpp"
#include "subgauss/mc_lab.hpp"
#include "subgauss/nullspace.hpp"
#include "subgauss/report.hpp"
#include "subgauss/scenarios.hpp"
#include "subgauss/sketcher.hpp"

using namespace subgauss;
namespace sc = subgauss::scenarios;

namespace {

struct Options {
  std::size_t hw_trials = 1'000'000;
  std::size_t seeds = 200;
  unsigned threads = 1;
  std::string out = default_constants_path().string();
};

std::uint64_t stream(std::uint64_t tag) { return substream_seed(sc::kCalibrationSeed, tag); }

/// Half of the largest c with 2 exp(-c r(t)) above every Wilson upper limit
/// that rests on at least one exceedance.
double fit_hw_c(const Options& o) {
  const Matrix A = sc::quadratic_form_matrix(stream(1));
  double best = std::numeric_limits<double>::infinity();
  std::uint64_t tag = 10;
  for (const Distribution& law : sc::domination_laws()) {
    const double K = sub_gaussian_parameter(law);
    const TailBound unit = new_hanson_wright_bound(A, K, 1.0);
    TrialBatch batch = empirical_hw_tail(A, law, o.hw_trials, {}, stream(tag++), o.threads);
    const auto grid = survival_grid(batch.values, unit);
    attach_survival(batch, grid);
    double law_best = std::numeric_limits<double>::infinity();
    for (const SurvivalPoint& p : batch.survival) {
      if (p.count == 0) continue;
      const double rate = std::min(p.t * p.t / unit.V, p.t / unit.S);
      if (rate <= 0.0) continue;
      law_best = std::min(law_best, std::log(2.0 / p.hi) / rate);
    }
    std::printf("  hw  %-22s K=%.4f  c_max=%.5f\n", law.name().c_str(), K, law_best);
    best = std::min(best, law_best);
  }
  return 0.5 * best;
}

/// Smallest grid value whose rate and the next grid value's rate both reach
/// `target`.
double scan(const char* label, double start, double target,
            const std::function<double(double)>& rate_at) {
  double c = start;
  bool previous = false;
  double previous_c = c;
  for (int step = 0; step < 200; ++step, c *= 1.05) {
    const double rate = rate_at(c);
    std::printf("  %-6s C=%.5f rate=%.3f\n", label, c, rate);
    std::fflush(stdout);
    if (rate >= target && previous) return previous_c;
    previous = rate >= target;
    previous_c = c;
  }
  throw std::runtime_error(std::string("calibration scan did not converge for ") + label);
}

double fit_jl_C(const Options& o) {
  const Matrix points = sc::jl_point_cloud(stream(2));
  const Distribution law = Distribution::rademacher();
  const double K = sub_gaussian_parameter(law);
  return scan("jl", 0.2, 0.97, [&](double C) {
    const std::size_t m = jl_all_pairs_dimension(K, sc::kJlEps, sc::kJlDelta, sc::kJlPoints, C);
    return jl_probe(points, law, m, sc::kJlEps, o.seeds, stream(3), o.threads).success_rate;
  });
}

double fit_sketch_c0(const Options& o) {
  const SketchProblem p =
      random_problem(sc::kSketchRows, sc::kSketchCols, sc::kSketchNoise, stream(4));
  const Distribution law = Distribution::gaussian(1.0);
  const double K = sub_gaussian_parameter(law);
  return scan("sketch", 0.02, 0.95, [&](double c0) {
    const std::size_t m =
        sketch_dimension(K, static_cast<double>(sc::kSketchCols), sc::kSketchDelta, c0);
    const SketchTrials t = sketch_trials(p, law, m, sc::kSketchDelta, o.seeds, stream(5), o.threads);
    return static_cast<double>(t.within_target) / static_cast<double>(t.trials);
  });
}

double fit_nsp_C(const Options& o) {
  const std::size_t seeds = std::max<std::size_t>(o.seeds / 2, 1);
  return scan("nsp", 0.5, 0.95, [&](double C) {
    double worst = 1.0;
    std::uint64_t tag = 6;
    for (double p : {0.3, 0.5}) {
      const std::size_t m = nsp_dimension(sc::kNspRho, p, sc::kNspSparsity, sc::kNspColumns,
                                          sc::nsp_u(), C);
      const NspTrials t = nsp_trials(m, sc::kNspColumns, sc::kNspSparsity, p, sc::kNspRho,
                                     seeds, stream(tag++), o.threads);
      worst = std::min(worst, t.success_rate);
    }
    return worst;
  });
}

/// 1.25 times the largest psi_2(Z_x - Z_y) / (K sqrt(log K) ||B|| ||x - y||)
/// over a few direction pairs and two ensembles.
double fit_increment_C(const Options& o) {
  constexpr std::size_t n = 16;
  const Multiplier B = Multiplier::identity(n);
  Rng rng(stream(8));
  std::vector<std::pair<Vector, Vector>> pairs;
  Vector e1 = Vector::Zero(n), e2 = Vector::Zero(n);
  e1(0) = 1.0;
  e2(1) = 1.0;
  pairs.emplace_back(e1, e2);
  pairs.emplace_back(e1, Vector::Constant(n, 1.0 / std::sqrt(double(n))));
  pairs.emplace_back(e1, 0.5 * e1);
  for (int k = 0; k < 2; ++k) {
    Vector x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      x(i) = rng.normal();
      y(i) = rng.normal();
    }
    pairs.emplace_back(x / x.norm(), y / y.norm());
  }
  double worst = 0.0;
  std::uint64_t tag = 20;
  for (const Distribution& law : {Distribution::rademacher(), Distribution::scaled_bernoulli(4.0)}) {
    const EnsembleSpec ens = make_ensemble(law, n, n);
    const double K = sub_gaussian_parameter(law);
    for (const auto& [x, y] : pairs) {
      const PsiNorm psi = increment_psi2(ens, B, x, y, 20'000, stream(tag++), o.threads);
      const double ratio =
          psi.value / (K * std::sqrt(std::log(K)) * B.operator_norm() * (x - y).norm());
      worst = std::max(worst, ratio);
    }
  }
  std::printf("  increment max ratio=%.5f\n", worst);
  return 1.25 * worst;
}

std::string describe(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Fit the absolute constants used by the dimension and tail formulas"};
  app.add_option("--hw-trials", o.hw_trials, "Quadratic-form trials per law");
  app.add_option("--seeds", o.seeds, "Seeds per dimension-constant evaluation");
  app.add_option("--threads", o.threads, "Worker threads");
  app.add_option("--out", o.out, "Constants file to write");
  CLI11_PARSE(app, argc, argv);

  try {
    ConstantTable table = ConstantTable::defaults();
    const auto fitted = [&](const char* name, double value, const std::string& note) {
      std::printf("%s = %s\n", name, describe(value).c_str());
      table.set(name, {std::stod(describe(value)), Provenance::Fitted, note});
    };
    fitted("hw_c", fit_hw_c(o), "half the tightest survival fit, 3 laws, 20x20 form");
    fitted("jl_C", fit_jl_C(o), "all-pairs success >= 0.97, 100 points in R^256, eps 0.2");
    fitted("sketch_c0", fit_sketch_c0(o), "delta <= 0.1 in >= 95% of seeds, n=400 d=10");
    fitted("nsp_C", fit_nsp_C(o), "RIP delta <= rho/2 in >= 95% of seeds, n=12 s=2");
    fitted("increment_C", fit_increment_C(o), "1.25 x largest increment ratio");
    write_text(o.out, table.serialize());
    std::printf("wrote %s\n", o.out.c_str());
  } catch (const std::exception& e) {
    std::cerr << "calibration failed: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

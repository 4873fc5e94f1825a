// Acceptance checks, one line per criterion. Seeds derive from kDefaultSeed
// and never overlap the calibration master seed.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "subgauss/bounds.hpp"
#include "subgauss/constants.hpp"
#include "subgauss/mc_lab.hpp"
#include "subgauss/nullspace.hpp"
#include "subgauss/orlicz.hpp"
#include "subgauss/scenarios.hpp"
#include "subgauss/sketcher.hpp"

using namespace subgauss;
namespace sc = subgauss::scenarios;

namespace {

// Pinned tolerances.
constexpr double kGoldenRelTol = 1e-6;
constexpr double kAppendixSlack = 1e-12;
constexpr double kTightnessFactor = 0.2;
constexpr double kJlSuccess = 0.95;
constexpr double kSketchSuccess = 0.90;
constexpr double kNspSuccess = 0.90;
constexpr double kOptimalityRate = 0.2;

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

std::uint64_t stream(std::uint64_t tag) { return substream_seed(kDefaultSeed, tag); }

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double limit_seconds, const std::function<Verdict()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs < limit_seconds;
  const bool ok = v.pass && in_time;
  if (!ok) ++failures;
  std::printf("[%s] %2d %-28s %s (%.2fs of %.0fs)%s\n", ok ? "PASS" : "FAIL", id, title,
              v.detail.c_str(), secs, limit_seconds, in_time ? "" : " TOO SLOW");
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

Verdict golden_values() {
  struct Case {
    Distribution law;
    double alpha;
    double golden;
  };
  const std::array<Case, 3> cases{{{Distribution::gaussian(1.0), 2.0, std::sqrt(8.0 / 3.0)},
                                   {Distribution::rademacher(), 2.0, 1.0 / std::sqrt(std::log(2.0))},
                                   {Distribution::exponential(2.0), 1.0, 2.0 / 2.0}}};
  double worst = 0.0;
  for (const Case& c : cases) {
    const double analytic = psi_norm_analytic(c.law, c.alpha).value;
    const double root = psi_norm_of_law(c.law, c.alpha).value;
    worst = std::max({worst, rel(analytic, c.golden), rel(root, c.golden)});
  }
  return {worst <= kGoldenRelTol, fmt("max rel err %.2e", worst)};
}

Verdict unit_variance_floor() {
  const std::array<Distribution, 5> laws{Distribution::gaussian(), Distribution::rademacher(),
                                         Distribution::standardized_bernoulli(0.1),
                                         Distribution::scaled_bernoulli(4.0),
                                         Distribution::sparse_ternary(0.5)};
  bool all = true;
  double margin = INFINITY;
  std::uint64_t tag = 200;
  for (const Distribution& law : laws) {
    Rng rng(stream(tag++));
    std::vector<double> xs(1'000'000);
    for (double& x : xs) x = law.sample(rng);
    SampleOptions opts;
    opts.seed = stream(tag++);
    opts.threads = workers();
    const KFloorCheck k = k_lower_bound_check(xs, opts);
    all = all && k.holds;
    margin = std::min(margin, k.estimate.value + k.estimate.ci_half_width() - kUnitVarianceFloor);
  }
  return {all, fmt("min (psi2 + half width - 1.2011) = %.4f over 5 laws", margin)};
}

Verdict tightness() {
  bool all = true;
  std::string detail = "ratio psi2/(K sqrt log K):";
  for (double K : {4.0, 8.0, 12.0}) {
    const auto m = static_cast<std::size_t>(std::ceil(k2logk(K)));
    const TightnessReport r = tightness_check(K, m, 1'000'000, stream(300 + std::uint64_t(K)), workers());
    // The CI lower end must clear the threshold, stricter than the point value.
    const double lower = r.psi2.value - r.psi2.ci_half_width();
    all = all && lower >= kTightnessFactor * K * std::sqrt(std::log(K));
    detail += fmt(" %.3f", r.ratio);
  }
  return {all, detail};
}

Verdict scaling() {
  const std::vector<double> Ks{4.0, 6.0, 8.0, 12.0};
  Vector e = Vector::Ones(1);
  const ScalingFit fit = scaling_fit(
      Ks, [](double K) { return static_cast<std::size_t>(std::ceil(k2logk(K))); },
      PointSet::singleton(e), 200'000, stream(400), workers());
  std::ostringstream os;
  os << "rss K sqrt(log K) " << fit.fit.rss << " vs K^2 " << fit.alt_fit.rss << ", slope "
     << fit.fit.slope;
  return {fit.main_model_better && fit.fit.rss < fit.alt_fit.rss, os.str()};
}

Verdict domination() {
  constexpr std::size_t trials = 1'000'000;
  const auto laws = sc::domination_laws();
  const auto a = sc::bernstein_weights();
  const Matrix A = sc::quadratic_form_matrix(stream(500));
  std::size_t checked = 0, violations = 0;
  double worst = 0.0;
  std::uint64_t tag = 510;
  for (const Distribution& law : laws) {
    const double Ki = bernstein_parameter(law);
    const std::vector<double> ks(a.size(), Ki);
    const TailBound bern = new_bernstein_bound(a, ks);  // proof-traced c
    TrialBatch sum = empirical_tail(SumSpec{a, std::vector<Distribution>(a.size(), law)}, trials, {},
                                    stream(tag++), workers());
    attach_survival(sum, survival_grid(sum.values, bern));
    const DominationReport d1 = check_domination(sum, bern);

    const TailBound hw = new_hanson_wright_bound(A, sub_gaussian_parameter(law));  // fitted c
    TrialBatch quad = empirical_hw_tail(A, law, trials, {}, stream(tag++), workers());
    attach_survival(quad, survival_grid(quad.values, hw));
    const DominationReport d2 = check_domination(quad, hw);
    for (const auto* d : {&d1, &d2}) {
      checked += d->checked;
      violations += d->violations;
      worst = std::max(worst, d->worst_ratio);
    }
  }
  std::ostringstream os;
  os << checked << " grid points, " << violations << " violations, worst upper/bound " << worst
     << ", hw c " << active_constants().value("hw_c");
  return {violations == 0 && checked > 0, os.str()};
}

Verdict diagonal() {
  Rng rng(stream(600));
  bool all = true;
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 1 + rng.index(30);
    std::vector<double> a(n);
    Matrix D = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
      a[i] = rng.normal();
      D(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = a[i];
    }
    const double K = 1.25 + 5.0 * rng.uniform();
    const std::vector<double> ks(n, K);
    const TailBound hw = new_hanson_wright_bound(D, K, 0.3);
    const TailBound bn = new_bernstein_bound(a, ks, 0.3);
    all = all && hw.V == bn.V && hw.S == bn.S;
  }
  return {all, "20 random diagonals, V and S bitwise equal"};
}

Verdict binomial() {
  bool all = true;
  double min_gap = INFINITY;
  for (const auto& [m, p] : {std::pair<std::size_t, double>{50, 0.1}, {200, 0.05}}) {
    const double lo = m * p + 1.0, hi = m / 2.0;
    for (int i = 0; i < 50; ++i) {
      const double k = lo + (hi - lo) * (i + 0.5) / 50.0;
      const double bound = binom_tail_lower(m, p, k);
      const double exact = binom_tail_exact(m, p, static_cast<std::size_t>(std::ceil(k - 1.0)));
      all = all && exact >= bound;
      min_gap = std::min(min_gap, std::log(exact) - std::log(bound));
    }
  }
  return {all, fmt("100 k values, min log(exact/bound) = %.3f", min_gap)};
}

Verdict appendix_c() {
  const auto checks = appendix_c_check(100'000);
  double worst = -INFINITY;
  for (const auto& c : checks) worst = std::max(worst, c.max_slack);
  return {worst <= kAppendixSlack && checks.size() >= 4,
          fmt("max relative slack %.3e on 1e5-point grids", worst)};
}

Verdict properties() {
  const std::array<Distribution, 5> laws{Distribution::gaussian(), Distribution::rademacher(),
                                         Distribution::standardized_bernoulli(0.1),
                                         Distribution::exponential(1.0),
                                         Distribution::scaled_bernoulli(4.0)};
  std::size_t total = 0, failed = 0;
  std::uint64_t tag = 900;
  for (std::size_t i = 0; i < laws.size(); ++i) {
    Rng rx(stream(tag++)), ry(stream(tag++));
    std::vector<double> xs(50'000), ys(50'000);
    for (double& x : xs) x = laws[i].sample(rx);
    for (double& y : ys) y = laws[(i + 1) % laws.size()].sample(ry);
    for (double alpha : {1.0, 2.0}) {
      for (const PropertyCheck& c : check_psi_properties(xs, ys, alpha)) {
        if (c.name == "norm_from_tail") continue;  // (b) is not part of this criterion
        ++total;
        if (!c.holds) ++failed;
      }
    }
  }
  return {failed == 0 && total > 0,
          std::to_string(total - failed) + "/" + std::to_string(total) + " checks over 5 laws, alpha 1 and 2"};
}

Verdict jl() {
  const Matrix points = sc::jl_point_cloud(stream(1000));
  const Distribution law = Distribution::rademacher();
  const std::size_t m = jl_all_pairs_dimension(sub_gaussian_parameter(law), sc::kJlEps, sc::kJlDelta,
                                               sc::kJlPoints, active_constants().value("jl_C"));
  const JlReport r = jl_probe(points, law, m, sc::kJlEps, 200, stream(1001), workers());
  const JlOptimalityReport o = jl_optimality_probe(0.01, 0, 0.1, 100'000, stream(1002), workers());
  std::ostringstream os;
  os << "m=" << m << " all-pairs success " << r.success_rate << "; optimality mp=" << o.m * o.p
     << " failure " << o.failure_rate << ", proof event " << o.proof_event_rate << " (exact "
     << o.proof_event_exact << ", floor " << o.floor << ")";
  const bool ok = r.success_rate >= kJlSuccess && o.reproduces && o.failure_rate >= kOptimalityRate &&
                  o.m * o.p <= 0.5;
  return {ok, os.str()};
}

Verdict sketch() {
  const SketchProblem p = random_problem(sc::kSketchRows, sc::kSketchCols, sc::kSketchNoise, stream(1100));
  const Distribution law = Distribution::gaussian();
  const std::size_t m = sketch_dimension(sub_gaussian_parameter(law), static_cast<double>(sc::kSketchCols),
                                         sc::kSketchDelta, active_constants().value("sketch_c0"));
  const SketchTrials t = sketch_trials(p, law, m, sc::kSketchDelta, 200, stream(1101), workers());
  const double rate = static_cast<double>(t.within_target) / static_cast<double>(t.trials);
  std::ostringstream os;
  os << "m=" << m << " lemma failures " << t.lemma_failures << "/200, delta<=0.1 in " << rate
     << ", median " << t.median_delta;
  return {t.lemma_failures == 0 && rate >= kSketchSuccess, os.str()};
}

Verdict nsp() {
  std::ostringstream os;
  bool ok = true;
  std::uint64_t tag = 1200;
  for (double p : {0.3, 0.5}) {
    const std::size_t m = nsp_dimension(sc::kNspRho, p, sc::kNspSparsity, sc::kNspColumns, sc::nsp_u(),
                                        active_constants().value("nsp_C"));
    const NspTrials t = nsp_trials(m, sc::kNspColumns, sc::kNspSparsity, p, sc::kNspRho, 100,
                                   stream(tag++), workers());
    ok = ok && t.success_rate >= kNspSuccess;
    os << "p=" << p << " m=" << m << " rate " << t.success_rate << "; ";
  }
  for (int i = 1; i < 50; ++i) {
    const double delta = 0.01 * i;
    const RnspParameters r = rip_to_rnsp(delta);
    ok = ok && r.rho_prime < 2.0 * delta && r.tau_prime < 2.0;
  }
  const FailureProbeReport f = failure_probe(4, 0.1, 100'000, stream(tag++), workers());
  ok = ok && f.matches_exact && f.witness_failures == 0;
  os << "probe " << f.frequency << " vs " << f.exact << " (3 sigma " << 3.0 * f.sigma << ")";
  return {ok, os.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Verdict determinism() {
  const std::vector<std::string> runs{
      "psi dist=gaussian method=sample --trials 20000",
      "width --trials 5000",
      "tail --trials 20000",
      "hw --trials 20000",
      "concentrate --trials 10000",
      "scaling --trials 10000",
      "tightness --trials 20000",
      "jl --trials 20",
      "sketch --trials 20",
      "nsp --trials 20",
      "binom m=50 p=0.1 k=10",
      "appendixc grid=1000",
  };
  const auto dir = std::filesystem::temp_directory_path() / "subgauss_determinism";
  std::filesystem::create_directories(dir);
  std::size_t identical = 0;
  for (const std::string& args : runs) {
    std::array<std::string, 3> outputs;
    const std::array<int, 3> threads{1, 1, 8};
    bool ran = true;
    for (std::size_t r = 0; r < 3; ++r) {
      const auto out = dir / ("run" + std::to_string(r) + ".json");
      const std::string cmd = std::string(SUBGAUSS_TOOL_PATH) + " " + args + " --no-timestamp --threads " +
                              std::to_string(threads[r]) + " --out " + out.string() + " 2>/dev/null";
      const int status = std::system(cmd.c_str());
      ran = ran && WIFEXITED(status) && WEXITSTATUS(status) != 1;
      outputs[r] = slurp(out);
    }
    if (ran && !outputs[0].empty() && outputs[0] == outputs[1] && outputs[0] == outputs[2]) ++identical;
  }
  return {identical == runs.size(),
          std::to_string(identical) + "/" + std::to_string(runs.size()) +
              " subcommands byte identical (threads 1, 1, 8)"};
}

}  // namespace

int main() {
  std::printf("acceptance: seed %llu, %u worker(s), constants hw_c=%g jl_C=%g sketch_c0=%g nsp_C=%g\n",
              static_cast<unsigned long long>(kDefaultSeed), workers(), active_constants().value("hw_c"),
              active_constants().value("jl_C"), active_constants().value("sketch_c0"),
              active_constants().value("nsp_C"));
  criterion(1, "psi golden values", 1, golden_values);
  criterion(2, "unit-variance floor", 30, unit_variance_floor);
  criterion(3, "tightness", 300, tightness);
  criterion(4, "scaling model comparison", 300, scaling);
  criterion(5, "bound domination", 600, domination);
  criterion(6, "diagonal consistency", 1, diagonal);
  criterion(7, "binomial lower bound", 1, binomial);
  criterion(8, "scalar inequality grids", 1, appendix_c);
  criterion(9, "psi property suite", 60, properties);
  criterion(10, "JL probe and optimality", 130, jl);
  criterion(11, "sketch guarantee", 180, sketch);
  criterion(12, "null space property", 180, nsp);
  criterion(13, "CLI determinism", 120, determinism);
  std::printf("acceptance: %d failed\n", failures);
  return failures == 0 ? 0 : 1;
}

#include "subgauss/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "subgauss/bounds.hpp"
#include "subgauss/constants.hpp"
#include "subgauss/error.hpp"
#include "subgauss/geometry.hpp"
#include "subgauss/mc_lab.hpp"
#include "subgauss/nullspace.hpp"
#include "subgauss/orlicz.hpp"
#include "subgauss/report.hpp"
#include "subgauss/scenarios.hpp"
#include "subgauss/sketcher.hpp"
#include "subgauss/stats.hpp"

namespace subgauss::cli {

namespace {

namespace sc = subgauss::scenarios;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// Typed access to key=value parameters restricted to a declared key set.
class Params {
 public:
  Params(const std::string& command, const std::map<std::string, std::string>& raw,
         std::set<std::string> allowed)
      : command_(command), raw_(raw), allowed_(std::move(allowed)) {
    for (const auto& [key, value] : raw_)
      if (!allowed_.count(key))
        throw UsageError("unknown key '" + key + "' for command '" + command_ + "'");
  }

  bool has(const std::string& key) const { return raw_.count(key) > 0; }

  std::string str(const std::string& key, const std::string& fallback) const {
    const auto it = raw_.find(key);
    return it == raw_.end() ? fallback : it->second;
  }

  std::string required(const std::string& key) const {
    const auto it = raw_.find(key);
    if (it == raw_.end())
      throw UsageError("missing key '" + key + "' for command '" + command_ + "'");
    return it->second;
  }

  double real(const std::string& key, double fallback) const {
    return has(key) ? to_real(key, raw_.at(key)) : fallback;
  }

  std::size_t count(const std::string& key, std::size_t fallback) const {
    if (!has(key)) return fallback;
    const double v = to_real(key, raw_.at(key));
    if (v < 0.0 || v != std::floor(v) || v > 1e15)
      throw UsageError("key '" + key + "' must be a non-negative integer");
    return static_cast<std::size_t>(v);
  }

  std::vector<double> list(const std::string& key, std::vector<double> fallback) const {
    if (!has(key)) return fallback;
    std::vector<double> out;
    std::stringstream ss(raw_.at(key));
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_real(key, trim(item)));
    if (out.empty()) throw UsageError("key '" + key + "' needs a comma-separated list");
    return out;
  }

 private:
  double to_real(const std::string& key, const std::string& text) const {
    try {
      std::size_t used = 0;
      const double v = std::stod(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return v;
    } catch (const std::exception&) {
      throw UsageError("key '" + key + "' expects a number, got '" + text + "'");
    }
  }

  std::string command_;
  const std::map<std::string, std::string>& raw_;
  std::set<std::string> allowed_;
};

struct Outcome {
  Json result = Json::object();
  std::optional<Table> table;
  bool checks_passed = true;
};

struct Context {
  const RunConfig& config;
  const Params& params;

  std::size_t trials(std::size_t fallback) const { return config.trials.value_or(fallback); }
  std::uint64_t stream(std::uint64_t tag) const { return substream_seed(config.seed, tag); }
};

Distribution law_from(const Params& p, const std::string& fallback) {
  const std::string name = p.str("dist", fallback);
  try {
    return parse_distribution(name, p.real("param", default_parameter(name)));
  } catch (const Error& e) {
    throw UsageError("key 'dist': " + std::string(e.what()));
  }
}

Json survival_json(const std::vector<SurvivalPoint>& pts, const TailBound& bound) {
  Json arr = Json::array();
  for (const auto& s : pts)
    arr.push_back({{"t", number(s.t)},
                   {"count", s.count},
                   {"survival", number(s.survival)},
                   {"wilson_hi", number(s.hi)},
                   {"bound", number(bound(s.t))}});
  return arr;
}

Table survival_table(const std::vector<SurvivalPoint>& pts, const TailBound& bound) {
  Table t;
  t.columns = {"t", "count", "survival", "wilson_lo", "wilson_hi", "bound"};
  for (const auto& s : pts)
    t.add({number(s.t), s.count, number(s.survival), number(s.lo), number(s.hi),
           number(bound(s.t))});
  return t;
}

Json domination_json(const DominationReport& d) {
  return {{"checked", d.checked},
          {"violations", d.violations},
          {"worst_ratio", number(d.worst_ratio)},
          {"holds", d.holds}};
}

Json quantiles(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  return {{"median", number(quantile_sorted(values, 0.5))},
          {"q90", number(quantile_sorted(values, 0.9))},
          {"q99", number(quantile_sorted(values, 0.99))},
          {"max", number(values.back())}};
}

Outcome cmd_psi(const Context& ctx) {
  const Params& p = ctx.params;
  const Distribution law = law_from(p, p.required("dist"));
  const double alpha = p.real("alpha", 2.0);
  const std::string method = p.str("method", "auto");
  PsiNorm norm;
  if (method == "analytic") {
    norm = psi_norm_analytic(law, alpha);
  } else if (method == "mgf") {
    norm = psi_norm_of_law(law, alpha);
  } else if (method == "sample") {
    const std::size_t n = p.count("samples", ctx.trials(1'000'000));
    Rng rng(ctx.stream(0));
    std::vector<double> xs(n);
    for (double& x : xs) x = law.sample(rng);
    SampleOptions opts;
    opts.seed = ctx.stream(1);
    opts.threads = ctx.config.threads;
    norm = psi_norm_from_samples(xs, alpha, opts);
  } else if (method == "auto") {
    try {
      norm = psi_norm_analytic(law, alpha);
      if (norm.upper_bound) norm = psi_norm_of_law(law, alpha);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::UnsupportedPair) throw;
      norm = psi_norm_of_law(law, alpha);
    }
  } else {
    throw UsageError("key 'method' must be auto, analytic, mgf or sample");
  }
  Outcome out;
  out.result["dist"] = law.name();
  const Json fields = to_json(norm);
  for (const auto& [k, v] : fields.items()) out.result[k] = v;
  return out;
}

PointSet set_from(const Params& p) {
  if (p.has("points")) return load_points_csv(p.str("points", ""));
  const std::string kind = p.str("set", "sparse");
  const std::size_t n = p.count("n", 32);
  if (kind == "sparse") return PointSet::sparse_sphere(n, p.count("s", 2));
  if (kind == "singleton") {
    Vector e = Vector::Zero(static_cast<Eigen::Index>(n));
    e(0) = 1.0;
    return PointSet::singleton(e);
  }
  throw UsageError("key 'set' must be sparse or singleton");
}

Outcome cmd_width(const Context& ctx) {
  const PointSet T = set_from(ctx.params);
  const WidthEstimate w = gaussian_width(T, ctx.trials(10'000), ctx.stream(0), ctx.config.threads);
  Outcome out;
  out.result["dim"] = T.dim();
  out.result["width"] = number(w.estimate);
  out.result["ci"] = Json::array({number(w.ci.first), number(w.ci.second)});
  out.result["radius"] = number(radius(T));
  return out;
}

Outcome cmd_tail(const Context& ctx) {
  const Params& p = ctx.params;
  const Distribution law = law_from(p, "gaussian");
  const std::vector<double> a = sc::bernstein_weights(p.count("terms", sc::kBernsteinTerms));
  const double Ki = bernstein_parameter(law);
  const std::vector<double> ks(a.size(), Ki);
  const TailBound bound = p.has("c") ? new_bernstein_bound(a, ks, p.real("c", 0.0))
                                     : new_bernstein_bound(a, ks);
  SumSpec spec{a, std::vector<Distribution>(a.size(), law)};
  TrialBatch batch = empirical_tail(spec, ctx.trials(100'000), {}, ctx.stream(0), ctx.config.threads);
  attach_survival(batch, survival_grid(batch.values, bound));
  const DominationReport dom = check_domination(batch, bound);
  Outcome out;
  out.result["dist"] = law.name();
  out.result["trials"] = batch.trials;
  out.result["bernstein_parameter"] = number(Ki);
  out.result["bound"] = to_json(bound);
  out.result["domination"] = domination_json(dom);
  out.result["survival"] = survival_json(batch.survival, bound);
  out.table = survival_table(batch.survival, bound);
  out.checks_passed = dom.holds;
  return out;
}

Outcome cmd_hw(const Context& ctx) {
  const Params& p = ctx.params;
  const Distribution law = law_from(p, "gaussian");
  const Matrix A = p.has("matrix") ? read_matrix_csv(p.str("matrix", ""))
                                   : sc::quadratic_form_matrix(ctx.stream(0), p.count("dim", sc::kQuadraticDim));
  const double K = p.real("K", sub_gaussian_parameter(law));
  const TailBound bound = p.has("c") ? new_hanson_wright_bound(A, K, p.real("c", 0.0))
                                     : new_hanson_wright_bound(A, K);
  TrialBatch batch = empirical_hw_tail(A, law, ctx.trials(100'000), {}, ctx.stream(1), ctx.config.threads);
  attach_survival(batch, survival_grid(batch.values, bound));
  const DominationReport dom = check_domination(batch, bound);
  Outcome out;
  out.result["dist"] = law.name();
  out.result["dim"] = A.rows();
  out.result["K"] = number(K);
  out.result["trials"] = batch.trials;
  out.result["bound"] = to_json(bound);
  out.result["domination"] = domination_json(dom);
  out.result["survival"] = survival_json(batch.survival, bound);
  out.table = survival_table(batch.survival, bound);
  out.checks_passed = dom.holds;
  return out;
}

Multiplier multiplier_from(const Params& p, std::size_t m) {
  const std::string kind = p.str("multiplier", "identity");
  if (kind == "identity") return Multiplier::identity(m);
  if (kind == "projection") return Multiplier::ortho_projection(m);
  throw UsageError("key 'multiplier' must be identity or projection");
}

Outcome cmd_concentrate(const Context& ctx) {
  const Params& p = ctx.params;
  const Distribution law = law_from(p, "rademacher");
  const std::size_t m = p.count("m", 64);
  const PointSet T = set_from(p);
  const EnsembleSpec ens = make_ensemble(law, m, T.dim());
  const Multiplier B = multiplier_from(p, m);
  const double K = ens.K;
  const double scale = K * std::sqrt(std::log(K)) * B.operator_norm();
  Outcome out;
  out.result["dist"] = law.name();
  out.result["m"] = m;
  out.result["n"] = T.dim();
  out.result["K"] = number(K);
  out.result["multiplier"] = to_string(B.variant());
  if (p.str("mode", "deviation") == "increment") {
    const auto n = static_cast<Eigen::Index>(T.dim());
    Vector x = Vector::Zero(n), y = Vector::Zero(n);
    x(0) = 1.0;
    y(n > 1 ? 1 : 0) = n > 1 ? 1.0 : 0.5;
    const PsiNorm psi = increment_psi2(ens, B, x, y, ctx.trials(20'000), ctx.stream(0), ctx.config.threads);
    const double bound = active_constants().value("increment_C") * scale * (x - y).norm();
    out.result["mode"] = "increment";
    out.result["psi2"] = to_json(psi);
    out.result["bound"] = number(bound);
    out.checks_passed = psi.value - psi.ci_half_width() <= bound;
    return out;
  }
  TrialBatch batch = deviation_batch(ens, B, T, ctx.trials(10'000), ctx.stream(0), ctx.config.threads);
  SampleOptions opts;
  opts.seed = ctx.stream(1);
  opts.threads = ctx.config.threads;
  opts.min_samples = std::min<std::size_t>(opts.min_samples, batch.trials);
  attach_psi2(batch, opts);
  out.result["mode"] = "deviation";
  out.result["trials"] = batch.trials;
  out.result["deviation"] = quantiles(batch.values);
  out.result["psi2"] = to_json(*batch.psi2);
  out.result["psi2_over_K_sqrt_logK_norm"] = number(batch.psi2->value / scale);
  return out;
}

Outcome cmd_scaling(const Context& ctx) {
  const Params& p = ctx.params;
  const std::vector<double> Ks = p.list("K", {4.0, 6.0, 8.0, 12.0});
  Vector e = Vector::Ones(1);
  const ScalingFit fit = scaling_fit(
      Ks, [](double K) { return static_cast<std::size_t>(std::ceil(k2logk(K))); },
      PointSet::singleton(e), ctx.trials(100'000), ctx.config.seed, ctx.config.threads);
  Outcome out;
  Table t;
  t.columns = {"K", "m", "psi2", "K_sqrt_logK", "K_squared"};
  Json rows = Json::array();
  for (std::size_t i = 0; i < fit.Ks.size(); ++i) {
    t.add({number(fit.Ks[i]), fit.ms[i], number(fit.psi2[i].value), number(fit.regressor[i]),
           number(fit.alt_regressor[i])});
    rows.push_back({{"K", number(fit.Ks[i])}, {"m", fit.ms[i]}, {"psi2", to_json(fit.psi2[i])}});
  }
  out.result["points"] = rows;
  out.result["fit_K_sqrt_logK"] = {{"slope", number(fit.fit.slope)},
                                   {"intercept", number(fit.fit.intercept)},
                                   {"rss", number(fit.fit.rss)}};
  out.result["fit_K_squared"] = {{"slope", number(fit.alt_fit.slope)},
                                 {"intercept", number(fit.alt_fit.intercept)},
                                 {"rss", number(fit.alt_fit.rss)}};
  out.result["main_model_better"] = fit.main_model_better;
  out.table = std::move(t);
  out.checks_passed = fit.main_model_better;
  return out;
}

Outcome cmd_tightness(const Context& ctx) {
  const Params& p = ctx.params;
  const double K = p.real("K", 4.0);
  const std::size_t m = p.count("m", static_cast<std::size_t>(std::ceil(k2logk(K))));
  const TightnessReport r = tightness_check(K, m, ctx.trials(1'000'000), ctx.config.seed, ctx.config.threads);
  Outcome out;
  out.result["K"] = number(K);
  out.result["m"] = m;
  out.result["psi2"] = to_json(r.psi2);
  out.result["exact_psi2"] = number(tightness_exact_psi2(K, m));
  out.result["threshold"] = number(r.threshold);
  out.result["ratio"] = number(r.ratio);
  out.result["passes"] = r.passes;
  out.checks_passed = r.passes;
  return out;
}

Outcome cmd_jl(const Context& ctx) {
  const Params& p = ctx.params;
  Outcome out;
  if (p.str("mode", "probe") == "optimality") {
    const JlOptimalityReport r =
        jl_optimality_probe(p.real("p", 0.01), p.count("m", 0), p.real("eps", 0.1),
                            ctx.trials(100'000), ctx.config.seed, ctx.config.threads);
    out.result["mode"] = "optimality";
    out.result["p"] = number(r.p);
    out.result["m"] = r.m;
    out.result["eps"] = number(r.eps);
    out.result["trials"] = r.trials;
    out.result["failure_rate"] = number(r.failure_rate);
    out.result["proof_event_rate"] = number(r.proof_event_rate);
    out.result["proof_event_ci"] = Json::array({number(r.proof_event_ci.first), number(r.proof_event_ci.second)});
    out.result["proof_event_exact"] = number(r.proof_event_exact);
    out.result["floor"] = number(r.floor);
    out.result["reproduces"] = r.reproduces;
    out.checks_passed = r.reproduces;
    return out;
  }
  const Matrix points = p.has("points") ? read_matrix_csv(p.str("points", ""))
                                        : sc::jl_point_cloud(ctx.stream(0), p.count("n", sc::kJlPoints),
                                                             p.count("dim", sc::kJlDim));
  const Distribution law = law_from(p, "rademacher");
  const double eps = p.real("eps", sc::kJlEps);
  const double delta = p.real("delta", sc::kJlDelta);
  const double K = sub_gaussian_parameter(law);
  const std::size_t m = p.has("m") ? p.count("m", 0)
                                   : jl_all_pairs_dimension(K, eps, delta, static_cast<std::size_t>(points.rows()),
                                                            active_constants().value("jl_C"));
  const JlReport r = jl_probe(points, law, m, eps, ctx.trials(200), ctx.stream(1), ctx.config.threads);
  out.result["mode"] = "probe";
  out.result["dist"] = law.name();
  out.result["m"] = r.m;
  out.result["points"] = r.points;
  out.result["pairs"] = r.pairs;
  out.result["trials"] = r.trials;
  out.result["successes"] = r.successes;
  out.result["success_rate"] = number(r.success_rate);
  out.result["pair_failure_rate"] = number(r.pair_failure_rate);
  out.result["worst_distortion"] = number(r.worst_distortion);
  out.checks_passed = r.success_rate >= 1.0 - delta;
  return out;
}

Outcome cmd_sketch(const Context& ctx) {
  const Params& p = ctx.params;
  SketchProblem problem;
  if (p.has("B")) {
    problem = load_sketch_problem(p.required("B"), p.required("y"), p.required("constraint_file"));
  } else {
    problem = random_problem(p.count("n", sc::kSketchRows), p.count("d", sc::kSketchCols),
                             p.real("noise", sc::kSketchNoise), ctx.stream(0),
                             Constraint::parse(p.str("constraint", "none")));
  }
  const Distribution law = law_from(p, "gaussian");
  const double delta = p.real("delta", sc::kSketchDelta);
  // The tangent cone sits inside range(B), whose squared width is at most d.
  const double width_sq = static_cast<double>(problem.B.cols());
  const std::size_t m = p.has("m") ? p.count("m", 0)
                                   : sketch_dimension(sub_gaussian_parameter(law), width_sq, delta,
                                                      active_constants().value("sketch_c0"));
  const SketchTrials t = sketch_trials(problem, law, m, delta, ctx.trials(200), ctx.stream(1), ctx.config.threads);
  const Solution original = solve_original(problem);
  const EnsembleSpec ens = make_ensemble(law, m, static_cast<std::size_t>(problem.B.rows()));
  const SketchResult first = solve_sketched(problem, sample_matrix(ens, substream_seed(ctx.stream(1), 0)), original);
  const OptimalityCertificate& c = first.certificate;
  Outcome out;
  out.result["dist"] = law.name();
  out.result["n"] = problem.B.rows();
  out.result["d"] = problem.B.cols();
  out.result["constraint"] = problem.constraint.describe();
  out.result["m"] = m;
  out.result["trials"] = t.trials;
  out.result["target_delta"] = number(delta);
  out.result["within_target"] = t.within_target;
  out.result["median_delta"] = number(t.median_delta);
  out.result["lemma_failures"] = t.lemma_failures;
  out.result["first_certificate"] = {{"f_star", number(c.f_star)},
                                     {"f_hat", number(c.f_hat)},
                                     {"delta_achieved", number(c.delta_achieved)},
                                     {"z1", number(c.z.z1)},
                                     {"z2", number(c.z.z2)},
                                     {"z_exact", c.z.exact},
                                     {"lemma_ratio", number(c.lemma_ratio)},
                                     {"lemma_holds", c.lemma_holds},
                                     {"notes", c.notes}};
  Table table;
  table.columns = {"trial", "delta_achieved"};
  for (std::size_t i = 0; i < t.deltas.size(); ++i) table.add({i, number(t.deltas[i])});
  out.table = std::move(table);
  // Sampled Z values do not certify the lemma, so only the exact path is checked.
  out.checks_passed = !c.z.exact || t.lemma_failures == 0;
  return out;
}

Outcome cmd_nsp(const Context& ctx) {
  const Params& p = ctx.params;
  Outcome out;
  if (p.str("mode", "rip") == "probe") {
    const FailureProbeReport r = failure_probe(p.count("m", 4), p.real("p", 0.1), ctx.trials(100'000),
                                               ctx.config.seed, ctx.config.threads);
    out.result["mode"] = "probe";
    out.result["m"] = r.m;
    out.result["p"] = number(r.p);
    out.result["trials"] = r.trials;
    out.result["complement"] = r.complement;
    out.result["occurrences"] = r.occurrences;
    out.result["frequency"] = number(r.frequency);
    out.result["exact"] = number(r.exact);
    out.result["sigma"] = number(r.sigma);
    out.result["matches_exact"] = r.matches_exact;
    out.result["above_quarter"] = r.above_quarter;
    out.result["witness_failures"] = r.witness_failures;
    out.checks_passed = r.matches_exact && r.above_quarter && r.witness_failures == 0;
    return out;
  }
  const std::size_t n = p.count("n", sc::kNspColumns);
  const std::size_t s = p.count("s", sc::kNspSparsity);
  const double prob = p.real("p", 0.5);
  const double rho = p.real("rho", sc::kNspRho);
  const double u = p.real("u", sc::nsp_u());
  const std::size_t m = p.has("m") ? p.count("m", 0)
                                   : nsp_dimension(rho, prob, s, n, u, active_constants().value("nsp_C"));
  const NspTrials t = nsp_trials(m, n, s, prob, rho, ctx.trials(100), ctx.config.seed, ctx.config.threads);
  out.result["mode"] = "rip";
  out.result["m"] = m;
  out.result["n"] = n;
  out.result["s"] = s;
  out.result["p"] = number(prob);
  out.result["rho"] = number(rho);
  out.result["u"] = number(u);
  out.result["trials"] = t.trials;
  out.result["successes"] = t.successes;
  out.result["success_rate"] = number(t.success_rate);
  out.result["delta"] = quantiles(t.deltas);
  const double target = std::max(0.0, 1.0 - 3.0 * std::exp(-u * u));
  out.result["target_rate"] = number(target);
  const Matrix first = sample_zero_one(m, n, prob, substream_seed(ctx.config.seed, 0));
  const RipReport rip = projected_rip(first, prob, s);
  if (rip.delta_achieved < 0.5) {
    const RnspCertificate cert = rnsp_certificate(rip, rho, m, prob);
    out.result["first_certificate"] = {{"delta", number(rip.delta_achieved)},
                                       {"rho", number(cert.rho)},
                                       {"tau", number(cert.tau)},
                                       {"holds", cert.holds}};
  } else {
    out.result["first_certificate"] = nullptr;
  }
  Table table;
  table.columns = {"trial", "delta"};
  for (std::size_t i = 0; i < t.deltas.size(); ++i) table.add({i, number(t.deltas[i])});
  out.table = std::move(table);
  out.checks_passed = t.success_rate >= target;
  return out;
}

Outcome cmd_binom(const Context& ctx) {
  const Params& p = ctx.params;
  const auto m = p.count("m", 50);
  const double prob = p.real("p", 0.1);
  const double k = p.real("k", 10.0);
  const double bound = binom_tail_lower(m, prob, k);
  const auto j = static_cast<std::size_t>(std::ceil(k - 1.0));
  const double exact = binom_tail_exact(m, prob, j);
  Outcome out;
  out.result["m"] = m;
  out.result["p"] = number(prob);
  out.result["k"] = number(k);
  out.result["bound"] = number(bound);
  out.result["exact_tail"] = number(exact);
  out.result["holds"] = exact >= bound;
  out.checks_passed = exact >= bound;
  return out;
}

Outcome cmd_appendixc(const Context& ctx) {
  const auto checks = appendix_c_check(ctx.params.count("grid", 100'000));
  Outcome out;
  Table table;
  table.columns = {"name", "max_slack", "argmax", "points", "holds"};
  Json arr = Json::array();
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& c : checks) {
    table.add({c.name, number(c.max_slack), number(c.argmax), c.points, c.holds});
    arr.push_back({{"name", c.name},
                   {"max_slack", number(c.max_slack)},
                   {"argmax", number(c.argmax)},
                   {"points", c.points},
                   {"holds", c.holds}});
    worst = std::max(worst, c.max_slack);
    out.checks_passed = out.checks_passed && c.holds;
  }
  out.result["checks"] = arr;
  out.result["max_violation"] = number(std::max(0.0, worst));
  out.table = std::move(table);
  return out;
}

struct Command {
  std::set<std::string> keys;
  std::function<Outcome(const Context&)> run;
};

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table = {
      {"psi", {{"dist", "param", "alpha", "method", "samples"}, cmd_psi}},
      {"width", {{"set", "n", "s", "points"}, cmd_width}},
      {"tail", {{"dist", "param", "terms", "c"}, cmd_tail}},
      {"hw", {{"dist", "param", "dim", "matrix", "K", "c"}, cmd_hw}},
      {"concentrate", {{"dist", "param", "m", "n", "s", "set", "points", "multiplier", "mode"}, cmd_concentrate}},
      {"scaling", {{"K"}, cmd_scaling}},
      {"tightness", {{"K", "m"}, cmd_tightness}},
      {"jl", {{"mode", "dist", "param", "points", "n", "dim", "eps", "delta", "m", "p"}, cmd_jl}},
      {"sketch", {{"dist", "param", "B", "y", "constraint_file", "constraint", "n", "d", "noise", "delta", "m"}, cmd_sketch}},
      {"nsp", {{"mode", "m", "n", "s", "p", "rho", "u"}, cmd_nsp}},
      {"binom", {{"m", "p", "k"}, cmd_binom}},
      {"appendixc", {{"grid"}, cmd_appendixc}},
  };
  return table;
}

std::string iso_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string flatten_csv(const Json& doc) {
  Table t;
  t.columns = {"key", "value"};
  std::function<void(const std::string&, const Json&)> walk = [&](const std::string& prefix, const Json& v) {
    if (v.is_object()) {
      for (auto& [k, sub] : v.items()) walk(prefix.empty() ? k : prefix + "." + k, sub);
    } else if (v.is_array()) {
      for (std::size_t i = 0; i < v.size(); ++i) walk(prefix + "." + std::to_string(i), v[i]);
    } else {
      t.add({prefix, v});
    }
  };
  walk("", doc);
  return t.to_csv();
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  try {
    if (key == "seed") {
      cfg.seed = std::stoull(value);
    } else if (key == "trials") {
      cfg.trials = static_cast<std::size_t>(std::stoull(value));
    } else if (key == "threads") {
      cfg.threads = static_cast<unsigned>(std::stoul(value));
    } else if (key == "out") {
      cfg.out = value;
    } else if (key == "format") {
      if (value != "json" && value != "csv") throw UsageError("key 'format' must be json or csv");
      cfg.format = value == "csv" ? Format::Csv : Format::Json;
    } else if (key == "constants") {
      cfg.constants = value;
    } else if (key == "command") {
      if (cfg.command.empty()) cfg.command = value;
    } else {
      cfg.params[key] = value;
    }
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception&) {
    throw UsageError("key '" + key + "' has an invalid value '" + value + "'");
  }
}

std::pair<std::string, std::string> split_pair(const std::string& token) {
  const auto eq = token.find('=');
  if (eq == std::string::npos || eq == 0)
    throw UsageError("expected key=value, got '" + token + "'");
  return {trim(token.substr(0, eq)), trim(token.substr(eq + 1))};
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, cmd] : commands()) out.push_back(name);
    return out;
  }();
  return names;
}

RunConfig parse_args(const std::vector<std::string>& args) {
  CLI::App app{"Sub-Gaussian concentration experiments", "subgauss"};
  std::string command;
  std::vector<std::string> pairs;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<unsigned> threads;
  std::optional<std::string> out, format, constants, config_file;
  bool no_timestamp = false;
  app.add_option("command", command, "Subcommand")->required();
  app.add_option("params", pairs, "key=value parameters");
  app.add_option("--seed", seed, "Master seed");
  app.add_option("--trials", trials, "Number of Monte-Carlo trials");
  app.add_option("--threads", threads, "Worker threads");
  app.add_option("--out", out, "Output file, - for stdout");
  app.add_option("--format", format, "json or csv");
  app.add_option("--constants", constants, "Constants file");
  app.add_option("--config", config_file, "key=value config file");
  app.add_flag("--no-timestamp", no_timestamp, "Omit the timestamp field");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  RunConfig cfg;
  if (config_file) {
    std::ifstream in(*config_file);
    if (!in) throw UsageError("cannot open config file '" + *config_file + "'");
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto [k, v] = split_pair(line);
      apply_setting(cfg, k, v);
    }
  }
  if (!command.empty()) cfg.command = command;
  for (const auto& token : pairs) {
    const auto [k, v] = split_pair(token);
    cfg.params[k] = v;
  }
  if (seed) cfg.seed = *seed;
  if (trials) cfg.trials = *trials;
  if (threads) cfg.threads = *threads;
  if (out) cfg.out = *out;
  if (format) apply_setting(cfg, "format", *format);
  if (constants) cfg.constants = *constants;
  if (no_timestamp) cfg.timestamp = false;
  if (!commands().count(cfg.command)) throw UsageError("unknown command '" + cfg.command + "'");
  if (cfg.threads == 0) throw UsageError("key 'threads' must be positive");
  return cfg;
}

int dispatch(const RunConfig& config) {
  const auto it = commands().find(config.command);
  if (it == commands().end()) throw UsageError("unknown command '" + config.command + "'");
  if (config.constants) set_active_constants(ConstantTable::load(*config.constants));
  const Params params(config.command, config.params, it->second.keys);
  const Context ctx{config, params};
  Outcome outcome = it->second.run(ctx);

  Json doc;
  doc["command"] = config.command;
  doc["seed"] = config.seed;
  Json echoed = Json::object();
  for (const auto& [k, v] : config.params) echoed[k] = v;
  doc["params"] = echoed;
  for (auto& [k, v] : outcome.result.items()) doc[k] = v;
  doc["checks_passed"] = outcome.checks_passed;
  if (config.timestamp) doc["timestamp"] = iso_timestamp();

  std::string text;
  if (config.format == Format::Json) {
    text = doc.dump(2) + "\n";
  } else if (outcome.table) {
    text = outcome.table->to_csv();
    if (config.timestamp) text = "# timestamp=" + iso_timestamp() + "\n" + text;
  } else {
    text = flatten_csv(doc);
  }
  write_text(config.out, text);
  return outcome.checks_passed ? kExitOk : kExitCheckFailed;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  try {
    return dispatch(parse_args(args));
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    std::cerr << "commands:";
    for (const auto& name : command_names()) std::cerr << ' ' << name;
    std::cerr << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace subgauss::cli

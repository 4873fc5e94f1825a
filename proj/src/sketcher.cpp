#include "subgauss/sketcher.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "subgauss/error.hpp"
#include "subgauss/parallel.hpp"
#include "subgauss/stats.hpp"

namespace subgauss {

Constraint Constraint::parse(const std::string& text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty() || s == "none" || s == "unconstrained") return {};
  if (s == "nonneg" || s == "nonnegative") return {ConstraintKind::NonnegativeOrthant, 1.0};
  if (s.rfind("l1:", 0) == 0 || s.rfind("l1=", 0) == 0) {
    double r = 0.0;
    try {
      r = std::stod(s.substr(3));
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, "bad L1 radius in '" + text + "'");
    }
    require(r > 0.0, ErrorKind::InvalidArgument, "L1 radius must be positive");
    return {ConstraintKind::L1Ball, r};
  }
  throw Error(ErrorKind::InvalidArgument, "unknown constraint '" + text + "'");
}

std::string Constraint::describe() const {
  switch (kind) {
    case ConstraintKind::Unconstrained: return "none";
    case ConstraintKind::NonnegativeOrthant: return "nonneg";
    case ConstraintKind::L1Ball: {
      std::ostringstream os;
      os.precision(12);
      os << "l1:" << radius;
      return os.str();
    }
  }
  return "none";
}

Vector Constraint::project(const Vector& x) const {
  switch (kind) {
    case ConstraintKind::Unconstrained:
      return x;
    case ConstraintKind::NonnegativeOrthant:
      return x.cwiseMax(0.0);
    case ConstraintKind::L1Ball: {
      if (x.lpNorm<1>() <= radius) return x;
      // Sort-based projection onto the simplex of magnitudes.
      std::vector<double> mags(static_cast<std::size_t>(x.size()));
      for (Eigen::Index i = 0; i < x.size(); ++i) mags[static_cast<std::size_t>(i)] = std::fabs(x(i));
      std::sort(mags.begin(), mags.end(), std::greater<>());
      double cumulative = 0.0, theta = 0.0;
      for (std::size_t k = 0; k < mags.size(); ++k) {
        cumulative += mags[k];
        const double candidate = (cumulative - radius) / static_cast<double>(k + 1);
        if (mags[k] > candidate) theta = candidate;
      }
      Vector out(x.size());
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double shrunk = std::max(std::fabs(x(i)) - theta, 0.0);
        out(i) = std::copysign(shrunk, x(i));
      }
      return out;
    }
  }
  return x;
}

SketchProblem load_sketch_problem(const std::filesystem::path& b_csv,
                                  const std::filesystem::path& y_csv,
                                  const std::filesystem::path& constraint_txt) {
  SketchProblem p;
  p.B = read_matrix_csv(b_csv);
  const Matrix y = read_matrix_csv(y_csv);
  require(y.cols() == 1 && y.rows() == p.B.rows(), ErrorKind::Io,
          "y must be a single column with as many rows as B");
  p.y = y.col(0);
  std::ifstream in(constraint_txt);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open " + constraint_txt.string());
  std::string line;
  std::getline(in, line);
  p.constraint = Constraint::parse(line);
  return p;
}

double objective(const Matrix& B, const Vector& y, const Vector& x) {
  return (B * x - y).squaredNorm();
}

Solution solve_constrained_ls(const Matrix& B, const Vector& y, const Constraint& c,
                              const SolverOptions& options) {
  require(B.rows() >= B.cols() && B.cols() >= 1, ErrorKind::InvalidArgument,
          "need n >= d >= 1");
  require(y.size() == B.rows(), ErrorKind::InvalidArgument, "y length must equal rows of B");
  Solution sol;
  if (c.kind == ConstraintKind::Unconstrained) {
    Eigen::ColPivHouseholderQR<Matrix> qr(B);
    require(qr.rank() == B.cols(), ErrorKind::RankDeficient, "B lacks full column rank");
    sol.x = qr.solve(y);
    sol.f = objective(B, y, sol.x);
    return sol;
  }
  Eigen::JacobiSVD<Matrix> svd(B);
  const double smax = svd.singularValues()(0);
  require(smax > 0.0, ErrorKind::RankDeficient, "B is zero");
  const double step = 1.0 / (smax * smax);  // for the objective (1/2)||Bx - y||^2
  const Matrix gram = B.transpose() * B;
  const Vector bty = B.transpose() * y;
  Vector x = c.project(Vector::Zero(B.cols()));
  double f_window = objective(B, y, x);
  sol.converged = false;
  std::size_t it = 0;
  while (it < options.max_iterations) {
    x = c.project(x - step * (gram * x - bty));
    ++it;
    if (it % 10 == 0) {
      const double f = objective(B, y, x);
      const bool flat = f_window - f <= options.tol * std::max(f_window, 1e-300);
      f_window = f;
      if (flat) {
        sol.converged = true;
        break;
      }
    }
  }
  sol.x = x;
  sol.f = objective(B, y, x);
  sol.iterations = it;
  return sol;
}

Solution solve_original(const SketchProblem& p, const SolverOptions& options) {
  return solve_constrained_ls(p.B, p.y, p.constraint, options);
}

Vector residual_direction(const SketchProblem& p, const Vector& x_star) {
  Vector r = p.y - p.B * x_star;
  const double norm = r.norm();
  if (norm <= 1e-14 * std::max(1.0, p.y.norm())) return Vector::Zero(r.size());
  return r / norm;
}

ZQuantities z_quantities(const SketchProblem& p, const Matrix& A, const Vector& u,
                         const Vector& x_star, std::size_t samples, std::uint64_t seed) {
  require(A.cols() == p.B.rows(), ErrorKind::InvalidArgument, "sketch width must equal n");
  const double m = static_cast<double>(A.rows());
  ZQuantities z;
  if (p.constraint.kind == ConstraintKind::Unconstrained) {
    Eigen::HouseholderQR<Matrix> qr(p.B);
    const Matrix Q = qr.householderQ() * Matrix::Identity(p.B.rows(), p.B.cols());
    const Matrix AQ = A * Q;
    Eigen::JacobiSVD<Matrix> svd(AQ / std::sqrt(m));
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    z.z1 = AQ.rows() < AQ.cols() ? 0.0 : smin * smin;
    // sup over unit v in range(B) of |u^T ((1/m) A^T A - I) v| = ||Q^T(...)u||.
    const Vector w = (A.transpose() * (A * u)) / m - u;
    z.z2 = (Q.transpose() * w).norm();
    z.exact = true;
    return z;
  }
  Rng rng(seed);
  const double spread = std::max(1.0, x_star.norm());
  double z1 = std::numeric_limits<double>::infinity(), z2 = 0.0;
  std::size_t used = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    Vector step(x_star.size());
    for (Eigen::Index i = 0; i < step.size(); ++i) step(i) = rng.normal();
    const Vector xi = p.constraint.project(x_star + spread * step);
    Vector v = p.B * (xi - x_star);
    const double norm = v.norm();
    if (norm <= 1e-12) continue;
    v /= norm;
    const Vector av = A * v;
    z1 = std::min(z1, av.squaredNorm() / m);
    z2 = std::max(z2, std::fabs(u.dot(A.transpose() * av) / m - u.dot(v)));
    ++used;
  }
  z.z1 = used ? z1 : 0.0;
  z.z2 = z2;
  z.exact = false;
  return z;
}

SketchResult solve_sketched(const SketchProblem& p, const Matrix& A, const Solution& original,
                            const SolverOptions& options, std::size_t z_samples) {
  require(A.cols() == p.B.rows(), ErrorKind::InvalidArgument, "sketch width must equal n");
  const Matrix AB = A * p.B;
  const Vector Ay = A * p.y;
  const Solution sketched = solve_constrained_ls(AB, Ay, p.constraint, options);
  SketchResult out;
  out.x_hat = sketched.x;
  OptimalityCertificate& cert = out.certificate;
  cert.f_star = original.f;
  cert.f_hat = objective(p.B, p.y, sketched.x);
  cert.g_hat = sketched.f;
  const double floor = 1e-24 * std::max(1.0, p.y.squaredNorm());
  if (cert.f_star <= floor) {
    cert.delta_achieved = cert.f_hat <= floor ? 0.0 : std::numeric_limits<double>::infinity();
  } else {
    cert.delta_achieved = std::sqrt(cert.f_hat / cert.f_star) - 1.0;
  }
  const Vector u = residual_direction(p, original.x);
  cert.z = z_quantities(p, A, u, original.x, z_samples);
  cert.lemma_ratio = cert.z.z1 > 0.0 ? std::pow(1.0 + 2.0 * cert.z.z2 / cert.z.z1, 2)
                                     : std::numeric_limits<double>::infinity();
  cert.lemma_holds = cert.f_hat <= cert.lemma_ratio * cert.f_star * (1.0 + 1e-8) + floor;
  cert.notes = cert.z.exact ? "exact Z on range(B); u = optimal residual direction"
                            : "Z estimated from sampled tangent directions (not certified)";
  if (!sketched.converged) cert.notes += "; sketched solver hit the iteration cap";
  return out;
}

SketchTrials sketch_trials(const SketchProblem& p, const Distribution& law, std::size_t m,
                           double target_delta, std::size_t trials, std::uint64_t seed,
                           unsigned threads) {
  const Solution original = solve_original(p);
  const EnsembleSpec spec = make_ensemble(law, m, static_cast<std::size_t>(p.B.rows()));
  SketchTrials out;
  out.m = m;
  out.trials = trials;
  out.deltas.resize(trials);
  std::vector<char> lemma_ok(trials, 1);
  parallel_for(trials, threads, [&](std::size_t t) {
    const Matrix A = sample_matrix(spec, substream_seed(seed, t));
    const SketchResult r = solve_sketched(p, A, original);
    out.deltas[t] = r.certificate.delta_achieved;
    lemma_ok[t] = r.certificate.lemma_holds ? 1 : 0;
  });
  for (std::size_t t = 0; t < trials; ++t) {
    if (out.deltas[t] <= target_delta) ++out.within_target;
    if (!lemma_ok[t]) ++out.lemma_failures;
  }
  std::vector<double> sorted = out.deltas;
  std::sort(sorted.begin(), sorted.end());
  out.median_delta = quantile_sorted(sorted, 0.5);
  return out;
}

double technical_lemma_rate(const PointSet& T, const Distribution& law, std::size_t m,
                            double delta, std::size_t trials, std::uint64_t seed,
                            unsigned threads) {
  require(T.variant() != PointSet::Variant::SparseSphere, ErrorKind::InvalidArgument,
          "technical lemma check runs on finite sets");
  require(radius(T) <= 2.0 + 1e-12, ErrorKind::InvalidArgument, "set radius must be <= 2");
  const EnsembleSpec spec = make_ensemble(law, m, T.dim());
  const Matrix pts = T.points().transpose();
  const Vector sq = pts.colwise().squaredNorm().transpose();
  std::vector<char> ok(trials, 0);
  parallel_for(trials, threads, [&](std::size_t t) {
    const Matrix A = sample_matrix(spec, substream_seed(seed, t));
    const Vector img = (A * pts).colwise().squaredNorm().transpose() / static_cast<double>(m);
    ok[t] = (img - sq).cwiseAbs().maxCoeff() <= delta ? 1 : 0;
  });
  return static_cast<double>(std::count(ok.begin(), ok.end(), 1)) / static_cast<double>(trials);
}

SketchProblem random_problem(std::size_t n, std::size_t d, double noise, std::uint64_t seed,
                             Constraint c) {
  Rng rng(seed);
  SketchProblem p;
  p.B.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < p.B.rows(); ++i)
    for (Eigen::Index j = 0; j < p.B.cols(); ++j) p.B(i, j) = rng.normal();
  Vector x0(static_cast<Eigen::Index>(d));
  for (Eigen::Index j = 0; j < x0.size(); ++j) x0(j) = rng.normal();
  p.y = p.B * x0;
  for (Eigen::Index i = 0; i < p.y.size(); ++i) p.y(i) += noise * rng.normal();
  p.constraint = c;
  return p;
}

}  // namespace subgauss

#include "subgauss/nullspace.hpp"

#include <algorithm>
#include <cmath>

#include "subgauss/bounds.hpp"
#include "subgauss/error.hpp"
#include "subgauss/parallel.hpp"
#include "subgauss/rng.hpp"

namespace subgauss {

namespace {

void require_probability(double p) {
  require(p > 0.0 && p < 1.0, ErrorKind::InvalidArgument, "p must lie in (0, 1)");
}

}  // namespace

Matrix standardize(const Matrix& a01, double p) {
  require_probability(p);
  return (a01.array() - p) / std::sqrt(p * (1.0 - p));
}

Matrix centering_projector(std::size_t m) {
  require(m >= 1, ErrorKind::InvalidArgument, "m must be positive");
  const auto n = static_cast<Eigen::Index>(m);
  return Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / static_cast<double>(m));
}

Matrix sample_zero_one(std::size_t m, std::size_t n, double p, std::uint64_t seed) {
  require_probability(p);
  Rng rng(seed);
  Matrix a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = rng.bernoulli(p) ? 1.0 : 0.0;
  return a;
}

RipReport projected_rip(const Matrix& a01, double p, std::size_t s) {
  require(a01.rows() >= 2, ErrorKind::InvalidArgument, "need at least two rows");
  require(s >= 1, ErrorKind::InvalidArgument, "s must be positive");
  const auto n = static_cast<std::size_t>(a01.cols());
  RipReport report;
  report.s = s;
  report.order = std::min(2 * s, n);
  require(binomial_coefficient(n, report.order) <= kEnumerationCap,
          ErrorKind::EnumerationTooLarge, "too many supports to enumerate");
  const auto m = static_cast<std::size_t>(a01.rows());
  // P x = x - mean(x) per column, cheaper than forming P.
  Matrix centred = standardize(a01, p);
  centred.rowwise() -= centred.colwise().mean();
  centred /= std::sqrt(static_cast<double>(m - 1));
  report.per_support = support_spectra(centred, report.order);
  report.supports_enumerated = report.per_support.size();
  for (const auto& sp : report.per_support)
    report.delta_achieved =
        std::max({report.delta_achieved, sp.sigma_max - 1.0, 1.0 - sp.sigma_min});
  return report;
}

RnspCertificate rnsp_certificate(const RipReport& report, double rho_target, std::size_t m,
                                 double p) {
  require(report.delta_achieved < 0.5, ErrorKind::DeltaTooLarge,
          "RIP constant must be below 1/2");
  require(m >= 2, ErrorKind::InvalidArgument, "m must be at least 2");
  require_probability(p);
  RnspCertificate cert;
  const double delta = std::max(report.delta_achieved, 1e-300);
  const RnspParameters params = rip_to_rnsp(delta);
  cert.rho = params.rho_prime;
  cert.tau_prime = params.tau_prime;
  cert.tau = 2.0 / (std::sqrt(static_cast<double>(m - 1)) * std::sqrt(p * (1.0 - p)));
  cert.holds = cert.rho < rho_target;
  return cert;
}

FailureProbeReport failure_probe(std::size_t m, double p, std::size_t trials,
                                 std::uint64_t seed, unsigned threads) {
  require_probability(p);
  require(trials >= 1, ErrorKind::InvalidArgument, "trials must be positive");
  const double md = static_cast<double>(m);
  FailureProbeReport r;
  r.m = m;
  r.p = p;
  r.trials = trials;
  if (md * p < 0.5) {
    r.complement = false;
  } else if (md * (1.0 - p) < 0.5) {
    r.complement = true;
  } else {
    throw Error(ErrorKind::HypothesisUnmet, "need mp < 1/2 or m(1-p) < 1/2");
  }
  r.exact = std::pow(r.complement ? p : 1.0 - p, 2.0 * md);

  // Only the first two columns enter the event and the witness A(e1 - e2).
  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (trials + kChunk - 1) / kChunk;
  std::vector<std::size_t> hits(chunks, 0), bad(chunks, 0);
  parallel_chunks(trials, kChunk, threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      Rng rng = Rng::substream(seed, t);
      bool zero_cols = true;
      double witness = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        double a1 = rng.bernoulli(p) ? 1.0 : 0.0;
        double a2 = rng.bernoulli(p) ? 1.0 : 0.0;
        if (r.complement) {
          a1 = 1.0 - a1;
          a2 = 1.0 - a2;
        }
        if (a1 != 0.0 || a2 != 0.0) zero_cols = false;
        witness += (a1 - a2) * (a1 - a2);
      }
      if (zero_cols) {
        ++hits[c];
        // ||v_S||_2 = sqrt(2) while the right side of the null space
        // inequality is tau ||A v||_2 = 0.
        if (witness != 0.0) ++bad[c];
      }
    }
  });
  for (std::size_t c = 0; c < chunks; ++c) {
    r.occurrences += hits[c];
    r.witness_failures += bad[c];
  }
  r.frequency = static_cast<double>(r.occurrences) / static_cast<double>(trials);
  r.sigma = std::sqrt(r.exact * (1.0 - r.exact) / static_cast<double>(trials));
  r.matches_exact = std::fabs(r.frequency - r.exact) <= 3.0 * r.sigma;
  r.above_quarter = r.frequency >= 0.25 - 3.0 * r.sigma;
  return r;
}

NspTrials nsp_trials(std::size_t m, std::size_t n, std::size_t s, double p, double rho,
                     std::size_t trials, std::uint64_t seed, unsigned threads) {
  NspTrials out;
  out.m = m;
  out.n = n;
  out.s = s;
  out.p = p;
  out.rho = rho;
  out.trials = trials;
  out.deltas.assign(trials, 0.0);
  parallel_for(trials, threads, [&](std::size_t t) {
    const Matrix a = sample_zero_one(m, n, p, substream_seed(seed, t));
    out.deltas[t] = projected_rip(a, p, s).delta_achieved;
  });
  out.successes = static_cast<std::size_t>(std::count_if(
      out.deltas.begin(), out.deltas.end(), [&](double d) { return d <= rho / 2.0; }));
  out.success_rate = trials ? static_cast<double>(out.successes) / static_cast<double>(trials) : 0.0;
  return out;
}

Matrix read_zero_one_csv(const std::filesystem::path& path) {
  Matrix a = read_matrix_csv(path);
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const double v = a.data()[i];
    require(v == 0.0 || v == 1.0, ErrorKind::Io, "0-1 matrix has an entry other than 0 or 1");
  }
  return a;
}

void write_zero_one_csv(const std::filesystem::path& path, const Matrix& a01) {
  write_matrix_csv(a01, path);
}

}  // namespace subgauss

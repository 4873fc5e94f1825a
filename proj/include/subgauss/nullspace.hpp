#pragma once

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

#include "subgauss/ensembles.hpp"
#include "subgauss/geometry.hpp"

namespace subgauss {

/// Entrywise (A_ij - p) / sqrt(p(1-p)).
Matrix standardize(const Matrix& a01, double p);

/// I - 1 1^T / m.
Matrix centering_projector(std::size_t m);

/// Draws an m x n matrix of independent Bernoulli(p) entries in {0, 1}.
Matrix sample_zero_one(std::size_t m, std::size_t n, double p, std::uint64_t seed);

struct RipReport {
  std::size_t s = 0;      // sparsity of the null space property
  std::size_t order = 0;  // support size enumerated, min(2s, n)
  double delta_achieved = 0.0;
  std::vector<SupportSpectrum> per_support;
  std::size_t supports_enumerated = 0;
};

/// Restricted isometry constant of M = P A~ / sqrt(m - 1) over all supports of
/// size min(2s, n). Throws EnumerationTooLarge past the enumeration cap.
RipReport projected_rip(const Matrix& a01, double p, std::size_t s);

struct RnspCertificate {
  double rho = 0.0;  // rho' from the RIP constant
  double tau = 0.0;  // 2 / (sqrt(m-1) sqrt(p(1-p)))
  double tau_prime = 0.0;
  bool holds = false;  // rho < rho_target
};

/// Throws DeltaTooLarge when report.delta_achieved >= 1/2.
RnspCertificate rnsp_certificate(const RipReport& report, double rho_target, std::size_t m,
                                 double p);

struct FailureProbeReport {
  std::size_t m = 0;
  double p = 0.0;
  std::size_t trials = 0;
  bool complement = false;  // event checked on 1 - A because m(1-p) < 1/2
  std::size_t occurrences = 0;
  double frequency = 0.0;
  double exact = 0.0;  // (1-p)^{2m}, or p^{2m} on the complement path
  double sigma = 0.0;  // sqrt(exact (1 - exact) / trials)
  bool matches_exact = false;  // |frequency - exact| <= 3 sigma
  bool above_quarter = false;  // frequency >= 1/4 - 3 sigma
  std::size_t witness_failures = 0;  // occurrences where v = e1 - e2 is not in the kernel
};

/// Frequency of two identically zero columns. Requires mp < 1/2 or
/// m(1-p) < 1/2, else HypothesisUnmet.
FailureProbeReport failure_probe(std::size_t m, double p, std::size_t trials,
                                 std::uint64_t seed, unsigned threads = 1);

struct NspTrials {
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t s = 0;
  double p = 0.0;
  double rho = 0.0;
  std::size_t trials = 0;
  std::vector<double> deltas;
  std::size_t successes = 0;  // delta <= rho / 2
  double success_rate = 0.0;
};

/// Repeats projected_rip on independent m x n Bernoulli(p) matrices.
NspTrials nsp_trials(std::size_t m, std::size_t n, std::size_t s, double p, double rho,
                     std::size_t trials, std::uint64_t seed, unsigned threads = 1);

/// 0/1 CSV import and export; import rejects entries other than 0 and 1.
Matrix read_zero_one_csv(const std::filesystem::path& path);
void write_zero_one_csv(const std::filesystem::path& path, const Matrix& a01);

}  // namespace subgauss

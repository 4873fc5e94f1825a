#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "subgauss/distribution.hpp"
#include "subgauss/rng.hpp"

namespace subgauss {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Random m x n matrix with i.i.d. entries.
struct EnsembleSpec {
  std::size_t rows = 0;
  std::size_t cols = 0;
  Distribution entry_law = Distribution::gaussian();
  bool mean_zero = true;
  bool isotropic = true;
  double K = 0.0;  // sub-Gaussian parameter
  std::string label;
};

/// Builds a spec, deriving mean_zero, isotropy and K from the entry law.
/// Exponential entries are rejected (not sub-Gaussian).
EnsembleSpec make_ensemble(const Distribution& law, std::size_t rows, std::size_t cols,
                           std::string label = {});

/// Unique K > 1 with K^2 log K = level.
double solve_k_log_k(double level);

/// K with K^2 log K = 1/(p(1-p)); bounds psi_2 of the standardized entry.
double k_for_standardized_bernoulli(double p);

/// Sub-Gaussian parameter used for an ensemble with this entry law.
double sub_gaussian_parameter(const Distribution& law);

/// Entries drawn row by row from Rng(seed).
Matrix sample_matrix(const EnsembleSpec& spec, std::uint64_t seed);
void fill_matrix(const EnsembleSpec& spec, Rng& rng, Matrix& out);

struct RowKEstimate {
  double K = 0.0;
  std::vector<double> per_direction;
};

/// max over directions of the sample psi_2 of <row, x>. Directions are e_1,
/// the normalized all-ones vector, then random unit vectors.
RowKEstimate estimate_row_k(const EnsembleSpec& spec, std::size_t random_directions,
                            std::size_t samples, std::uint64_t seed);

struct IsotropyReport {
  std::size_t trials = 0;
  double frobenius_error = 0.0;
  double tolerance = 0.0;  // 5 n / sqrt(trials)
  double max_abs_z = 0.0;
  double mean_off_diagonal = 0.0;
  bool passes = false;
  Matrix second_moment;
};

IsotropyReport isotropy_report(const EnsembleSpec& spec, std::size_t trials,
                               std::uint64_t seed, unsigned threads = 1);

/// The fixed l x m multiplier applied on the left of A.
class Multiplier {
 public:
  enum class Variant { Identity, Diagonal, OrthoProjection, Dense };

  static Multiplier identity(std::size_t m);
  static Multiplier diagonal(const Vector& entries);
  /// I - 11^T/m: projection onto the complement of the all-ones vector.
  static Multiplier ortho_projection(std::size_t m);
  static Multiplier dense(const Matrix& entries);

  Variant variant() const noexcept { return variant_; }
  std::size_t rows() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(matrix_.cols()); }
  const Matrix& matrix() const noexcept { return matrix_; }
  bool is_diagonal() const noexcept;

  double frobenius_norm() const noexcept { return frobenius_; }
  double operator_norm() const noexcept { return operator_; }
  double stable_rank() const noexcept {
    return frobenius_ * frobenius_ / (operator_ * operator_);
  }

  Multiplier scaled(double factor) const;
  Matrix apply(const Matrix& a) const;

 private:
  Multiplier(Variant variant, Matrix matrix);

  Variant variant_;
  Matrix matrix_;
  double frobenius_ = 0.0;
  double operator_ = 0.0;
};

std::string to_string(Multiplier::Variant variant);

void write_matrix_csv(const Matrix& m, const std::filesystem::path& path);
Matrix read_matrix_csv(const std::filesystem::path& path);

/// Binary layout: "SGM1", uint64 rows, uint64 cols, row-major little-endian f64.
void write_matrix_binary(const Matrix& m, const std::filesystem::path& path);
Matrix read_matrix_binary(const std::filesystem::path& path);

}  // namespace subgauss

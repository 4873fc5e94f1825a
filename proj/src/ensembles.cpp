#include "subgauss/ensembles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "subgauss/error.hpp"
#include "subgauss/orlicz.hpp"
#include "subgauss/parallel.hpp"

namespace subgauss {

namespace {

const double kGaussianPsi2 = std::sqrt(8.0 / 3.0);

bool unit_variance(const Distribution& law) {
  return law.is_mean_zero() && std::fabs(law.second_moment() - 1.0) < 1e-12;
}

}  // namespace

double solve_k_log_k(double level) {
  require(level > 0.0 && std::isfinite(level), ErrorKind::InvalidArgument,
          "K^2 log K level must be positive");
  const auto f = [&](double k) { return k * k * std::log(k) - level; };
  double lo = 1.0, hi = 2.0;
  while (f(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

double k_for_standardized_bernoulli(double p) {
  require(p > 0.0 && p < 1.0, ErrorKind::InvalidArgument, "p must lie in (0, 1)");
  return solve_k_log_k(1.0 / (p * (1.0 - p)));
}

double sub_gaussian_parameter(const Distribution& law) {
  using K = Distribution::Kind;
  const double p = law.parameter();
  switch (law.kind()) {
    case K::Gaussian:
      return kGaussianPsi2 * p;
    case K::Rademacher:
      // Rademacher marginals are dominated by the Gaussian mgf.
      return kGaussianPsi2;
    case K::StandardizedBernoulli:
      return k_for_standardized_bernoulli(p);
    case K::ScaledBernoulli:
      return p;
    case K::SparseTernary: {
      const double entry = psi_norm_analytic(law, 2.0).value;
      // q >= 1/3 has mgf below the standard Gaussian one.
      if (p >= 1.0 / 3.0) return std::max(entry, kGaussianPsi2);
      EnsembleSpec probe{1, 16, law, true, true, 0.0, "probe"};
      const RowKEstimate est = estimate_row_k(probe, 8, 20'000, kDefaultSeed);
      return std::max({entry, kGaussianPsi2, est.K});
    }
    case K::BoundedUniform:
      // Uniform is dominated by a Gaussian of equal variance.
      return kGaussianPsi2 * p / std::sqrt(3.0);
    case K::BernoulliZeroOne:
    case K::Constant:
      return psi_norm_analytic(law, 2.0).value;
    case K::Exponential:
      break;
  }
  throw Error(ErrorKind::InvalidArgument, law.name() + " is not sub-Gaussian");
}

EnsembleSpec make_ensemble(const Distribution& law, std::size_t rows, std::size_t cols,
                           std::string label) {
  require(rows > 0 && cols > 0, ErrorKind::InvalidArgument, "ensemble dimensions must be > 0");
  EnsembleSpec spec;
  spec.rows = rows;
  spec.cols = cols;
  spec.entry_law = law;
  spec.mean_zero = law.is_mean_zero();
  spec.isotropic = unit_variance(law);
  spec.K = sub_gaussian_parameter(law);
  spec.label = label.empty() ? law.name() : std::move(label);
  return spec;
}

void fill_matrix(const EnsembleSpec& spec, Rng& rng, Matrix& out) {
  out.resize(static_cast<Eigen::Index>(spec.rows), static_cast<Eigen::Index>(spec.cols));
  for (Eigen::Index i = 0; i < out.rows(); ++i)
    for (Eigen::Index j = 0; j < out.cols(); ++j) out(i, j) = spec.entry_law.sample(rng);
}

Matrix sample_matrix(const EnsembleSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  Matrix out;
  fill_matrix(spec, rng, out);
  return out;
}

RowKEstimate estimate_row_k(const EnsembleSpec& spec, std::size_t random_directions,
                            std::size_t samples, std::uint64_t seed) {
  const auto n = static_cast<Eigen::Index>(spec.cols);
  std::vector<Vector> directions;
  directions.push_back(Vector::Unit(n, 0));
  directions.push_back(Vector::Ones(n) / std::sqrt(static_cast<double>(n)));
  Rng dir_rng(substream_seed(seed, 0));
  for (std::size_t d = 0; d < random_directions; ++d) {
    Vector x(n);
    for (Eigen::Index j = 0; j < n; ++j) x(j) = dir_rng.normal();
    directions.push_back(x / x.norm());
  }
  SampleOptions opts;
  opts.min_samples = 1;
  opts.bootstrap = false;
  opts.tol = 1e-8;
  RowKEstimate out;
  std::vector<double> values(samples);
  Vector row(n);
  for (std::size_t d = 0; d < directions.size(); ++d) {
    Rng rng(substream_seed(seed, d + 1));
    for (std::size_t s = 0; s < samples; ++s) {
      for (Eigen::Index j = 0; j < n; ++j) row(j) = spec.entry_law.sample(rng);
      values[s] = row.dot(directions[d]);
    }
    const double psi = psi_norm_from_samples(values, 2.0, opts).value;
    out.per_direction.push_back(psi);
    out.K = std::max(out.K, psi);
  }
  return out;
}

IsotropyReport isotropy_report(const EnsembleSpec& spec, std::size_t trials, std::uint64_t seed,
                               unsigned threads) {
  require(trials >= 100, ErrorKind::InvalidArgument, "isotropy report needs >= 100 trials");
  const auto n = static_cast<Eigen::Index>(spec.cols);
  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (trials + kChunk - 1) / kChunk;
  std::vector<Matrix> sums(chunks, Matrix::Zero(n, n));
  std::vector<Matrix> squares(chunks, Matrix::Zero(n, n));
  parallel_chunks(trials, kChunk, threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
    Vector a(n);
    for (std::size_t t = begin; t < end; ++t) {
      Rng rng = Rng::substream(seed, t);
      for (Eigen::Index j = 0; j < n; ++j) a(j) = spec.entry_law.sample(rng);
      const Matrix outer = a * a.transpose();
      sums[c] += outer;
      squares[c] += outer.cwiseProduct(outer);
    }
  });
  Matrix sum = Matrix::Zero(n, n), sq = Matrix::Zero(n, n);
  for (std::size_t c = 0; c < chunks; ++c) {
    sum += sums[c];
    sq += squares[c];
  }
  const double T = static_cast<double>(trials);
  IsotropyReport report;
  report.trials = trials;
  report.second_moment = sum / T;
  const Matrix identity = Matrix::Identity(n, n);
  report.frobenius_error = (report.second_moment - identity).norm();
  report.tolerance = 5.0 * static_cast<double>(n) / std::sqrt(T);
  double off = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double mu = report.second_moment(i, j);
      const double var = std::max(sq(i, j) / T - mu * mu, 0.0);
      const double se = std::sqrt(var / T);
      const double dev = mu - identity(i, j);
      if (se > 0.0) report.max_abs_z = std::max(report.max_abs_z, std::fabs(dev) / se);
      else if (dev != 0.0) report.max_abs_z = std::numeric_limits<double>::infinity();
      if (i != j) off += mu;
    }
  }
  report.mean_off_diagonal = n > 1 ? off / static_cast<double>(n * (n - 1)) : 0.0;
  report.passes = report.frobenius_error <= report.tolerance;
  return report;
}

// ---- Multiplier -----------------------------------------------------------

Multiplier::Multiplier(Variant variant, Matrix matrix)
    : variant_(variant), matrix_(std::move(matrix)) {
  require(matrix_.size() > 0, ErrorKind::InvalidArgument, "multiplier must be non-empty");
  frobenius_ = matrix_.norm();
  if (is_diagonal()) {
    operator_ = matrix_.diagonal().cwiseAbs().maxCoeff();
  } else {
    Eigen::JacobiSVD<Matrix> svd(matrix_);
    operator_ = svd.singularValues()(0);
  }
  require(operator_ > 0.0, ErrorKind::InvalidArgument, "multiplier must have nonzero norm");
}

Multiplier Multiplier::identity(std::size_t m) {
  const auto k = static_cast<Eigen::Index>(m);
  return {Variant::Identity, Matrix::Identity(k, k)};
}

Multiplier Multiplier::diagonal(const Vector& entries) {
  return {Variant::Diagonal, entries.asDiagonal().toDenseMatrix()};
}

Multiplier Multiplier::ortho_projection(std::size_t m) {
  require(m >= 2, ErrorKind::InvalidArgument, "projection needs m >= 2");
  const auto k = static_cast<Eigen::Index>(m);
  Matrix p = Matrix::Identity(k, k) - Matrix::Constant(k, k, 1.0 / static_cast<double>(m));
  return {Variant::OrthoProjection, std::move(p)};
}

Multiplier Multiplier::dense(const Matrix& entries) { return {Variant::Dense, entries}; }

bool Multiplier::is_diagonal() const noexcept {
  if (variant_ == Variant::Identity || variant_ == Variant::Diagonal) return true;
  if (matrix_.rows() != matrix_.cols()) return false;
  for (Eigen::Index i = 0; i < matrix_.rows(); ++i)
    for (Eigen::Index j = 0; j < matrix_.cols(); ++j)
      if (i != j && matrix_(i, j) != 0.0) return false;
  return true;
}

Multiplier Multiplier::scaled(double factor) const {
  const Variant v = variant_ == Variant::Identity ? Variant::Diagonal : variant_;
  return {factor == 1.0 ? variant_ : v, matrix_ * factor};
}

Matrix Multiplier::apply(const Matrix& a) const {
  require(static_cast<std::size_t>(a.rows()) == cols(), ErrorKind::InvalidArgument,
          "multiplier/ensemble shape mismatch");
  if (variant_ == Variant::Identity) return a;
  if (variant_ == Variant::Diagonal) return matrix_.diagonal().asDiagonal() * a;
  return matrix_ * a;
}

std::string to_string(Multiplier::Variant variant) {
  switch (variant) {
    case Multiplier::Variant::Identity: return "identity";
    case Multiplier::Variant::Diagonal: return "diagonal";
    case Multiplier::Variant::OrthoProjection: return "ortho_projection";
    case Multiplier::Variant::Dense: return "dense";
  }
  return "unknown";
}

// ---- IO -------------------------------------------------------------------

void write_matrix_csv(const Matrix& m, const std::filesystem::path& path) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot open " + path.string());
  out.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
}

Matrix read_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error(ErrorKind::Io, "bad number '" + cell + "' in " + path.string());
      }
    }
    if (!rows.empty()) {
      require(row.size() == rows.front().size(), ErrorKind::Io,
              "ragged rows in " + path.string());
    }
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), ErrorKind::Io, "no rows in " + path.string());
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

static_assert(std::endian::native == std::endian::little,
              "binary matrix IO assumes a little-endian host");

void write_matrix_binary(const Matrix& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot open " + path.string());
  const std::uint64_t dims[2] = {static_cast<std::uint64_t>(m.rows()),
                                 static_cast<std::uint64_t>(m.cols())};
  out.write("SGM1", 4);
  out.write(reinterpret_cast<const char*>(dims), sizeof dims);
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m;
  out.write(reinterpret_cast<const char*>(rm.data()),
            static_cast<std::streamsize>(sizeof(double) * rm.size()));
  require(static_cast<bool>(out), ErrorKind::Io, "write failed for " + path.string());
}

Matrix read_matrix_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open " + path.string());
  char magic[4];
  std::uint64_t dims[2];
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(dims), sizeof dims);
  require(static_cast<bool>(in) && std::memcmp(magic, "SGM1", 4) == 0, ErrorKind::Io,
          "bad matrix header in " + path.string());
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm(
      static_cast<Eigen::Index>(dims[0]), static_cast<Eigen::Index>(dims[1]));
  in.read(reinterpret_cast<char*>(rm.data()),
          static_cast<std::streamsize>(sizeof(double) * rm.size()));
  require(static_cast<bool>(in), ErrorKind::Io, "truncated matrix in " + path.string());
  return rm;
}

}  // namespace subgauss

#include "subgauss/distribution.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "subgauss/error.hpp"

namespace subgauss {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::UnsupportedPair: return "UnsupportedPair";
    case ErrorKind::NoFiniteMgf: return "NoFiniteMgf";
    case ErrorKind::TooFewSamples: return "TooFewSamples";
    case ErrorKind::EnumerationTooLarge: return "EnumerationTooLarge";
    case ErrorKind::BadK: return "BadK";
    case ErrorKind::BadMoments: return "BadMoments";
    case ErrorKind::BadDelta: return "BadDelta";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::MeanZeroRequired: return "MeanZeroRequired";
    case ErrorKind::DeltaTooLarge: return "DeltaTooLarge";
    case ErrorKind::HypothesisUnmet: return "HypothesisUnmet";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::DegenerateFit: return "DegenerateFit";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_open_unit(double p, const char* law) {
  require(p > 0.0 && p < 1.0, ErrorKind::InvalidArgument,
          std::string(law) + " requires p in (0, 1)");
}

double integrate(const std::function<double(double)>& g, double a, double b) {
  try {
    double err = 0.0;
    const double value =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, a, b, 15, 1e-12, &err);
    return std::isfinite(value) ? value : kInf;
  } catch (const std::exception&) {
    return kInf;
  }
}

}  // namespace

Distribution Distribution::gaussian(double sigma) {
  require(sigma > 0.0, ErrorKind::InvalidArgument, "gaussian requires sigma > 0");
  return {Kind::Gaussian, sigma};
}

Distribution Distribution::rademacher() { return {Kind::Rademacher, 0.0}; }

Distribution Distribution::bernoulli01(double p) {
  // p = 1 is the degenerate constant law; kept because its psi_2 value is a
  // useful fixed point of the closed-form formula.
  require(p > 0.0 && p <= 1.0, ErrorKind::InvalidArgument, "bernoulli01 requires p in (0, 1]");
  return {Kind::BernoulliZeroOne, p};
}

Distribution Distribution::standardized_bernoulli(double p) {
  check_open_unit(p, "std_bernoulli");
  return {Kind::StandardizedBernoulli, p};
}

Distribution Distribution::scaled_bernoulli(double K) {
  require(K >= 4.0, ErrorKind::InvalidArgument, "scaled_bernoulli requires K >= 4");
  return {Kind::ScaledBernoulli, K};
}

Distribution Distribution::sparse_ternary(double q) {
  require(q > 0.0 && q <= 1.0, ErrorKind::InvalidArgument, "sparse_ternary requires q in (0, 1]");
  return {Kind::SparseTernary, q};
}

Distribution Distribution::exponential(double lambda) {
  require(lambda > 0.0, ErrorKind::InvalidArgument, "exponential requires lambda > 0");
  return {Kind::Exponential, lambda};
}

Distribution Distribution::bounded_uniform(double M) {
  require(M > 0.0, ErrorKind::InvalidArgument, "uniform requires M > 0");
  return {Kind::BoundedUniform, M};
}

Distribution Distribution::constant(double value) { return {Kind::Constant, value}; }

std::string Distribution::name() const {
  std::ostringstream os;
  os.precision(12);
  switch (kind_) {
    case Kind::Gaussian: os << "gaussian(sigma=" << param_ << ")"; break;
    case Kind::Rademacher: os << "rademacher"; break;
    case Kind::BernoulliZeroOne: os << "bernoulli01(p=" << param_ << ")"; break;
    case Kind::StandardizedBernoulli: os << "std_bernoulli(p=" << param_ << ")"; break;
    case Kind::ScaledBernoulli: os << "scaled_bernoulli(K=" << param_ << ")"; break;
    case Kind::SparseTernary: os << "sparse_ternary(q=" << param_ << ")"; break;
    case Kind::Exponential: os << "exponential(lambda=" << param_ << ")"; break;
    case Kind::BoundedUniform: os << "uniform(M=" << param_ << ")"; break;
    case Kind::Constant: os << "constant(c=" << param_ << ")"; break;
  }
  return os.str();
}

double Distribution::scaled_bernoulli_level() const {
  require(kind_ == Kind::ScaledBernoulli, ErrorKind::InvalidArgument,
          "level is defined for scaled_bernoulli only");
  return param_ * param_ * std::log(param_);
}

double Distribution::mean() const {
  switch (kind_) {
    case Kind::BernoulliZeroOne: return param_;
    case Kind::Exponential: return 1.0 / param_;
    case Kind::Constant: return param_;
    default: return 0.0;
  }
}

double Distribution::second_moment() const {
  switch (kind_) {
    case Kind::Gaussian: return param_ * param_;
    case Kind::BernoulliZeroOne: return param_;
    case Kind::Exponential: return 2.0 / (param_ * param_);
    case Kind::BoundedUniform: return param_ * param_ / 3.0;
    case Kind::Constant: return param_ * param_;
    default: return 1.0;
  }
}

double Distribution::variance() const {
  const double mu = mean();
  return second_moment() - mu * mu;
}

bool Distribution::is_mean_zero() const { return mean() == 0.0; }

bool Distribution::is_symmetric() const {
  switch (kind_) {
    case Kind::BernoulliZeroOne:
    case Kind::Exponential:
      return false;
    case Kind::StandardizedBernoulli:
      return param_ == 0.5;
    case Kind::Constant:
      return param_ == 0.0;
    default:
      return true;
  }
}

double Distribution::sample(Rng& rng) const {
  switch (kind_) {
    case Kind::Gaussian:
      return param_ * rng.normal();
    case Kind::Rademacher:
      return rng.sign();
    case Kind::BernoulliZeroOne:
      return rng.uniform() < param_ ? 1.0 : 0.0;
    case Kind::StandardizedBernoulli: {
      const double q = 1.0 - param_;
      return rng.uniform() < param_ ? std::sqrt(q / param_) : -std::sqrt(param_ / q);
    }
    case Kind::ScaledBernoulli: {
      const double level = scaled_bernoulli_level();
      if (rng.uniform() < 1.0 / level) return rng.sign() * std::sqrt(level);
      return 0.0;
    }
    case Kind::SparseTernary:
      if (rng.uniform() < param_) return rng.sign() / std::sqrt(param_);
      return 0.0;
    case Kind::Exponential:
      return -std::log(rng.uniform_open_low()) / param_;
    case Kind::BoundedUniform:
      return param_ * (2.0 * rng.uniform() - 1.0);
    case Kind::Constant:
      return param_;
  }
  return 0.0;
}

std::optional<DiscreteLaw> Distribution::atoms() const {
  switch (kind_) {
    case Kind::Rademacher:
      return DiscreteLaw{{-1.0, 1.0}, {0.5, 0.5}};
    case Kind::BernoulliZeroOne:
      return DiscreteLaw{{0.0, 1.0}, {1.0 - param_, param_}};
    case Kind::StandardizedBernoulli: {
      const double q = 1.0 - param_;
      return DiscreteLaw{{-std::sqrt(param_ / q), std::sqrt(q / param_)}, {q, param_}};
    }
    case Kind::ScaledBernoulli: {
      const double level = scaled_bernoulli_level();
      const double a = std::sqrt(level);
      const double tail = 0.5 / level;
      return DiscreteLaw{{-a, 0.0, a}, {tail, 1.0 - 1.0 / level, tail}};
    }
    case Kind::SparseTernary: {
      const double a = 1.0 / std::sqrt(param_);
      return DiscreteLaw{{-a, 0.0, a}, {0.5 * param_, 1.0 - param_, 0.5 * param_}};
    }
    case Kind::Constant:
      return DiscreteLaw{{param_}, {1.0}};
    default:
      return std::nullopt;
  }
}

double Distribution::expectation(const std::function<double(double)>& f) const {
  if (auto law = atoms()) {
    double total = 0.0;
    for (std::size_t i = 0; i < law->values.size(); ++i) {
      if (law->probs[i] == 0.0) continue;
      total += law->probs[i] * f(law->values[i]);
    }
    return std::isfinite(total) ? total : kInf;
  }
  switch (kind_) {
    case Kind::Gaussian: {
      const double sigma = param_;
      const double norm = 1.0 / std::sqrt(2.0 * std::numbers::pi);
      return integrate(
          [&](double z) {
            const double w = norm * std::exp(-0.5 * z * z);
            if (w == 0.0) return 0.0;
            return w * (f(sigma * z) + f(-sigma * z));
          },
          0.0, kInf);
    }
    case Kind::Exponential: {
      const double lambda = param_;
      return integrate(
          [&](double x) {
            const double w = lambda * std::exp(-lambda * x);
            if (w == 0.0) return 0.0;
            return w * f(x);
          },
          0.0, kInf);
    }
    case Kind::BoundedUniform: {
      const double M = param_;
      return integrate([&](double x) { return 0.5 * (f(x) + f(-x)) / M; }, 0.0, M);
    }
    default:
      break;
  }
  throw Error(ErrorKind::InvalidArgument, "no expectation rule for " + name());
}

double default_parameter(const std::string& name) {
  if (name == "gaussian" || name == "normal") return 1.0;
  if (name == "bernoulli01" || name == "std_bernoulli") return 0.5;
  if (name == "scaled_bernoulli") return 4.0;
  if (name == "sparse_ternary") return 0.25;
  if (name == "exponential") return 1.0;
  if (name == "uniform") return 1.0;
  if (name == "constant") return 1.0;
  return 0.0;
}

Distribution parse_distribution(const std::string& name, double parameter) {
  if (name == "gaussian" || name == "normal") return Distribution::gaussian(parameter);
  if (name == "rademacher") return Distribution::rademacher();
  if (name == "bernoulli01") return Distribution::bernoulli01(parameter);
  if (name == "std_bernoulli") return Distribution::standardized_bernoulli(parameter);
  if (name == "scaled_bernoulli") return Distribution::scaled_bernoulli(parameter);
  if (name == "sparse_ternary") return Distribution::sparse_ternary(parameter);
  if (name == "exponential") return Distribution::exponential(parameter);
  if (name == "uniform") return Distribution::bounded_uniform(parameter);
  if (name == "constant") return Distribution::constant(parameter);
  throw Error(ErrorKind::InvalidArgument, "unknown distribution '" + name + "'");
}

}  // namespace subgauss

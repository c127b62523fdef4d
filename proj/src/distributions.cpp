#include "tpreg/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tpreg/numerics.hpp"

namespace tpreg {

using num::inf;

BaselineKind BaselineKind::student_t(double df) {
  if (!(df > 0.0)) throw std::invalid_argument("student_t baseline requires df > 0");
  return {Baseline::StudentT, df};
}

std::string to_string(const BaselineKind& b) {
  switch (b.tag) {
    case Baseline::Normal: return "normal";
    case Baseline::Laplace: return "laplace";
    case Baseline::Logistic: return "logistic";
    case Baseline::StudentT: return "student-t(" + std::to_string(b.df) + ")";
  }
  return "?";
}

BaselineKind baseline_from_string(const std::string& name, double df) {
  if (name == "normal") return BaselineKind::normal();
  if (name == "laplace") return BaselineKind::laplace();
  if (name == "logistic") return BaselineKind::logistic();
  if (name == "student-t" || name == "student_t" || name == "t")
    return BaselineKind::student_t(df);
  throw std::invalid_argument("unknown baseline: " + name);
}

std::string to_string(SkewParameterisation p) {
  return p == SkewParameterisation::EpsilonSkew ? "epsilon-skew" : "inverse-scale";
}

double skew_symmetry_point(SkewParameterisation p) {
  return p == SkewParameterisation::EpsilonSkew ? 0.0 : 1.0;
}

bool skew_in_domain(double gamma, SkewParameterisation p) {
  if (!std::isfinite(gamma)) return false;
  if (p == SkewParameterisation::EpsilonSkew) return gamma > -1.0 && gamma < 1.0;
  return gamma > 0.0;
}

AB ab(double gamma, SkewParameterisation p) {
  if (!skew_in_domain(gamma, p))
    throw std::invalid_argument("skewness parameter outside its domain");
  if (p == SkewParameterisation::EpsilonSkew) return {1.0 - gamma, 1.0 + gamma};
  return {gamma, 1.0 / gamma};
}

void TwoPieceParams::validate() const {
  if (!std::isfinite(mu)) throw std::invalid_argument("two-piece: mu must be finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw std::invalid_argument("two-piece: sigma must be positive");
  if (!skew_in_domain(gamma, parameterisation))
    throw std::invalid_argument("two-piece: gamma outside its domain");
  if (baseline.tag == Baseline::StudentT && !(baseline.df > 0.0))
    throw std::invalid_argument("two-piece: student-t df must be positive");
}

double baseline_logpdf(double z, const BaselineKind& b) {
  switch (b.tag) {
    case Baseline::Normal:
      return num::norm_logpdf(z);
    case Baseline::Laplace:
      return -std::fabs(z) - 0.6931471805599453;  // log(1/2)
    case Baseline::Logistic: {
      const double az = std::fabs(z);
      return -az - 2.0 * std::log1p(std::exp(-az));
    }
    case Baseline::StudentT:
      return num::student_t_logpdf(z, b.df);
  }
  return -inf;
}

double baseline_cdf(double z, const BaselineKind& b) {
  switch (b.tag) {
    case Baseline::Normal:
      return num::norm_cdf(z);
    case Baseline::Laplace:
      return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
    case Baseline::Logistic:
      return 1.0 / (1.0 + std::exp(-z));
    case Baseline::StudentT:
      return num::student_t_cdf(z, b.df);
  }
  return 0.0;
}

double baseline_logsf(double z, const BaselineKind& b) {
  switch (b.tag) {
    case Baseline::Normal:
      return num::norm_logcdf(-z);
    case Baseline::Laplace:
      return z < 0.0 ? std::log1p(-0.5 * std::exp(z)) : std::log(0.5) - z;
    case Baseline::Logistic:
      return -z - std::log1p(std::exp(-z));
    case Baseline::StudentT:
      return num::student_t_logsf(z, b.df);
  }
  return -inf;
}

double baseline_quantile(double p, const BaselineKind& b) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("baseline_quantile: p outside (0,1)");
  switch (b.tag) {
    case Baseline::Normal:
      return num::norm_quantile(p);
    case Baseline::Laplace:
      return p < 0.5 ? std::log(2.0 * p) : -std::log(2.0 * (1.0 - p));
    case Baseline::Logistic:
      return std::log(p) - std::log1p(-p);
    case Baseline::StudentT:
      return num::student_t_quantile(p, b.df);
  }
  return 0.0;
}

double tp_logpdf(double z, const TwoPieceParams& params) {
  params.validate();
  if (!std::isfinite(z)) throw std::invalid_argument("tp_logpdf: z must be finite");
  return TwoPieceDist(params).logpdf(z);
}

double tp_cdf(double z, const TwoPieceParams& params) {
  params.validate();
  return TwoPieceDist(params).cdf(z);
}

double tp_logsf(double z, const TwoPieceParams& params) {
  params.validate();
  return TwoPieceDist(params).logsf(z);
}

double tp_quantile(double p, const TwoPieceParams& params) {
  params.validate();
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("tp_quantile: p outside (0,1)");
  const auto [a, b] = ab(params.gamma, params.parameterisation);
  const double mass_left = b / (a + b);
  if (p < mass_left)
    return params.mu +
           params.sigma * b * baseline_quantile(p * (a + b) / (2.0 * b), params.baseline);
  return params.mu +
         params.sigma * a *
             baseline_quantile((p * (a + b) - b + a) / (2.0 * a), params.baseline);
}

double tp_median(const TwoPieceParams& params) { return tp_quantile(0.5, params); }

double tp_sample_one(const TwoPieceParams& params, Rng& rng) {
  return tp_quantile(rng.uniform(), params);
}

std::vector<double> tp_sample(std::size_t n, const TwoPieceParams& params,
                              std::uint64_t rng_seed) {
  params.validate();
  if (n == 0) throw std::invalid_argument("tp_sample: n must be >= 1");
  Rng rng(rng_seed);
  std::vector<double> out(n);
  for (auto& v : out) v = tp_sample_one(params, rng);
  return out;
}

TwoPieceDist::TwoPieceDist(const TwoPieceParams& params) : p_(params) {
  const auto [a, b] = ab(p_.gamma, p_.parameterisation);
  a_ = a;
  b_ = b;
  // at the symmetry point a = b = 1 the normalizer must reduce to -log sigma
  // exactly, so the symmetric-baseline identity holds bit-for-bit
  log_norm_ = (a_ == b_) ? -std::log(p_.sigma) - std::log(a_)
                         : std::log(2.0) - std::log(p_.sigma) - std::log(a_ + b_);
  mass_left_ = b_ / (a_ + b_);
  if (p_.baseline.tag == Baseline::StudentT) {
    const double df = p_.baseline.df;
    t_lognorm_ = std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) -
                 0.5 * std::log(df * num::pi);
  }
}

double TwoPieceDist::logpdf(double z) const {
  const double r = z - p_.mu;
  const double s = (r < 0.0) ? p_.sigma * b_ : p_.sigma * a_;
  const double u = r / s;
  if (p_.baseline.tag == Baseline::StudentT) {
    const double df = p_.baseline.df;
    return log_norm_ + (t_lognorm_ - 0.5 * (df + 1.0) * std::log1p(u * u / df));
  }
  return log_norm_ + baseline_logpdf(u, p_.baseline);
}

double TwoPieceDist::cdf(double z) const {
  const double r = z - p_.mu;
  if (r == 0.0) return mass_left_;  // P[Z <= mu] = b/(a+b), exact
  double g;
  if (r < 0.0)
    g = 2.0 * mass_left_ * baseline_cdf(r / (p_.sigma * b_), p_.baseline);
  else
    g = mass_left_ - (1.0 - mass_left_) +
        2.0 * (1.0 - mass_left_) * baseline_cdf(r / (p_.sigma * a_), p_.baseline);
  return std::clamp(g, 0.0, 1.0);
}

double TwoPieceDist::logsf(double z) const {
  const double r = z - p_.mu;
  if (r >= 0.0) {
    // 1 - G = 2a/(a+b) * (1 - F(r / sigma a))
    return std::log(2.0 * (1.0 - mass_left_)) +
           baseline_logsf(r / (p_.sigma * a_), p_.baseline);
  }
  const double g = 2.0 * mass_left_ * baseline_cdf(r / (p_.sigma * b_), p_.baseline);
  return std::log1p(-std::min(g, 1.0));
}

}  // namespace tpreg

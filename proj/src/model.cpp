#include "tpreg/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tpreg/numerics.hpp"

namespace tpreg {

using num::inf;

CensoredObservation CensoredObservation::exact(double y) {
  if (!std::isfinite(y)) throw std::invalid_argument("exact observation must be finite");
  return {Kind::Exact, y, y};
}

CensoredObservation CensoredObservation::right_censored(double y) {
  if (!std::isfinite(y)) throw std::invalid_argument("right-censored value must be finite");
  return {Kind::Right, y, y};
}

CensoredObservation CensoredObservation::left_censored(double y) {
  if (!std::isfinite(y)) throw std::invalid_argument("left-censored value must be finite");
  return {Kind::Left, y, y};
}

CensoredObservation CensoredObservation::interval(double l, double u) {
  if (!std::isfinite(l) || !std::isfinite(u) || !(l < u))
    throw std::invalid_argument("interval censoring requires finite l < u");
  return {Kind::Interval, l, u};
}

std::size_t Dataset::count(CensoredObservation::Kind k) const {
  std::size_t c = 0;
  for (const auto& o : obs)
    if (o.kind == k) ++c;
  return c;
}

void Dataset::validate() const {
  if (design.rows() < 1 || design.cols() < 1)
    throw std::invalid_argument("dataset: need n >= 1 and p >= 1");
  if (design.rows() != Eigen::Index(obs.size()))
    throw std::invalid_argument("dataset: design rows != response count");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < design.cols())
    throw std::invalid_argument("dataset: design matrix is rank deficient");
}

std::string ModelSpec::name() const {
  std::string n = two_piece ? "tp-" : "";
  switch (baseline.tag) {
    case Baseline::Normal: n += "normal"; break;
    case Baseline::Laplace: n += "laplace"; break;
    case Baseline::Logistic: n += "logistic"; break;
    case Baseline::StudentT: n += "student-t"; break;
  }
  return n;
}

void ModelSpec::validate() const {
  if (!(q >= 0.0)) throw std::invalid_argument("model spec: q must be >= 0");
  if (!(gamma_a0 > 0.0) || !(gamma_b0 > 0.0))
    throw std::invalid_argument("model spec: gamma prior needs a0, b0 > 0");
  if (!(delta_prior_d > 0.0))
    throw std::invalid_argument("model spec: delta prior needs d > 0");
  if (baseline.tag == Baseline::StudentT && !free_shape && !(baseline.df > 0.0))
    throw std::invalid_argument("model spec: fixed student-t df must be positive");
}

void ParameterVector::validate(const ModelSpec& spec) const {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw std::invalid_argument("parameters: sigma must be positive");
  if (spec.has_gamma()) {
    if (!gamma || !skew_in_domain(*gamma, spec.parameterisation))
      throw std::invalid_argument("parameters: gamma missing or outside domain");
  }
  if (spec.has_delta()) {
    if (!delta || !(*delta > 0.0))
      throw std::invalid_argument("parameters: delta missing or non-positive");
  }
}

TwoPieceParams ParameterVector::error_params(const ModelSpec& spec) const {
  TwoPieceParams p;
  p.mu = 0.0;
  p.sigma = sigma;
  p.gamma = spec.has_gamma() ? *gamma : skew_symmetry_point(spec.parameterisation);
  p.parameterisation = spec.parameterisation;
  p.baseline = spec.baseline;
  if (spec.has_delta()) p.baseline.df = *delta;
  return p;
}

std::vector<std::string> parameter_names(const ModelSpec& spec, Eigen::Index p,
                                         const std::vector<std::string>& covariates) {
  std::vector<std::string> names;
  for (Eigen::Index j = 0; j < p; ++j) {
    if (Eigen::Index(covariates.size()) == p) names.push_back(covariates[j]);
    else names.push_back("beta" + std::to_string(j + 1));
  }
  names.push_back("sigma");
  if (spec.has_gamma()) names.push_back("gamma");
  if (spec.has_delta()) names.push_back("delta");
  return names;
}

double loglikelihood(const ParameterVector& theta, const Dataset& data,
                     const ModelSpec& spec) {
  theta.validate(spec);
  if (theta.beta.size() != data.p())
    throw std::invalid_argument("loglikelihood: beta dimension != design columns");
  const TwoPieceDist dist(theta.error_params(spec));
  const Eigen::VectorXd lin = data.design * theta.beta;
  double ll = 0.0;
  for (Eigen::Index j = 0; j < data.n(); ++j) {
    const auto& o = data.obs[j];
    switch (o.kind) {
      case CensoredObservation::Kind::Exact:
        ll += dist.logpdf(o.lo - lin[j]);
        break;
      case CensoredObservation::Kind::Right:
        ll += dist.logsf(o.lo - lin[j]);
        break;
      case CensoredObservation::Kind::Left: {
        const double g = dist.cdf(o.lo - lin[j]);
        ll += (g > 0.0) ? std::log(g) : -inf;
        break;
      }
      case CensoredObservation::Kind::Interval: {
        const double pr = dist.cdf(o.hi - lin[j]) - dist.cdf(o.lo - lin[j]);
        ll += (pr > 0.0) ? std::log(pr) : -inf;
        break;
      }
    }
    if (ll == -inf) return -inf;
  }
  return ll;
}

double gamma_logprior(double gamma, double a0, double b0, SkewParameterisation p) {
  if (!skew_in_domain(gamma, p))
    throw std::invalid_argument("gamma_logprior: gamma outside domain");
  if (!(a0 > 0.0) || !(b0 > 0.0))
    throw std::invalid_argument("gamma_logprior: a0, b0 must be positive");
  if (p == SkewParameterisation::EpsilonSkew) {
    // pi(gamma) = (1-gamma)^{a0-1} (1+gamma)^{b0-1} / (2^{a0+b0-1} B(a0,b0))
    return (a0 - 1.0) * std::log1p(-gamma) + (b0 - 1.0) * std::log1p(gamma) -
           (a0 + b0 - 1.0) * std::log(2.0) - num::lbeta(a0, b0);
  }
  // pi(gamma) = 2 gamma^{2 a0 - 1} (1 + gamma^2)^{-(a0+b0)} / B(a0,b0)
  return std::log(2.0) + (2.0 * a0 - 1.0) * std::log(gamma) -
         (a0 + b0) * std::log1p(gamma * gamma) - num::lbeta(a0, b0);
}

double delta_logprior(double delta, double d) {
  if (!(delta > 0.0) || !(d > 0.0))
    throw std::invalid_argument("delta_logprior: delta and d must be positive");
  return std::log(2.0 * d) + std::log(delta) - 3.0 * std::log(delta + d);
}

double logposterior(const ParameterVector& theta, const Dataset& data,
                    const ModelSpec& spec) {
  spec.validate();
  const double ll = loglikelihood(theta, data, spec);
  if (ll == -inf) return -inf;
  double lp = ll - spec.q * std::log(theta.sigma);
  if (spec.has_gamma())
    lp += gamma_logprior(*theta.gamma, spec.gamma_a0, spec.gamma_b0, spec.parameterisation);
  if (spec.has_delta()) lp += delta_logprior(*theta.delta, spec.delta_prior_d);
  return lp;
}

Eigen::Index parameter_dim(const ModelSpec& spec, Eigen::Index p) {
  return p + 1 + (spec.has_gamma() ? 1 : 0) + (spec.has_delta() ? 1 : 0);
}

Eigen::VectorXd to_unconstrained(const ParameterVector& theta, const ModelSpec& spec) {
  theta.validate(spec);
  const Eigen::Index p = theta.beta.size();
  Eigen::VectorXd v(parameter_dim(spec, p));
  v.head(p) = theta.beta;
  Eigen::Index k = p;
  v[k++] = std::log(theta.sigma);
  if (spec.has_gamma())
    v[k++] = (spec.parameterisation == SkewParameterisation::EpsilonSkew)
                 ? std::atanh(*theta.gamma)
                 : std::log(*theta.gamma);
  if (spec.has_delta()) v[k++] = std::log(*theta.delta);
  return v;
}

FromUnconstrained from_unconstrained(const Eigen::VectorXd& v, const ModelSpec& spec,
                                     Eigen::Index p) {
  if (v.size() != parameter_dim(spec, p))
    throw std::invalid_argument("from_unconstrained: dimension mismatch");
  FromUnconstrained out;
  out.theta.beta = v.head(p);
  Eigen::Index k = p;
  const double lsig = v[k++];
  out.theta.sigma = std::exp(lsig);
  out.log_jacobian = lsig;  // d sigma / d v
  if (spec.has_gamma()) {
    const double w = v[k++];
    if (spec.parameterisation == SkewParameterisation::EpsilonSkew) {
      // clamp into the open interval; tanh saturates to +/-1 in doubles
      const double g = std::clamp(std::tanh(w), -1.0 + 1e-15, 1.0 - 1e-15);
      out.theta.gamma = g;
      out.log_jacobian += std::log1p(-g * g);  // d gamma / d w = 1 - tanh^2
    } else {
      out.theta.gamma = std::exp(w);
      out.log_jacobian += w;
    }
  }
  if (spec.has_delta()) {
    const double w = v[k++];
    out.theta.delta = std::exp(w);
    out.log_jacobian += w;
  }
  return out;
}

}  // namespace tpreg

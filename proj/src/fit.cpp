#include "tpreg/fit.hpp"

#include <cmath>
#include <stdexcept>

#include "tpreg/numerics.hpp"

namespace tpreg {

LogDensity posterior_target(const Dataset& data, const ModelSpec& spec) {
  const Eigen::Index p = data.p();
  return [&data, spec, p](const Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i)
      if (!std::isfinite(v[i])) return -num::inf;
    const auto [theta, logjac] = from_unconstrained(v, spec, p);
    if (!std::isfinite(theta.sigma) || (theta.delta && !std::isfinite(*theta.delta)))
      return -num::inf;
    try {
      const double lp = logposterior(theta, data, spec);
      return std::isfinite(lp) ? lp + logjac : -num::inf;
    } catch (const std::invalid_argument&) {
      return -num::inf;
    }
  };
}

ParameterVector default_start(const Dataset& data, const ModelSpec& spec) {
  ParameterVector start;
  Eigen::VectorXd y(data.n());
  for (Eigen::Index i = 0; i < data.n(); ++i) y[i] = data.obs[i].value();
  start.beta = data.design.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd resid = y - data.design * start.beta;
  start.sigma = std::max(1e-3, std::sqrt(resid.squaredNorm() / double(data.n())));
  if (spec.has_gamma()) start.gamma = skew_symmetry_point(spec.parameterisation);
  if (spec.has_delta()) start.delta = 5.0;
  return start;
}

ParameterVector theta_from_draw(const Chain& chain, Eigen::Index row,
                                const ModelSpec& spec, Eigen::Index p) {
  ParameterVector th;
  th.beta = chain.draws.row(row).head(p).transpose();
  Eigen::Index k = p;
  th.sigma = chain.draws(row, k++);
  if (spec.has_gamma()) th.gamma = chain.draws(row, k++);
  if (spec.has_delta()) th.delta = chain.draws(row, k++);
  return th;
}

Chain fit_posterior(const Dataset& data, const ModelSpec& spec,
                    const PosteriorFitConfig& config) {
  data.validate();
  spec.validate();
  const Eigen::Index p = data.p();

  ChainConfig cfg;
  cfg.n_keep = config.n_keep;
  cfg.burn_in = config.burn_in;
  cfg.thin = config.thin;
  cfg.seed = config.seed;
  cfg.algorithm = config.algorithm;
  cfg.init1 = to_unconstrained(default_start(data, spec), spec);
  if (config.algorithm == SamplerAlgorithm::TWalk) {
    cfg.init2 = cfg.init1;
    for (Eigen::Index i = 0; i < cfg.init2.size(); ++i)
      cfg.init2[i] += (cfg.init1[i] != 0.0) ? 0.1 * std::fabs(cfg.init1[i]) : 0.1;
  }

  const LogDensity target = posterior_target(data, spec);
  Chain chain = run_chain(target, cfg);

  // back-transform to the constrained scale; report log pi(theta | data)
  for (Eigen::Index m = 0; m < chain.size(); ++m) {
    const Eigen::VectorXd v = chain.draws.row(m).transpose();
    const auto [theta, logjac] = from_unconstrained(v, spec, p);
    Eigen::Index k = 0;
    for (; k < p; ++k) chain.draws(m, k) = theta.beta[k];
    chain.draws(m, k++) = theta.sigma;
    if (spec.has_gamma()) chain.draws(m, k++) = *theta.gamma;
    if (spec.has_delta()) chain.draws(m, k++) = *theta.delta;
    chain.logpost[m] -= logjac;
  }
  chain.parameter_names = parameter_names(spec, p, data.column_names);
  return chain;
}

}  // namespace tpreg

#include "tpreg/prediction.hpp"

#include <cmath>
#include <stdexcept>

namespace tpreg {

namespace {

ParameterVector theta_from_row(const Chain& chain, Eigen::Index m, const ModelSpec& spec,
                               Eigen::Index p) {
  ParameterVector th;
  th.beta = chain.draws.row(m).head(p).transpose();
  Eigen::Index k = p;
  th.sigma = chain.draws(m, k++);
  if (spec.has_gamma()) th.gamma = chain.draws(m, k++);
  if (spec.has_delta()) th.delta = chain.draws(m, k++);
  return th;
}

}  // namespace

Chain recentre(const Chain& chain, const ModelSpec& spec, Eigen::Index p,
               CentringRule rule) {
  if (p < 1) throw std::invalid_argument("recentre: model must have an intercept column");
  if (rule == CentringRule::Mode) return chain;
  Chain out = chain;
  for (Eigen::Index m = 0; m < chain.size(); ++m) {
    const ParameterVector th = theta_from_row(chain, m, spec, p);
    out.draws(m, 0) += tp_median(th.error_params(spec));
  }
  return out;
}

double predictive_cdf(double t, const Eigen::VectorXd& x, const Chain& chain,
                      const ModelSpec& spec, CentringRule centring) {
  if (!(t > 0.0)) return 0.0;
  if (chain.size() == 0) throw std::invalid_argument("predictive_cdf: empty chain");
  const Eigen::Index p = x.size();
  const double logt = std::log(t);
  double acc = 0.0;
  for (Eigen::Index m = 0; m < chain.size(); ++m) {
    ParameterVector th = theta_from_row(chain, m, spec, p);
    const TwoPieceParams err = th.error_params(spec);
    double shift = 0.0;
    if (centring == CentringRule::Median)
      shift = tp_median(err);  // undo the intercept adjustment applied by recentre
    const double lin = x.dot(th.beta) - shift;
    acc += TwoPieceDist(err).cdf(logt - lin);
  }
  return acc / double(chain.size());
}

double residual_life_survival(double t, double censoring_time, const Eigen::VectorXd& x,
                              const Chain& chain, const ModelSpec& spec,
                              CentringRule centring) {
  if (!(censoring_time > 0.0))
    throw std::invalid_argument("residual_life_survival: censoring time must be positive");
  if (!(t >= censoring_time))
    throw std::invalid_argument("residual_life_survival: need t >= censoring time");
  const double base = predictive_cdf(censoring_time, x, chain, spec, centring);
  if (base >= 1.0)
    throw std::runtime_error(
        "residual_life_survival: predictive survival already exhausted at T_j");
  const double at_t = predictive_cdf(t, x, chain, spec, centring);
  return (1.0 - at_t) / (1.0 - base);
}

double residual_life_quantile(double p, double censoring_time, const Eigen::VectorXd& x,
                              const Chain& chain, const ModelSpec& spec,
                              CentringRule centring) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("residual_life_quantile: p outside (0,1)");
  const double base = predictive_cdf(censoring_time, x, chain, spec, centring);
  if (base >= 1.0)
    throw std::runtime_error(
        "residual_life_quantile: predictive survival already exhausted at T_j");
  const double target_sr = 1.0 - p;  // solve S_R(t) = 1 - p

  auto sr = [&](double t) {
    return (1.0 - predictive_cdf(t, x, chain, spec, centring)) / (1.0 - base);
  };

  // geometric bracket expansion from T_j
  double lo = censoring_time, hi = censoring_time;
  const double cap = 1e6 * censoring_time;
  double step = 0.25 * censoring_time;
  while (sr(hi) > target_sr) {
    lo = hi;
    hi += step;
    step *= 2.0;
    if (hi > cap)
      throw std::runtime_error(
          "residual_life_quantile: bracket exceeds 1e6 * censoring time; "
          "predictive mass shortfall");
  }
  // bisection to relative tolerance
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (sr(mid) > target_sr) lo = mid; else hi = mid;
    if ((hi - lo) <= 1e-8 * hi) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace tpreg

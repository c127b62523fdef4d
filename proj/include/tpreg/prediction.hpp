#pragma once

#include "tpreg/model.hpp"
#include "tpreg/sampler.hpp"

namespace tpreg {

// Where the AFT model is centred when reporting intercepts. Mode is the raw
// parameterisation (errors have mode 0); Median shifts the intercept by the
// per-draw error median.
enum class CentringRule { Mode, Median };

// Per-draw intercept shift beta_1 += median(error); Mode is the identity.
// Requires the first design column to be an intercept (column of ones).
Chain recentre(const Chain& chain, const ModelSpec& spec, Eigen::Index p,
               CentringRule rule);

// Posterior predictive CDF of the survival time at t for covariates x:
// Monte Carlo average over draws of the per-draw closed-form error CDF.
// `centring` must say how the chain's intercepts are centred so the error
// location shift cancels exactly.
double predictive_cdf(double t, const Eigen::VectorXd& x, const Chain& chain,
                      const ModelSpec& spec, CentringRule centring = CentringRule::Mode);

// S_R(t) = P(T > t | T > T_j) under the posterior predictive; equals 1 at
// t = T_j and decreases to 0.
double residual_life_survival(double t, double censoring_time, const Eigen::VectorXd& x,
                              const Chain& chain, const ModelSpec& spec,
                              CentringRule centring = CentringRule::Mode);

// Inverse of the residual-life CDF: the t > T_j with P(T <= t | T > T_j) = p.
double residual_life_quantile(double p, double censoring_time, const Eigen::VectorXd& x,
                              const Chain& chain, const ModelSpec& spec,
                              CentringRule centring = CentringRule::Mode);

}  // namespace tpreg

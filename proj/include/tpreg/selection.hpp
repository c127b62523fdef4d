#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tpreg/model.hpp"
#include "tpreg/sampler.hpp"

namespace tpreg {

struct MleResult {
  ParameterVector theta;
  double max_loglik = 0.0;
  bool converged = false;
  std::size_t n_eval = 0;
};

// Nelder-Mead maximization of the likelihood on the unconstrained scale.
MleResult mle_fit(const Dataset& data, const ModelSpec& spec,
                  const ParameterVector& start);

double bic(const Dataset& data, const ModelSpec& spec, const MleResult& mle);

struct LpmlResult {
  double lpml = 0.0;
  std::vector<Eigen::Index> zero_cpo_rows;  // observations whose CPO underflowed
};

// log pseudo-marginal likelihood: sum of log CPO_i, CPO via the harmonic-mean
// identity over posterior draws, evaluated in log space.
LpmlResult lpml(const Chain& chain, const Dataset& data, const ModelSpec& spec);

// per-observation log likelihood contribution (density for exact values,
// probability for censored ones); shared by lpml and the CPO tests
double obs_logdensity(const ParameterVector& theta, const Dataset& data,
                      const ModelSpec& spec, Eigen::Index row);

struct SavageDickeyOptions {
  double bandwidth_factor = 0.9;  // Silverman constant
  std::optional<double> null_value;  // default: the parameterisation's symmetry point
};

// BF_01 for H0: gamma at the symmetry point, as the posterior/prior density
// ratio at the null. Posterior density from a boundary-reflected Gaussian KDE.
double savage_dickey_bf(const Chain& chain, const ModelSpec& spec,
                        const SavageDickeyOptions& opt = {});

struct LogMarginalResult {
  double log_marginal = 0.0;  // up to the constant shared by all models with
                              // the same improper (beta, sigma) prior
  double mc_se = 0.0;
  double weight_ess = 0.0;
  bool reliable = true;
};

// Importance-sampling marginal likelihood with a multivariate-t proposal
// (df 5, moments fitted to the unconstrained-scale chain, covariance doubled).
LogMarginalResult log_marginal_is(const Chain& chain, const Dataset& data,
                                  const ModelSpec& spec, std::size_t n_is,
                                  std::uint64_t seed);

struct ComparisonRow {
  std::string model_name;
  double bic = 0.0;
  double lpml = 0.0;
  double log_marginal = 0.0;
  double bf_vs_reference = 1.0;
  std::vector<ParameterSummary> posterior;
};

}  // namespace tpreg

#pragma once

#include "tpreg/model.hpp"
#include "tpreg/sampler.hpp"

namespace tpreg {

struct PosteriorFitConfig {
  std::size_t n_keep = 10000;
  std::size_t burn_in = 50000;
  std::size_t thin = 25;
  std::uint64_t seed = 1;
  SamplerAlgorithm algorithm = SamplerAlgorithm::TWalk;
};

// log posterior on the unconstrained scale (jacobian folded in), returning
// -inf instead of throwing on invalid parameter values
LogDensity posterior_target(const Dataset& data, const ModelSpec& spec);

// Deterministic starting point: least squares for beta, residual standard
// deviation for sigma, gamma at the symmetry point, delta = 5.
ParameterVector default_start(const Dataset& data, const ModelSpec& spec);

// Runs one MCMC chain on the posterior and returns it on the constrained
// scale with named parameters; Chain::logpost holds log pi(theta | data)
// without the transform jacobian.
Chain fit_posterior(const Dataset& data, const ModelSpec& spec,
                    const PosteriorFitConfig& config);

ParameterVector theta_from_draw(const Chain& chain, Eigen::Index row,
                                const ModelSpec& spec, Eigen::Index p);

}  // namespace tpreg

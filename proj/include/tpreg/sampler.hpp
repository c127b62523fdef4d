#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace tpreg {

using LogDensity = std::function<double(const Eigen::VectorXd&)>;

enum class SamplerAlgorithm { TWalk, AdaptiveRWM };

struct ChainConfig {
  std::size_t n_keep = 2000;
  std::size_t burn_in = 5000;
  std::size_t thin = 25;
  std::uint64_t seed = 1;
  SamplerAlgorithm algorithm = SamplerAlgorithm::TWalk;
  // TWalk needs two starting points differing in every coordinate;
  // AdaptiveRWM uses init1 only.
  Eigen::VectorXd init1, init2;

  void validate(Eigen::Index dim) const;
};

struct Chain {
  Eigen::MatrixXd draws;          // n_keep x dim (whatever scale the target uses)
  Eigen::VectorXd logpost;        // target value per kept draw
  double acceptance_rate = 0.0;
  std::uint64_t seed = 0;
  std::vector<std::string> parameter_names;

  Eigen::Index size() const { return draws.rows(); }
  Eigen::Index dim() const { return draws.cols(); }
};

// Runs the configured MCMC over `target` (a log-density up to a constant).
// Kept draws are taken every `thin` iterations after `burn_in`. Deterministic
// given the seed. Throws std::runtime_error if the target is not finite at
// the starting point(s).
Chain run_chain(const LogDensity& target, const ChainConfig& config);

struct ParameterSummary {
  std::string name;
  double median = 0.0;
  double map = 0.0;
  double lower95 = 0.0;
  double upper95 = 0.0;
};

// type-7 sample quantile (the R default)
double sample_quantile(std::vector<double> values, double p);

std::vector<ParameterSummary> summarize(const Chain& chain);

struct DiagnosticsResult {
  std::vector<double> split_rhat;  // empty when only one chain is given
  std::vector<double> ess;         // summed across chains
};

DiagnosticsResult diagnostics(const std::vector<Chain>& chains);

}  // namespace tpreg

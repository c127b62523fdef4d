#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "tpreg/distributions.hpp"

namespace tpreg {

// One response with its censoring kind, already on the model scale
// (log-time for AFT fits).
struct CensoredObservation {
  enum class Kind { Exact, Right, Left, Interval };

  Kind kind = Kind::Exact;
  double lo = 0.0;  // Exact/Right/Left value, or interval lower endpoint
  double hi = 0.0;  // interval upper endpoint; unused otherwise

  static CensoredObservation exact(double y);
  static CensoredObservation right_censored(double y);
  static CensoredObservation left_censored(double y);
  static CensoredObservation interval(double l, double u);

  double value() const { return lo; }
};

struct Dataset {
  Eigen::MatrixXd design;                  // n x p, full column rank
  std::vector<CensoredObservation> obs;    // size n
  std::vector<std::string> column_names;   // size p (optional labels)

  Eigen::Index n() const { return design.rows(); }
  Eigen::Index p() const { return design.cols(); }

  std::size_t count(CensoredObservation::Kind k) const;

  // throws std::invalid_argument on dimension mismatch, empty data, or a
  // rank-deficient design (pivoted QR, relative tolerance 1e-10)
  void validate() const;
};

// Model choice plus the hyperparameters of the prior
//   pi(beta, sigma, gamma, delta) ∝ pi(gamma) pi(delta) / sigma^q.
struct ModelSpec {
  BaselineKind baseline{};
  bool two_piece = true;
  SkewParameterisation parameterisation = SkewParameterisation::EpsilonSkew;
  double q = 1.0;
  double gamma_a0 = 0.5;
  double gamma_b0 = 0.5;
  double delta_prior_d = 10.0;
  bool free_shape = true;  // StudentT only: treat df as a parameter

  bool has_gamma() const { return two_piece; }
  bool has_delta() const { return baseline.tag == Baseline::StudentT && free_shape; }
  std::string name() const;
  void validate() const;
};

struct ParameterVector {
  Eigen::VectorXd beta;
  double sigma = 1.0;
  std::optional<double> gamma;  // present iff spec.has_gamma()
  std::optional<double> delta;  // present iff spec.has_delta()

  void validate(const ModelSpec& spec) const;
  // error distribution implied by this parameter vector (location 0)
  TwoPieceParams error_params(const ModelSpec& spec) const;
};

std::vector<std::string> parameter_names(const ModelSpec& spec, Eigen::Index p,
                                         const std::vector<std::string>& covariates = {});

double loglikelihood(const ParameterVector& theta, const Dataset& data,
                     const ModelSpec& spec);

// Prior on gamma induced by placing Beta(a0, b0) on the mass split
// b/(a+b), normalized over the parameterisation's domain.
double gamma_logprior(double gamma, double a0, double b0, SkewParameterisation p);

// Approximate Jeffreys prior for the Student-t degrees of freedom:
// pi(delta) = 2 d delta / (delta + d)^3, mode at d/2.
double delta_logprior(double delta, double d);

double logposterior(const ParameterVector& theta, const Dataset& data,
                    const ModelSpec& spec);

// --- unconstrained reparameterisation for the sampler ---
// sigma -> log sigma, gamma -> atanh(gamma) (epsilon-skew) or log(gamma)
// (inverse-scale), delta -> log delta; beta unchanged.

Eigen::Index parameter_dim(const ModelSpec& spec, Eigen::Index p);

Eigen::VectorXd to_unconstrained(const ParameterVector& theta, const ModelSpec& spec);

struct FromUnconstrained {
  ParameterVector theta;
  double log_jacobian = 0.0;
};
FromUnconstrained from_unconstrained(const Eigen::VectorXd& v, const ModelSpec& spec,
                                     Eigen::Index p);

}  // namespace tpreg

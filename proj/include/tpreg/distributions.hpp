#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tpreg/rng.hpp"

namespace tpreg {

// Symmetric baseline densities admissible as scale mixtures of normals.
// Closed-form pdf/cdf/quantile are used throughout; the mixture
// representation never enters the likelihood path.
enum class Baseline { Normal, Laplace, Logistic, StudentT };

struct BaselineKind {
  Baseline tag = Baseline::Normal;
  double df = 0.0;  // StudentT degrees of freedom; ignored otherwise

  static BaselineKind normal() { return {Baseline::Normal, 0.0}; }
  static BaselineKind laplace() { return {Baseline::Laplace, 0.0}; }
  static BaselineKind logistic() { return {Baseline::Logistic, 0.0}; }
  static BaselineKind student_t(double df);

  bool has_shape() const { return tag == Baseline::StudentT; }
};

std::string to_string(const BaselineKind& b);
BaselineKind baseline_from_string(const std::string& name, double df = 5.0);

// Skewness parameterisations {a(gamma), b(gamma)}:
//   EpsilonSkew:  a = 1 - gamma, b = 1 + gamma,  gamma in (-1, 1)
//   InverseScale: a = gamma,     b = 1 / gamma,  gamma > 0
enum class SkewParameterisation { EpsilonSkew, InverseScale };

std::string to_string(SkewParameterisation p);

// symmetry point of the parameterisation (a == b there)
double skew_symmetry_point(SkewParameterisation p);
bool skew_in_domain(double gamma, SkewParameterisation p);

struct AB {
  double a, b;
};
AB ab(double gamma, SkewParameterisation p);

// Location/scale/skewness/shape bundle of the two-piece family.
struct TwoPieceParams {
  double mu = 0.0;
  double sigma = 1.0;
  double gamma = 0.0;
  BaselineKind baseline{};
  SkewParameterisation parameterisation = SkewParameterisation::EpsilonSkew;

  void validate() const;  // throws std::invalid_argument on violation
};

// baseline standard forms (location 0, scale 1)
double baseline_logpdf(double z, const BaselineKind& b);
double baseline_cdf(double z, const BaselineKind& b);
double baseline_logsf(double z, const BaselineKind& b);
double baseline_quantile(double p, const BaselineKind& b);

// Two-piece density built from two rescaled halves of the baseline joined at
// the mode mu: scale sigma*b left of mu, sigma*a right of mu.
double tp_logpdf(double z, const TwoPieceParams& params);
double tp_cdf(double z, const TwoPieceParams& params);
// log P(Z > z); evaluated through the complementary baseline CDF on the right
// branch so right-censored likelihood terms do not cancel catastrophically
double tp_logsf(double z, const TwoPieceParams& params);
double tp_quantile(double p, const TwoPieceParams& params);
double tp_median(const TwoPieceParams& params);

std::vector<double> tp_sample(std::size_t n, const TwoPieceParams& params,
                              std::uint64_t rng_seed);
double tp_sample_one(const TwoPieceParams& params, Rng& rng);

// Precomputed constants for repeated evaluation at fixed parameters (the
// likelihood hot path). Mirrors the free functions exactly.
class TwoPieceDist {
 public:
  explicit TwoPieceDist(const TwoPieceParams& params);

  double logpdf(double z) const;
  double cdf(double z) const;
  double logsf(double z) const;

 private:
  TwoPieceParams p_;
  double a_, b_;
  double log_norm_;      // log(2 / (sigma (a+b)))
  double mass_left_;     // b / (a+b)
  double t_lognorm_ = 0; // Student-t normalizing constant at df
};

}  // namespace tpreg

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

// Scalar special functions and small numerical utilities shared across the
// library. Everything here is deterministic and allocation-free unless noted.
namespace tpreg::num {

inline constexpr double inf = std::numeric_limits<double>::infinity();
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double log_2pi = 1.8378770664093454836;

// --- standard normal ---

double norm_logpdf(double z);
double norm_cdf(double z);
double norm_logcdf(double z);
// Inverse standard normal CDF (Wichura's AS241, double precision).
double norm_quantile(double p);

// --- regularized incomplete beta, for Student-t tails ---

double lbeta(double a, double b);
// I_x(a, b) via continued fraction; accurate to ~1e-14 for a,b in the
// ranges used here (a = df/2, b = 1/2).
double betai(double a, double b, double x);
// log I_x(a, b); stays finite where betai underflows.
double betai_log(double a, double b, double x);

// --- Student-t with real df > 0 ---

double student_t_logpdf(double z, double df);
double student_t_cdf(double z, double df);
double student_t_logsf(double z, double df);
double student_t_quantile(double p, double df);

// --- misc ---

double log_sum_exp(std::span<const double> v);

inline double log1mexp(double log_p) {
  // log(1 - exp(log_p)) for log_p < 0
  if (log_p > -0.6931471805599453)
    return std::log(-std::expm1(log_p));
  return std::log1p(-std::exp(log_p));
}

// Adaptive Simpson quadrature on [a, b]. `tol` is an absolute tolerance on
// the integral value; recursion depth is capped.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-10, int max_depth = 50);

// --- Nelder-Mead minimizer ---

struct NelderMeadResult {
  std::vector<double> x;
  double fx = inf;
  std::size_t n_eval = 0;
  bool converged = false;
};

struct NelderMeadOptions {
  double diameter_tol = 1e-8;   // stop when simplex diameter falls below this
  std::size_t max_iter = 100000;
  double initial_step = 0.1;
};

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::span<const double> start,
                             const NelderMeadOptions& opt = {});

}  // namespace tpreg::num

#include "tpreg/numerics.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>

namespace tpreg::num {

double norm_logpdf(double z) { return -0.5 * z * z - 0.5 * log_2pi; }

double norm_cdf(double z) { return 0.5 * std::erfc(-z * 0.7071067811865475244); }

double norm_logcdf(double z) {
  if (z > -10.0) return std::log(norm_cdf(z));
  // asymptotic expansion of the lower tail: Phi(z) ~ phi(z)/|z| * (1 - 1/z^2 + 3/z^4 - ...)
  const double z2 = z * z;
  const double series = 1.0 - 1.0 / z2 + 3.0 / (z2 * z2) - 15.0 / (z2 * z2 * z2);
  return norm_logpdf(z) - std::log(-z) + std::log(series);
}

double norm_quantile(double p) {
  // Wichura (1988), algorithm AS241 (PPND16).
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -inf;
    if (p == 1.0) return inf;
    throw std::invalid_argument("norm_quantile: p outside [0,1]");
  }
  const double q = p - 0.5;
  double r;
  if (std::fabs(q) <= 0.425) {
    r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                 6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
               1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
             1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
           (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                 3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
               5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
             4.2313330701600911252e+1) * r + 1.0);
  }
  r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
              3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
            4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
              6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
            2.05319162663775882187e+0) * r + 1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
              2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
            5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
              1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
            5.99832206555887937690e-1) * r + 1.0);
  }
  return (q < 0.0) ? -val : val;
}

double lbeta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

namespace {

// Continued fraction for the incomplete beta (Lentz's method).
double betacf(double a, double b, double x) {
  constexpr int max_it = 300;
  constexpr double eps = 3e-16;
  constexpr double fpmin = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < fpmin) d = fpmin;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= max_it; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < fpmin) d = fpmin;
    c = 1.0 + aa / c;
    if (std::fabs(c) < fpmin) c = fpmin;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

double betai_log_front(double a, double b, double x) {
  return a * std::log(x) + b * std::log1p(-x) - lbeta(a, b);
}

}  // namespace

double betai_log(double a, double b, double x) {
  if (x <= 0.0) return -inf;
  if (x >= 1.0) return 0.0;
  if (x < (a + 1.0) / (a + b + 2.0))
    return betai_log_front(a, b, x) + std::log(betacf(a, b, x) / a);
  // symmetric branch: I_x(a,b) = 1 - I_{1-x}(b,a)
  const double lq = betai_log_front(b, a, 1.0 - x) + std::log(betacf(b, a, 1.0 - x) / b);
  return log1mexp(lq);
}

double betai(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return std::exp(betai_log(a, b, x));
}

double student_t_logpdf(double z, double df) {
  return std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) -
         0.5 * std::log(df * pi) - 0.5 * (df + 1.0) * std::log1p(z * z / df);
}

double student_t_logsf(double z, double df) {
  const double x = df / (df + z * z);
  if (z > 0.0) return std::log(0.5) + betai_log(0.5 * df, 0.5, x);
  return log1mexp(std::log(0.5) + betai_log(0.5 * df, 0.5, x));
}

double student_t_cdf(double z, double df) {
  const double x = df / (df + z * z);
  const double tail = 0.5 * betai(0.5 * df, 0.5, x);
  return (z > 0.0) ? 1.0 - tail : tail;
}

double student_t_quantile(double p, double df) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("student_t_quantile: p outside (0,1)");
  if (p == 0.5) return 0.0;
  if (p < 0.5) return -student_t_quantile(1.0 - p, df);
  // initial guess from the normal quantile with a df-dependent correction,
  // then safeguarded Newton on the CDF
  const double z = norm_quantile(p);
  double x = z * (1.0 + (z * z + 1.0) / (4.0 * df));
  if (df < 3.0) {
    // heavy tails: invert the survival bound P(T>x) ~ C x^{-df} for a bracket
    const double tail = 1.0 - p;
    const double c = std::exp(std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df) -
                              0.5 * std::log(df * pi)) * std::pow(df, 0.5 * (df + 1.0)) / df;
    x = std::max(x, std::pow(c / tail, 1.0 / df) * 0.5);
  }
  double lo = 0.0, hi = inf;
  for (int it = 0; it < 200; ++it) {
    const double err = student_t_cdf(x, df) - p;
    if (err > 0.0) hi = std::min(hi, x); else lo = std::max(lo, x);
    const double step = err / std::exp(student_t_logpdf(x, df));
    double xn = x - step;
    if (!(xn > lo && (hi == inf || xn < hi)))
      xn = (hi == inf) ? std::max(2.0 * x, x + 1.0) : 0.5 * (lo + hi);
    if (std::fabs(xn - x) <= 1e-15 * std::max(1.0, std::fabs(x))) { x = xn; break; }
    x = xn;
  }
  return x;
}

double log_sum_exp(std::span<const double> v) {
  double m = -inf;
  for (double x : v) m = std::max(m, x);
  if (m == -inf) return -inf;
  if (m == inf) return inf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double fa, double b,
             double fb, double m, double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, fa, m, fm, flm);
  const double right = simpson(m, fm, b, fb, frm);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 int max_depth) {
  if (a == b) return 0.0;
  // split at a few interior points so narrow features are not missed
  const int chunks = 8;
  double total = 0.0;
  for (int k = 0; k < chunks; ++k) {
    const double x0 = a + (b - a) * k / chunks;
    const double x1 = a + (b - a) * (k + 1) / chunks;
    const double m = 0.5 * (x0 + x1);
    const double f0 = f(x0), f1 = f(x1), fm = f(m);
    total += adapt(f, x0, f0, x1, f1, m, fm, simpson(x0, f0, x1, f1, fm),
                   tol / chunks, max_depth);
  }
  return total;
}

NelderMeadResult nelder_mead(const std::function<double(std::span<const double>)>& f,
                             std::span<const double> start, const NelderMeadOptions& opt) {
  const std::size_t n = start.size();
  std::vector<std::vector<double>> simplex(n + 1, std::vector<double>(start.begin(), start.end()));
  for (std::size_t i = 0; i < n; ++i)
    simplex[i + 1][i] += (simplex[i + 1][i] != 0.0)
                             ? opt.initial_step * std::fabs(simplex[i + 1][i])
                             : opt.initial_step;
  NelderMeadResult res;
  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i <= n; ++i) { fv[i] = f(simplex[i]); ++res.n_eval; }

  const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);
  for (std::size_t iter = 0; iter < opt.max_iter; ++iter) {
    std::vector<std::size_t> ord(n + 1);
    for (std::size_t i = 0; i <= n; ++i) ord[i] = i;
    std::sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });

    double diam = 0.0;
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        diam = std::max(diam, std::fabs(simplex[ord[i]][j] - simplex[ord[0]][j]));
    if (diam < opt.diameter_tol) {
      res.converged = true;
      res.x = simplex[ord[0]];
      res.fx = fv[ord[0]];
      return res;
    }

    const std::size_t best = ord[0], worst = ord[n], second = ord[n - 1];
    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t j = 0; j < n; ++j) centroid[j] += simplex[i][j] / double(n);
    }
    for (std::size_t j = 0; j < n; ++j) xr[j] = centroid[j] + alpha * (centroid[j] - simplex[worst][j]);
    const double fr = f(xr); ++res.n_eval;
    if (fr < fv[best]) {
      for (std::size_t j = 0; j < n; ++j) xe[j] = centroid[j] + gamma * (xr[j] - centroid[j]);
      const double fe = f(xe); ++res.n_eval;
      if (fe < fr) { simplex[worst] = xe; fv[worst] = fe; }
      else { simplex[worst] = xr; fv[worst] = fr; }
    } else if (fr < fv[second]) {
      simplex[worst] = xr; fv[worst] = fr;
    } else {
      const bool outside = fr < fv[worst];
      const auto& base = outside ? xr : simplex[worst];
      for (std::size_t j = 0; j < n; ++j) xc[j] = centroid[j] + rho * (base[j] - centroid[j]);
      const double fc = f(xc); ++res.n_eval;
      if (fc < (outside ? fr : fv[worst])) {
        simplex[worst] = xc; fv[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= n; ++i) {
          if (i == best) continue;
          for (std::size_t j = 0; j < n; ++j)
            simplex[i][j] = simplex[best][j] + sigma * (simplex[i][j] - simplex[best][j]);
          fv[i] = f(simplex[i]); ++res.n_eval;
        }
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i <= n; ++i)
    if (fv[i] < fv[best]) best = i;
  res.x = simplex[best];
  res.fx = fv[best];
  return res;
}

}  // namespace tpreg::num

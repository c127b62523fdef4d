#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tpreg/distributions.hpp"

using namespace tpreg;

namespace {

TwoPieceParams make(double mu, double sigma, double gamma, BaselineKind base,
                    SkewParameterisation par = SkewParameterisation::EpsilonSkew) {
  TwoPieceParams p;
  p.mu = mu;
  p.sigma = sigma;
  p.gamma = gamma;
  p.baseline = base;
  p.parameterisation = par;
  return p;
}

const BaselineKind kBaselines[] = {BaselineKind::normal(), BaselineKind::laplace(),
                                   BaselineKind::logistic(), BaselineKind::student_t(5.0)};

// gamma grids with matching mass allocation across the two parameterisations
const double kGammaES[] = {-0.75, 0.0, 0.5};
const double kGammaIS[] = {2.6457513110645906, 1.0, 0.5773502691896258};  // sqrt(7), 1, 1/sqrt(3)

}  // namespace

TEST_CASE("ab parameterisation formulas") {
  auto r = ab(0.0, SkewParameterisation::EpsilonSkew);
  CHECK(r.a == 1.0);
  CHECK(r.b == 1.0);
  r = ab(0.5, SkewParameterisation::EpsilonSkew);
  CHECK(r.a == doctest::Approx(0.5));
  CHECK(r.b == doctest::Approx(1.5));
  r = ab(2.0, SkewParameterisation::InverseScale);
  CHECK(r.a == doctest::Approx(2.0));
  CHECK(r.b == doctest::Approx(0.5));

  CHECK_THROWS_AS(ab(1.0, SkewParameterisation::EpsilonSkew), std::invalid_argument);
  CHECK_THROWS_AS(ab(-1.5, SkewParameterisation::EpsilonSkew), std::invalid_argument);
  CHECK_THROWS_AS(ab(0.0, SkewParameterisation::InverseScale), std::invalid_argument);

  // a(gamma) + b(gamma) = 2 identically for epsilon-skew
  for (double g = -0.95; g < 1.0; g += 0.05) {
    const auto v = ab(g, SkewParameterisation::EpsilonSkew);
    CHECK(v.a + v.b == doctest::Approx(2.0).epsilon(1e-15));
  }
}

TEST_CASE("tp_logpdf frozen values") {
  // at the mode the baseline argument is zero and a+b = 2
  CHECK(tp_logpdf(0.0, make(0, 1, 0.5, BaselineKind::normal())) ==
        doctest::Approx(-0.91893853320467274).epsilon(1e-12));
  // gamma = 0 reduces to the baseline
  CHECK(tp_logpdf(1.0, make(0, 1, 0.0, BaselineKind::normal())) ==
        doctest::Approx(-1.4189385332046727).epsilon(1e-12));
  // laplace with b = 1.5: log(1/2) - |z|/(sigma b)
  CHECK(tp_logpdf(-1.0, make(0, 1, 0.5, BaselineKind::laplace())) ==
        doctest::Approx(-1.359813847226612).epsilon(1e-12));

  CHECK_THROWS_AS(tp_logpdf(std::nan(""), make(0, 1, 0, BaselineKind::normal())),
                  std::invalid_argument);
}

TEST_CASE("tp_cdf frozen values and mode mass") {
  // mass below the mode is b/(a+b), exactly
  CHECK(tp_cdf(0.0, make(0, 1, 0.5, BaselineKind::normal())) == 0.75);
  CHECK(tp_cdf(0.0, make(0, 1, 0.0, BaselineKind::logistic())) == 0.5);
  CHECK(tp_cdf(2.0, make(0, 1, 0.25, BaselineKind::logistic())) ==
        doctest::Approx(0.95127312315350195).epsilon(1e-13));

  // quadrature oracle: integral of the density from far left to 2
  const auto params = make(0, 1, 0.25, BaselineKind::logistic());
  const double by_quad = oracle::quad(
      [&](double z) { return std::exp(tp_logpdf(z, params)); }, -60.0, 2.0, 40000);
  CHECK(tp_cdf(2.0, params) == doctest::Approx(by_quad).epsilon(1e-8));
}

TEST_CASE("tp_quantile closed form, frozen values") {
  // the mode is the b/(a+b) quantile
  CHECK(tp_quantile(0.75, make(0, 1, 0.5, BaselineKind::normal())) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(tp_quantile(0.75, make(0, 1, 0.5, BaselineKind::laplace())) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(tp_quantile(0.975, make(0, 1, 0.0, BaselineKind::normal())) ==
        doctest::Approx(1.959963984540054).epsilon(1e-10));
  CHECK_THROWS_AS(tp_quantile(0.0, make(0, 1, 0, BaselineKind::normal())),
                  std::invalid_argument);
  CHECK_THROWS_AS(tp_quantile(1.0, make(0, 1, 0, BaselineKind::normal())),
                  std::invalid_argument);

  // bisection oracle on tp_cdf for a skewed student-t case
  const auto params = make(0, 1, 0.5, BaselineKind::student_t(5.0));
  const double q10 = tp_quantile(0.1, params);
  const double by_bisect = oracle::bisect(
      [&](double z) { return tp_cdf(z, params); }, 0.1, -100.0, 100.0);
  CHECK(q10 == doctest::Approx(by_bisect).epsilon(1e-9));
}

TEST_CASE("tp_median closed form vs oracle") {
  CHECK(tp_median(make(0, 1, 0.0, BaselineKind::normal())) == doctest::Approx(0.0));
  // 1.5 * qnorm(1/3), computed independently
  CHECK(tp_median(make(0, 1, 0.5, BaselineKind::normal())) ==
        doctest::Approx(-0.64609094894318624).epsilon(1e-12));
  const double med = tp_median(make(0, 1, 0.5, BaselineKind::normal()));
  const double by_bisect = oracle::bisect(
      [&](double z) { return tp_cdf(z, make(0, 1, 0.5, BaselineKind::normal())); }, 0.5,
      -50.0, 50.0);
  CHECK(med == doctest::Approx(by_bisect).epsilon(1e-10));
  // reflection: gamma -> -gamma mirrors the median
  CHECK(tp_median(make(0, 1, -0.5, BaselineKind::normal())) ==
        doctest::Approx(-med).epsilon(1e-12));
}

TEST_CASE("normalization across the gamma/baseline grid") {
  for (const auto& base : kBaselines)
    for (double g : kGammaES) {
      const auto params = make(0.3, 1.7, g, base);
      const double mass = oracle::quad_real_line(
          [&](double z) { return std::exp(tp_logpdf(z, params)); }, 12.0, 40000);
      CAPTURE(g);
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
    }
  for (const auto& base : kBaselines)
    for (double g : kGammaIS) {
      const auto params = make(0.0, 0.8, g, base, SkewParameterisation::InverseScale);
      const double mass = oracle::quad_real_line(
          [&](double z) { return std::exp(tp_logpdf(z, params)); }, 12.0, 40000);
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("cdf/pdf consistency by finite differences") {
  for (const auto& base : kBaselines)
    for (double g : kGammaES) {
      const auto params = make(0.0, 1.0, g, base);
      for (double z : {-2.3, -0.7, 0.4, 1.9}) {
        const double deriv = oracle::fdiff(
            [&](double x) { return tp_cdf(x, params); }, z, 1e-5);
        CHECK(deriv == doctest::Approx(std::exp(tp_logpdf(z, params))).epsilon(1e-5));
      }
    }
}

TEST_CASE("quantile roundtrip to 1e-10") {
  for (const auto& base : kBaselines) {
    for (double g : kGammaES) {
      const auto params = make(0.1, 2.0, g, base);
      for (double p = 0.001; p < 1.0; p += 0.0245) {
        const double z = tp_quantile(p, params);
        CHECK(std::fabs(tp_cdf(z, params) - p) < 1e-10);
      }
    }
    for (double g : kGammaIS) {
      const auto params = make(0.0, 1.0, g, base, SkewParameterisation::InverseScale);
      for (double p : {0.001, 0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 0.999}) {
        const double z = tp_quantile(p, params);
        CHECK(std::fabs(tp_cdf(z, params) - p) < 1e-10);
      }
    }
  }
}

TEST_CASE("symmetric reduction at the symmetry point") {
  for (const auto& base : kBaselines) {
    const auto es = make(0.4, 1.3, 0.0, base);
    const auto is = make(0.4, 1.3, 1.0, base, SkewParameterisation::InverseScale);
    for (double z : {-3.0, -1.0, 0.0, 0.4, 2.5}) {
      const double expect = baseline_logpdf((z - 0.4) / 1.3, base) - std::log(1.3);
      CHECK(tp_logpdf(z, es) == doctest::Approx(expect).epsilon(1e-14));
      CHECK(tp_logpdf(z, is) == doctest::Approx(expect).epsilon(1e-14));
    }
  }
}

TEST_CASE("reflection symmetry in gamma (epsilon-skew)") {
  for (const auto& base : kBaselines)
    for (double z : {-2.0, -0.5, 0.3, 1.7})
      CHECK(tp_logpdf(z, make(0, 1, 0.6, base)) ==
            doctest::Approx(tp_logpdf(-z, make(0, 1, -0.6, base))).epsilon(1e-14));
}

TEST_CASE("tail behaviour far out") {
  for (const auto& base : kBaselines) {
    const auto params = make(0, 1, 0.5, base);
    const double left = tp_logpdf(-50.0, params);
    const double right = tp_logpdf(50.0, params);
    CHECK(std::isfinite(left));
    CHECK(std::isfinite(right));
    // left scale is 3x the right scale here, so the left tail carries more
    CHECK(left > right);
  }
}

TEST_CASE("sampling: determinism, mode mass, KS against the cdf") {
  const auto params = make(0, 1, 0.5, BaselineKind::normal());
  const auto s1 = tp_sample(1000, params, 42);
  const auto s2 = tp_sample(1000, params, 42);
  CHECK(s1 == s2);
  const auto s3 = tp_sample(1000, params, 43);
  CHECK(s1 != s3);

  // fraction of draws at or below the mode ~ Binomial(n, 0.75)
  const std::size_t n = 100000;
  const auto big = tp_sample(n, params, 7);
  std::size_t below = 0;
  for (double v : big)
    if (v <= 0.0) ++below;
  const double frac = double(below) / double(n);
  const double se = std::sqrt(0.75 * 0.25 / double(n));
  CHECK(std::fabs(frac - 0.75) < 3.0 * se);

  // KS vs the exact cdf at the 1% level, symmetric normal case
  const auto sym = make(0, 1, 0.0, BaselineKind::normal());
  const auto draws = tp_sample(n, sym, 11);
  const double d = oracle::ks_statistic(
      draws, [&](double z) { return tp_cdf(z, sym); });
  CHECK(d < oracle::ks_critical(n, 0.01));
}

TEST_CASE("logsf agrees with cdf and stays finite in the right tail") {
  for (const auto& base : kBaselines)
    for (double g : kGammaES) {
      const auto params = make(0, 1, g, base);
      // where 1 - cdf still has full double resolution
      for (double z : {-2.0, 0.0, 1.5, 2.0})
        CHECK(tp_logsf(z, params) ==
              doctest::Approx(std::log(1.0 - tp_cdf(z, params))).epsilon(1e-9));
      // further out, check against tail quadrature of the density (range wide
      // enough that even the t(5) tail beyond it is negligible)
      const double tail = oracle::quad(
          [&](double u) { return std::exp(tp_logpdf(u, params)); }, 5.0, 3000.0, 400000);
      CHECK(tp_logsf(5.0, params) == doctest::Approx(std::log(tail)).epsilon(1e-6));
      CHECK(std::isfinite(tp_logsf(60.0, params)));
    }
}

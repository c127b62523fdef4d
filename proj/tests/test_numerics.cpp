#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "tpreg/numerics.hpp"
#include "tpreg/rng.hpp"

using namespace tpreg;

TEST_CASE("normal cdf/quantile roundtrip at machine precision") {
  for (double p : {1e-10, 1e-6, 0.001, 0.025, 0.3, 0.5, 0.7, 0.975, 0.999, 1 - 1e-9}) {
    const double z = num::norm_quantile(p);
    CHECK(num::norm_cdf(z) == doctest::Approx(p).epsilon(1e-12));
  }
  CHECK(num::norm_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-13));
  CHECK(num::norm_quantile(0.5) == 0.0);
}

TEST_CASE("norm_logcdf deep tail matches asymptotics") {
  // continuity across the switch point
  CHECK(num::norm_logcdf(-9.999) == doctest::Approx(num::norm_logcdf(-10.001)).epsilon(1e-3));
  // values stay finite far out
  CHECK(std::isfinite(num::norm_logcdf(-100.0)));
  CHECK(num::norm_logcdf(-40.0) < num::norm_logcdf(-39.0));
}

TEST_CASE("incomplete beta and student-t") {
  // betai(a, b, x) against quadrature of the beta density
  for (double x : {0.1, 0.4, 0.8}) {
    const double a = 2.5, b = 0.5;
    const double by_quad =
        oracle::quad([&](double t) {
          return std::pow(t, a - 1.0) * std::pow(1.0 - t, b - 1.0);
        }, 1e-12, x, 40000) / std::exp(num::lbeta(a, b));
    CHECK(num::betai(a, b, x) == doctest::Approx(by_quad).epsilon(1e-6));
  }

  // t cdf: symmetric, matches quadrature of the density
  for (double df : {1.0, 2.0, 5.0, 30.0}) {
    CHECK(num::student_t_cdf(0.0, df) == doctest::Approx(0.5).epsilon(1e-14));
    for (double z : {-3.0, -0.5, 1.2, 6.0}) {
      const double by_quad = oracle::quad_real_line(
          [&](double u) {
            return u <= z ? std::exp(num::student_t_logpdf(u, df)) : 0.0;
          }, 8.0, 400000);
      CHECK(num::student_t_cdf(z, df) == doctest::Approx(by_quad).epsilon(1e-5));
      CHECK(num::student_t_cdf(z, df) + num::student_t_cdf(-z, df) ==
            doctest::Approx(1.0).epsilon(1e-13));
    }
  }

  // quantile inverts the cdf tightly
  for (double df : {0.7, 2.0, 5.0, 50.0})
    for (double p : {0.001, 0.05, 0.3, 0.5, 0.77, 0.95, 0.9999}) {
      const double z = num::student_t_quantile(p, df);
      CHECK(num::student_t_cdf(z, df) == doctest::Approx(p).epsilon(1e-11));
    }
  // known value: t_{0.975, df=1} = tan(pi * 0.475) = 12.7062047...
  CHECK(num::student_t_quantile(0.975, 1.0) == doctest::Approx(12.706204736432).epsilon(1e-9));
}

TEST_CASE("log_sum_exp") {
  std::vector<double> v{-1000.0, -1000.0};
  CHECK(num::log_sum_exp(v) == doctest::Approx(-1000.0 + std::log(2.0)));
  std::vector<double> w{0.0, std::log(2.0), std::log(3.0)};
  CHECK(num::log_sum_exp(w) == doctest::Approx(std::log(6.0)).epsilon(1e-14));
  std::vector<double> inf_case{-num::inf, -num::inf};
  CHECK(num::log_sum_exp(inf_case) == -num::inf);
}

TEST_CASE("adaptive quadrature") {
  const double g = num::integrate([](double x) { return std::exp(-x * x / 2.0); },
                                  -40.0, 40.0, 1e-12);
  CHECK(g == doctest::Approx(std::sqrt(2.0 * num::pi)).epsilon(1e-10));
  const double poly = num::integrate([](double x) { return 3.0 * x * x; }, 0.0, 2.0);
  CHECK(poly == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("nelder-mead on a quartic bowl") {
  auto f = [](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = x[i] - double(i + 1);
      s += d * d + 0.1 * d * d * d * d;
    }
    return s;
  };
  std::vector<double> x0{0.0, 0.0, 0.0};
  const auto res = num::nelder_mead(f, x0);
  CHECK(res.converged);
  CHECK(res.x[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(res.x[1] == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(res.x[2] == doctest::Approx(3.0).epsilon(1e-6));
}

TEST_CASE("rng determinism and normal moments") {
  Rng a(123), b(123);
  for (int i = 0; i < 64; ++i) CHECK(a.next_u64() == b.next_u64());
  Rng r(2024);
  const std::size_t n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = r.normal();
    sum += z;
    sum2 += z * z;
  }
  CHECK(std::fabs(sum / n) < 3.0 / std::sqrt(double(n)));
  CHECK(std::fabs(sum2 / n - 1.0) < 3.0 * std::sqrt(2.0 / double(n)));
  // split_seed decorrelates consecutive indices
  CHECK(split_seed(1, 0) != split_seed(1, 1));
  CHECK(split_seed(1, 0) != split_seed(2, 0));
}

#include <doctest.h>

#include <cmath>

#include "tpreg/fit.hpp"
#include "tpreg/prediction.hpp"
#include "tpreg/rng.hpp"
#include "tpreg/simstudy.hpp"

using namespace tpreg;

namespace {

// tiny synthetic AFT fit shared by the cases below
struct Fixture {
  Dataset data;
  ModelSpec spec;
  Chain chain;

  Fixture() {
    Scenario sc = Scenario::one(0.4, 120);
    sc.log_scale_response = false;
    data = generate(sc, 404);
    spec.baseline = BaselineKind::normal();
    spec.two_piece = true;
    PosteriorFitConfig cfg;
    cfg.n_keep = 200;
    cfg.burn_in = 3000;
    cfg.thin = 5;
    cfg.seed = 21;
    chain = fit_posterior(data, spec, cfg);
  }
};

Chain single_draw_lognormal(double beta0, double sigma) {
  // one-draw chain of a symmetric normal AFT: predictive is log-normal
  Chain c;
  c.draws.resize(1, 2);
  c.draws << beta0, sigma;
  c.logpost = Eigen::VectorXd::Zero(1);
  return c;
}

}  // namespace

TEST_CASE("recentre: identity cases and median shift") {
  Fixture fx;
  const Chain same = recentre(fx.chain, fx.spec, fx.data.p(), CentringRule::Mode);
  CHECK(same.draws == fx.chain.draws);

  const Chain med = recentre(fx.chain, fx.spec, fx.data.p(), CentringRule::Median);
  for (Eigen::Index m = 0; m < fx.chain.size(); ++m) {
    const ParameterVector th = theta_from_draw(fx.chain, m, fx.spec, fx.data.p());
    const double shift = tp_median(th.error_params(fx.spec));
    CHECK(med.draws(m, 0) ==
          doctest::Approx(fx.chain.draws(m, 0) + shift).epsilon(1e-12));
    // only the intercept moves
    for (Eigen::Index j = 1; j < fx.chain.dim(); ++j)
      CHECK(med.draws(m, j) == fx.chain.draws(m, j));
    // after re-centring the error median sits at zero: P(eps <= median) = 1/2
    TwoPieceParams err = th.error_params(fx.spec);
    CHECK(tp_cdf(shift, err) == doctest::Approx(0.5).epsilon(1e-12));
  }

  // symmetric draws: median rule is also the identity
  ModelSpec sym;
  sym.baseline = BaselineKind::normal();
  sym.two_piece = false;
  Chain c = single_draw_lognormal(1.0, 2.0);
  const Chain still = recentre(c, sym, 1, CentringRule::Median);
  CHECK(still.draws(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("predictive_cdf: limits, closed form, draw averaging") {
  ModelSpec sym;
  sym.baseline = BaselineKind::normal();
  sym.two_piece = false;
  const Chain c = single_draw_lognormal(2.0, 0.5);
  Eigen::VectorXd x(1);
  x << 1.0;

  CHECK(predictive_cdf(1e-300, x, c, sym) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(predictive_cdf(1e300, x, c, sym) == doctest::Approx(1.0).epsilon(1e-12));

  // single draw, symmetric normal: log-normal CDF Phi((log t - x'b)/sigma)
  for (double t : {0.5, 3.0, 12.0, 80.0})
    CHECK(predictive_cdf(t, x, c, sym) ==
          doctest::Approx(num::norm_cdf((std::log(t) - 2.0) / 0.5)).epsilon(1e-12));

  // three-draw chain averages the per-draw values
  Chain c3;
  c3.draws.resize(3, 2);
  c3.draws << 1.8, 0.4, 2.0, 0.5, 2.4, 0.7;
  c3.logpost = Eigen::VectorXd::Zero(3);
  const double t = 9.0;
  double expect = 0.0;
  for (int m = 0; m < 3; ++m)
    expect += num::norm_cdf((std::log(t) - c3.draws(m, 0)) / c3.draws(m, 1)) / 3.0;
  CHECK(predictive_cdf(t, x, c3, sym) == doctest::Approx(expect).epsilon(1e-12));

  // monotone in t
  Fixture fx;
  Eigen::VectorXd xf = fx.data.design.row(0).transpose();
  double prev = 0.0;
  for (double tt = 0.5; tt < 2000.0; tt *= 2.3) {
    const double v = predictive_cdf(std::exp(1.0) * tt, xf, fx.chain, fx.spec);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("centring invariance of the predictive") {
  Fixture fx;
  const Chain med = recentre(fx.chain, fx.spec, fx.data.p(), CentringRule::Median);
  Eigen::VectorXd x = fx.data.design.row(3).transpose();
  for (double t : {5.0, 20.0, 90.0, 400.0}) {
    const double from_mode = predictive_cdf(t, x, fx.chain, fx.spec, CentringRule::Mode);
    const double from_med = predictive_cdf(t, x, med, fx.spec, CentringRule::Median);
    CHECK(from_mode == doctest::Approx(from_med).epsilon(1e-12));
  }
}

TEST_CASE("residual life: identities and closed form") {
  ModelSpec sym;
  sym.baseline = BaselineKind::normal();
  sym.two_piece = false;
  const Chain c = single_draw_lognormal(2.0, 0.5);
  Eigen::VectorXd x(1);
  x << 1.0;
  const double T = 5.0;

  CHECK(residual_life_survival(T, T, x, c, sym) == doctest::Approx(1.0).epsilon(1e-12));

  // single-draw log-normal: conditional survival ratio
  for (double t : {6.0, 9.0, 15.0}) {
    const double st = 1.0 - num::norm_cdf((std::log(t) - 2.0) / 0.5);
    const double sT = 1.0 - num::norm_cdf((std::log(T) - 2.0) / 0.5);
    CHECK(residual_life_survival(t, T, x, c, sym) ==
          doctest::Approx(st / sT).epsilon(1e-10));
  }

  // monotone non-increasing on a grid
  double prev = 1.0;
  for (double t = T; t < 200.0; t *= 1.4) {
    const double v = residual_life_survival(t, T, x, c, sym);
    CHECK(v <= prev + 1e-12);
    prev = v;
  }
}

TEST_CASE("residual life quantiles: roundtrip and monotonicity") {
  Fixture fx;
  // pick a right-censored subject if present, else synthesize one
  Eigen::VectorXd x = fx.data.design.row(7).transpose();
  const double T = std::exp(fx.data.obs[7].value());

  double prev = T;
  for (double p : {0.05, 0.25, 0.5, 0.75, 0.95}) {
    const double t = residual_life_quantile(p, T, x, fx.chain, fx.spec);
    CHECK(t > prev);  // strictly increasing in p
    prev = t;
    // roundtrip: Pi_R(t) = p
    const double sr = residual_life_survival(t, T, x, fx.chain, fx.spec);
    CHECK(1.0 - sr == doctest::Approx(p).epsilon(1e-6));
  }

  // p -> 0 approaches the censoring time
  const double tiny = residual_life_quantile(1e-6, T, x, fx.chain, fx.spec);
  CHECK(tiny == doctest::Approx(T).epsilon(1e-3));
}

TEST_CASE("predictive calibration on simulated subjects") {
  // average of the predictive CDF at the true generating quantile is near p
  Scenario sc = Scenario::one(0.5, 150);
  const Dataset data = generate(sc, 777);
  ModelSpec spec;
  spec.baseline = BaselineKind::normal();
  spec.two_piece = true;
  PosteriorFitConfig cfg;
  cfg.n_keep = 150;
  cfg.burn_in = 3000;
  cfg.thin = 5;
  cfg.seed = 88;
  const Chain chain = fit_posterior(data, spec, cfg);

  TwoPieceParams err = sc.error;
  for (double p : {0.25, 0.5, 0.75}) {
    const double eq = tp_quantile(p, err);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < data.n(); ++i) {
      const double lin = data.design.row(i).dot(
          Eigen::Map<const Eigen::VectorXd>(sc.beta_true.data(), 3));
      acc += predictive_cdf(std::exp(lin + eq), data.design.row(i).transpose(), chain,
                            spec);
    }
    acc /= double(data.n());
    CHECK(acc == doctest::Approx(p).epsilon(0.12));
  }
}

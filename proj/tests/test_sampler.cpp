#include <doctest.h>

#include <cmath>

#include "tpreg/rng.hpp"
#include "tpreg/sampler.hpp"

using namespace tpreg;

namespace {

LogDensity std_normal_target(Eigen::VectorXd scales) {
  return [scales](const Eigen::VectorXd& x) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i)
      s += -0.5 * x[i] * x[i] / (scales[i] * scales[i]);
    return s;
  };
}

ChainConfig config_for(Eigen::Index dim, SamplerAlgorithm algo, std::size_t n_keep,
                       std::size_t burn_in, std::size_t thin, std::uint64_t seed) {
  ChainConfig c;
  c.n_keep = n_keep;
  c.burn_in = burn_in;
  c.thin = thin;
  c.seed = seed;
  c.algorithm = algo;
  c.init1 = Eigen::VectorXd::Constant(dim, 0.5);
  c.init2 = Eigen::VectorXd::Constant(dim, -0.5);
  return c;
}

}  // namespace

TEST_CASE("t-walk recovers standard normal moments") {
  Eigen::VectorXd scales = Eigen::VectorXd::Ones(1);
  const auto cfg = config_for(1, SamplerAlgorithm::TWalk, 20000, 2000, 5, 31);
  const Chain chain = run_chain(std_normal_target(scales), cfg);

  const double mean = chain.draws.col(0).mean();
  const double var =
      (chain.draws.col(0).array() - mean).square().sum() / double(chain.size() - 1);
  CHECK(std::fabs(mean) < 0.03);
  CHECK(std::fabs(var - 1.0) < 0.05);
  CHECK(chain.acceptance_rate > 0.1);
  for (Eigen::Index m = 0; m < chain.size(); ++m)
    CHECK(std::isfinite(chain.logpost[m]));
}

TEST_CASE("t-walk handles widely different scales") {
  Eigen::VectorXd scales(2);
  scales << 1.0, 10.0;
  auto cfg = config_for(2, SamplerAlgorithm::TWalk, 40000, 5000, 5, 77);
  const Chain chain = run_chain(std_normal_target(scales), cfg);
  for (Eigen::Index j = 0; j < 2; ++j) {
    const double mean = chain.draws.col(j).mean();
    const double var =
        (chain.draws.col(j).array() - mean).square().sum() / double(chain.size() - 1);
    CHECK(std::fabs(var / (scales[j] * scales[j]) - 1.0) < 0.10);
  }
}

TEST_CASE("adaptive RWM matches the analytic target and preserves it at stationarity") {
  Eigen::VectorXd scales = Eigen::VectorXd::Ones(1);
  const auto cfg = config_for(1, SamplerAlgorithm::AdaptiveRWM, 20000, 5000, 5, 13);
  const Chain chain = run_chain(std_normal_target(scales), cfg);
  const double mean = chain.draws.col(0).mean();
  const double var =
      (chain.draws.col(0).array() - mean).square().sum() / double(chain.size() - 1);
  CHECK(std::fabs(mean) < 0.03);
  CHECK(std::fabs(var - 1.0) < 0.05);
  // adapted acceptance should sit near the 0.234 target
  CHECK(chain.acceptance_rate > 0.12);
  CHECK(chain.acceptance_rate < 0.40);

  // start from an exact draw of the target: kept moments stay correct
  Rng r(5);
  ChainConfig c2 = cfg;
  c2.init1[0] = r.normal();
  c2.seed = 101;
  const Chain chain2 = run_chain(std_normal_target(scales), c2);
  const double m2 = chain2.draws.col(0).mean();
  const double v2 =
      (chain2.draws.col(0).array() - m2).square().sum() / double(chain2.size() - 1);
  // 3 MC standard errors with an effective size discount for autocorrelation
  CHECK(std::fabs(m2) < 0.05);
  CHECK(std::fabs(v2 - 1.0) < 0.08);
}

TEST_CASE("frozen seed gives bit-identical chains; seeds differ") {
  Eigen::VectorXd scales = Eigen::VectorXd::Ones(2);
  const auto cfg = config_for(2, SamplerAlgorithm::TWalk, 500, 100, 3, 2024);
  const Chain a = run_chain(std_normal_target(scales), cfg);
  const Chain b = run_chain(std_normal_target(scales), cfg);
  CHECK(a.draws == b.draws);
  CHECK(a.logpost == b.logpost);
  CHECK(a.acceptance_rate == b.acceptance_rate);
  auto cfg2 = cfg;
  cfg2.seed = 2025;
  const Chain c = run_chain(std_normal_target(scales), cfg2);
  CHECK(a.draws != c.draws);
}

TEST_CASE("thinning subsamples the thin=1 stream") {
  Eigen::VectorXd scales = Eigen::VectorXd::Ones(1);
  auto dense_cfg = config_for(1, SamplerAlgorithm::TWalk, 900, 100, 1, 9);
  const Chain dense = run_chain(std_normal_target(scales), dense_cfg);
  auto thin_cfg = config_for(1, SamplerAlgorithm::TWalk, 300, 100, 3, 9);
  const Chain thin = run_chain(std_normal_target(scales), thin_cfg);
  for (Eigen::Index k = 0; k < 300; ++k)
    CHECK(thin.draws(k, 0) == dense.draws(3 * k + 2, 0));
}

TEST_CASE("startup failure on infinite target") {
  auto target = [](const Eigen::VectorXd&) { return -num::inf; };
  const auto cfg = config_for(1, SamplerAlgorithm::TWalk, 10, 10, 1, 1);
  CHECK_THROWS_AS(run_chain(target, cfg), std::runtime_error);
}

TEST_CASE("config validation") {
  auto cfg = config_for(2, SamplerAlgorithm::TWalk, 10, 10, 1, 1);
  cfg.init2[0] = cfg.init1[0];  // equal coordinate
  CHECK_THROWS_AS(cfg.validate(2), std::invalid_argument);
  auto cfg2 = config_for(2, SamplerAlgorithm::TWalk, 0, 10, 1, 1);
  CHECK_THROWS_AS(cfg2.validate(2), std::invalid_argument);
}

TEST_CASE("summarize: constants, quantile convention, normal coverage") {
  Chain c;
  c.draws = Eigen::MatrixXd::Constant(50, 1, 3.25);
  c.logpost = Eigen::VectorXd::Zero(50);
  auto s = summarize(c);
  CHECK(s[0].median == 3.25);
  CHECK(s[0].map == 3.25);
  CHECK(s[0].lower95 == 3.25);
  CHECK(s[0].upper95 == 3.25);

  // draws 1..100: median 50.5, type-7 quantiles
  Chain g;
  g.draws.resize(100, 1);
  for (int i = 0; i < 100; ++i) g.draws(i, 0) = double(i + 1);
  g.logpost = Eigen::VectorXd::Zero(100);
  g.logpost[41] = 1.0;  // make draw 42 the MAP
  s = summarize(g);
  CHECK(s[0].median == doctest::Approx(50.5));
  CHECK(s[0].lower95 == doctest::Approx(3.475));
  CHECK(s[0].upper95 == doctest::Approx(97.525));
  CHECK(s[0].map == doctest::Approx(42.0));

  // interval endpoints of a normal chain near +/-1.96
  Rng rng(55);
  Chain n;
  n.draws.resize(100000, 1);
  for (Eigen::Index i = 0; i < n.draws.rows(); ++i) n.draws(i, 0) = rng.normal();
  n.logpost = Eigen::VectorXd::Zero(n.draws.rows());
  s = summarize(n);
  CHECK(s[0].lower95 == doctest::Approx(-1.96).epsilon(0.02));
  CHECK(s[0].upper95 == doctest::Approx(1.96).epsilon(0.02));
}

TEST_CASE("diagnostics: rhat near 1 for iid, ESS behaviour") {
  Rng rng(17);
  auto iid_chain = [&](std::size_t n) {
    Chain c;
    c.draws.resize(Eigen::Index(n), 1);
    for (std::size_t i = 0; i < n; ++i) c.draws(Eigen::Index(i), 0) = rng.normal();
    c.logpost = Eigen::VectorXd::Zero(Eigen::Index(n));
    return c;
  };
  std::vector<Chain> chains{iid_chain(5000), iid_chain(5000)};
  const auto d = diagnostics(chains);
  CHECK(d.split_rhat[0] < 1.01);
  CHECK(d.ess[0] > 0.9 * 10000);
  CHECK(d.ess[0] < 1.35 * 10000);

  // single chain: ESS only
  const auto d1 = diagnostics({chains[0]});
  CHECK(d1.split_rhat.empty());
  CHECK(d1.ess[0] > 0.9 * 5000);

  // perfectly anticorrelated alternating chain: ESS exceeds the draw count
  Chain alt;
  alt.draws.resize(1000, 1);
  for (int i = 0; i < 1000; ++i) alt.draws(i, 0) = (i % 2) ? 1.0 : -1.0;
  alt.logpost = Eigen::VectorXd::Zero(1000);
  const auto da = diagnostics({alt});
  CHECK(da.ess[0] > 1000.0);
}

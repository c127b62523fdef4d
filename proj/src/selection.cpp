#include "tpreg/selection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tpreg/numerics.hpp"
#include "tpreg/rng.hpp"

namespace tpreg {

using num::inf;

MleResult mle_fit(const Dataset& data, const ModelSpec& spec,
                  const ParameterVector& start) {
  spec.validate();
  const Eigen::Index p = data.p();
  const double ll0 = loglikelihood(start, data, spec);
  if (!std::isfinite(ll0))
    throw std::invalid_argument("mle_fit: starting point has non-finite likelihood");
  const Eigen::VectorXd v0 = to_unconstrained(start, spec);

  auto objective = [&](std::span<const double> v) {
    Eigen::Map<const Eigen::VectorXd> vv(v.data(), Eigen::Index(v.size()));
    for (double x : v)
      if (!std::isfinite(x)) return inf;
    const auto [theta, logjac] = from_unconstrained(vv, spec, p);
    (void)logjac;  // the MLE lives on the constrained scale; no jacobian here
    if (!std::isfinite(theta.sigma)) return inf;
    if (theta.delta && !std::isfinite(*theta.delta)) return inf;
    const double ll = loglikelihood(theta, data, spec);
    return std::isfinite(ll) ? -ll : inf;
  };

  num::NelderMeadOptions opt;
  opt.diameter_tol = 1e-8;
  std::vector<double> cur(v0.data(), v0.data() + v0.size());
  num::NelderMeadResult best;
  for (int round = 0; round < 2; ++round) {  // one restart from the optimum
    auto res = num::nelder_mead(objective, cur, opt);
    if (round == 0 || res.fx < best.fx) best = res;
    cur = best.x;
    opt.initial_step = 0.02;
  }

  MleResult out;
  Eigen::Map<const Eigen::VectorXd> vbest(best.x.data(), Eigen::Index(best.x.size()));
  out.theta = from_unconstrained(vbest, spec, p).theta;
  out.max_loglik = -best.fx;
  out.converged = best.converged;
  out.n_eval = best.n_eval;
  return out;
}

double bic(const Dataset& data, const ModelSpec& spec, const MleResult& mle) {
  const double k = double(parameter_dim(spec, data.p()));
  return k * std::log(double(data.n())) - 2.0 * mle.max_loglik;
}

double obs_logdensity(const ParameterVector& theta, const Dataset& data,
                      const ModelSpec& spec, Eigen::Index row) {
  const TwoPieceDist dist(theta.error_params(spec));
  const double lin = data.design.row(row).dot(theta.beta);
  const auto& o = data.obs[row];
  switch (o.kind) {
    case CensoredObservation::Kind::Exact:
      return dist.logpdf(o.lo - lin);
    case CensoredObservation::Kind::Right:
      return dist.logsf(o.lo - lin);
    case CensoredObservation::Kind::Left: {
      const double g = dist.cdf(o.lo - lin);
      return g > 0.0 ? std::log(g) : -inf;
    }
    case CensoredObservation::Kind::Interval: {
      const double pr = dist.cdf(o.hi - lin) - dist.cdf(o.lo - lin);
      return pr > 0.0 ? std::log(pr) : -inf;
    }
  }
  return -inf;
}

namespace {

ParameterVector theta_from_row(const Chain& chain, Eigen::Index m, const ModelSpec& spec,
                               Eigen::Index p) {
  ParameterVector th;
  th.beta = chain.draws.row(m).head(p).transpose();
  Eigen::Index k = p;
  th.sigma = chain.draws(m, k++);
  if (spec.has_gamma()) th.gamma = chain.draws(m, k++);
  if (spec.has_delta()) th.delta = chain.draws(m, k++);
  return th;
}

}  // namespace

LpmlResult lpml(const Chain& chain, const Dataset& data, const ModelSpec& spec) {
  if (chain.size() == 0) throw std::invalid_argument("lpml: empty chain");
  const Eigen::Index M = chain.size();
  const Eigen::Index n = data.n();
  const Eigen::Index p = data.p();

  // neg_ll(i, m) = -log L_i(theta_m), assembled row-block by draw
  Eigen::MatrixXd neg_ll(n, M);
  for (Eigen::Index m = 0; m < M; ++m) {
    const ParameterVector th = theta_from_row(chain, m, spec, p);
    const TwoPieceDist dist(th.error_params(spec));
    const Eigen::VectorXd lin = data.design * th.beta;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& o = data.obs[i];
      double ld;
      switch (o.kind) {
        case CensoredObservation::Kind::Exact: ld = dist.logpdf(o.lo - lin[i]); break;
        case CensoredObservation::Kind::Right: ld = dist.logsf(o.lo - lin[i]); break;
        case CensoredObservation::Kind::Left: {
          const double g = dist.cdf(o.lo - lin[i]);
          ld = g > 0.0 ? std::log(g) : -inf;
          break;
        }
        default: {
          const double pr = dist.cdf(o.hi - lin[i]) - dist.cdf(o.lo - lin[i]);
          ld = pr > 0.0 ? std::log(pr) : -inf;
          break;
        }
      }
      neg_ll(i, m) = -ld;
    }
  }

  LpmlResult out;
  std::vector<double> row(M);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index m = 0; m < M; ++m) row[std::size_t(m)] = neg_ll(i, m);
    const double lse = num::log_sum_exp(row);
    if (!std::isfinite(lse)) {
      out.zero_cpo_rows.push_back(i);
      out.lpml = -inf;
      continue;
    }
    // log CPO_i = log M - logsumexp_m(-l_im)
    out.lpml += std::log(double(M)) - lse;
  }
  return out;
}

double savage_dickey_bf(const Chain& chain, const ModelSpec& spec,
                        const SavageDickeyOptions& opt) {
  if (!spec.has_gamma())
    throw std::invalid_argument("savage_dickey_bf: model has no free gamma");
  const Eigen::Index p = chain.dim() - 1 - (spec.has_delta() ? 1 : 0) - 1;
  const Eigen::Index gcol = p + 1;  // beta..., sigma, gamma, [delta]
  const double null_gamma =
      opt.null_value.value_or(skew_symmetry_point(spec.parameterisation));

  std::vector<double> g(chain.draws.col(gcol).data(),
                        chain.draws.col(gcol).data() + chain.size());
  const std::size_t n = g.size();
  double mean = 0.0;
  for (double x : g) mean += x;
  mean /= double(n);
  double sd = 0.0;
  for (double x : g) sd += (x - mean) * (x - mean);
  sd = std::sqrt(sd / double(n - 1));
  if (!(sd > 0.0))
    throw std::invalid_argument("savage_dickey_bf: degenerate gamma chain");
  const double iqr = sample_quantile(g, 0.75) - sample_quantile(g, 0.25);
  double spread = sd;
  if (iqr > 0.0) spread = std::min(sd, iqr / 1.349);
  const double h = opt.bandwidth_factor * spread * std::pow(double(n), -0.2);

  // Gaussian KDE with reflection at the domain boundary
  const bool eps_skew = spec.parameterisation == SkewParameterisation::EpsilonSkew;
  auto kde_at = [&](double x0) {
    double s = 0.0;
    for (double xi : g) {
      s += std::exp(num::norm_logpdf((x0 - xi) / h));
      if (eps_skew) {
        s += std::exp(num::norm_logpdf((x0 - (-2.0 - xi)) / h));  // reflect at -1
        s += std::exp(num::norm_logpdf((x0 - (2.0 - xi)) / h));   // reflect at +1
      } else {
        s += std::exp(num::norm_logpdf((x0 + xi) / h));  // reflect at 0
      }
    }
    return s / (double(n) * h);
  };

  const double post_density = kde_at(null_gamma);
  const double prior_density =
      std::exp(gamma_logprior(null_gamma, spec.gamma_a0, spec.gamma_b0,
                              spec.parameterisation));
  return post_density / prior_density;
}

LogMarginalResult log_marginal_is(const Chain& chain, const Dataset& data,
                                  const ModelSpec& spec, std::size_t n_is,
                                  std::uint64_t seed) {
  if (chain.size() < 10)
    throw std::invalid_argument("log_marginal_is: chain too short to fit a proposal");
  const Eigen::Index p = data.p();
  const Eigen::Index d = chain.dim();

  // moments of the unconstrained-scale draws
  Eigen::MatrixXd V(chain.size(), d);
  for (Eigen::Index m = 0; m < chain.size(); ++m)
    V.row(m) = to_unconstrained(theta_from_row(chain, m, spec, p), spec).transpose();
  const Eigen::VectorXd mean = V.colwise().mean();
  Eigen::MatrixXd centered = V.rowwise() - mean.transpose();
  Eigen::MatrixXd cov =
      centered.transpose() * centered / double(chain.size() - 1);
  cov *= 2.0;  // inflate for tail coverage
  cov.diagonal().array() += 1e-10;
  const Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("log_marginal_is: proposal covariance not PD");
  const Eigen::MatrixXd L = llt.matrixL();
  double log_det_half = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) log_det_half += std::log(L(i, i));

  const double nu = 5.0;
  const double log_norm = std::lgamma(0.5 * (nu + double(d))) - std::lgamma(0.5 * nu) -
                          0.5 * double(d) * std::log(nu * num::pi) - log_det_half;

  Rng rng(seed);
  std::vector<double> logw(n_is);
  Eigen::VectorXd z(d), v(d);
  for (std::size_t s = 0; s < n_is; ++s) {
    for (Eigen::Index i = 0; i < d; ++i) z[i] = rng.normal();
    double chi2 = 0.0;  // chi-square_nu via sum of squared normals
    for (int k = 0; k < int(nu); ++k) {
      const double w = rng.normal();
      chi2 += w * w;
    }
    const double scale = std::sqrt(nu / chi2);
    v = mean + scale * (L * z);

    const double quad = z.squaredNorm() * scale * scale;
    const double log_q = log_norm - 0.5 * (nu + double(d)) * std::log1p(quad / nu);

    const auto [theta, logjac] = from_unconstrained(v, spec, p);
    double lp;
    try {
      lp = logposterior(theta, data, spec) + logjac;
    } catch (const std::invalid_argument&) {
      lp = -inf;
    }
    logw[s] = lp - log_q;
  }

  const double lse = num::log_sum_exp(logw);
  LogMarginalResult out;
  out.log_marginal = lse - std::log(double(n_is));

  // weight diagnostics on the normalized scale
  double sum_w = 0.0, sum_w2 = 0.0;
  for (double lw : logw) {
    const double w = std::exp(lw - lse);
    sum_w += w;
    sum_w2 += w * w;
  }
  out.weight_ess = (sum_w * sum_w) / sum_w2;
  // delta-method standard error of log-mean
  const double n = double(n_is);
  double var_w = 0.0;
  const double wbar = sum_w / n;
  for (double lw : logw) {
    const double w = std::exp(lw - lse);
    var_w += (w - wbar) * (w - wbar);
  }
  var_w /= (n - 1.0);
  out.mc_se = std::sqrt(var_w / n) / wbar;
  out.reliable = out.weight_ess >= 0.01 * n;
  return out;
}

}  // namespace tpreg

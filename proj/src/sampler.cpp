#include "tpreg/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tpreg/numerics.hpp"
#include "tpreg/rng.hpp"

namespace tpreg {

using num::inf;

void ChainConfig::validate(Eigen::Index dim) const {
  if (n_keep < 1) throw std::invalid_argument("chain config: n_keep must be >= 1");
  if (thin < 1) throw std::invalid_argument("chain config: thin must be >= 1");
  if (init1.size() != dim)
    throw std::invalid_argument("chain config: init1 has wrong dimension");
  if (algorithm == SamplerAlgorithm::TWalk) {
    if (init2.size() != dim)
      throw std::invalid_argument("chain config: t-walk needs init2");
    for (Eigen::Index i = 0; i < dim; ++i)
      if (init1[i] == init2[i])
        throw std::invalid_argument(
            "chain config: t-walk initial points must differ in every coordinate");
  }
}

namespace {

// ----- t-walk kernel (Christen & Fox 2010), published default tuning -----
//
// Two-point state (x, x'); per iteration one point is moved using the other
// as helper, via one of four kernels picked with the authors' default
// probabilities. Coordinates enter the move set independently with
// probability min(dim, 4)/dim.

struct TWalkConstants {
  static constexpr double p_traverse = 0.4918;
  static constexpr double p_walk = 0.4918;
  static constexpr double p_hop = 0.0082;   // remainder goes to blow
  static constexpr double a_traverse = 6.0;
  static constexpr double a_walk = 1.5;
};

class TWalk {
 public:
  TWalk(const LogDensity& target, Eigen::VectorXd x, Eigen::VectorXd xp,
        std::uint64_t seed)
      : target_(target), rng_(seed), x_(std::move(x)), xp_(std::move(xp)) {
    dim_ = x_.size();
    p_phi_ = std::min<double>(dim_, 4.0) / double(dim_);
    lp_x_ = target_(x_);
    lp_xp_ = target_(xp_);
    if (!std::isfinite(lp_x_) || !std::isfinite(lp_xp_))
      throw std::runtime_error("sampler startup: target not finite at initial points");
  }

  // advances one iteration; returns true if the proposal was accepted
  bool step() {
    const double u_kernel = rng_.uniform();
    const bool move_first = rng_.uniform() < 0.5;
    Eigen::VectorXd& cur = move_first ? x_ : xp_;
    Eigen::VectorXd& helper = move_first ? xp_ : x_;
    double& lp_cur = move_first ? lp_x_ : lp_xp_;

    phi_.assign(dim_, false);
    n_phi_ = 0;
    for (Eigen::Index i = 0; i < dim_; ++i)
      if (rng_.uniform() < p_phi_) { phi_[i] = true; ++n_phi_; }

    double log_extra = 0.0;  // proposal-ratio correction beyond the densities
    Eigen::VectorXd y = cur;
    bool valid = true;

    if (u_kernel < TWalkConstants::p_traverse) {
      const double beta = sim_beta();
      for (Eigen::Index i = 0; i < dim_; ++i)
        if (phi_[i]) y[i] = helper[i] + beta * (helper[i] - cur[i]);
      if (n_phi_ == 0) return true;  // proposal equals current point
      valid = distinct(y, helper);
      log_extra = (double(n_phi_) - 2.0) * std::log(beta);
    } else if (u_kernel < TWalkConstants::p_traverse + TWalkConstants::p_walk) {
      const double aw = TWalkConstants::a_walk;
      for (Eigen::Index i = 0; i < dim_; ++i) {
        if (!phi_[i]) continue;
        const double u = rng_.uniform();
        const double z = (aw / (1.0 + aw)) * (-1.0 + 2.0 * u + aw * u * u);
        y[i] = cur[i] + (cur[i] - helper[i]) * z;
      }
      valid = distinct(y, helper);
    } else if (u_kernel < TWalkConstants::p_traverse + TWalkConstants::p_walk +
                              TWalkConstants::p_hop) {
      const double sigma_fwd = max_phi_dist(cur, helper) / 3.0;
      for (Eigen::Index i = 0; i < dim_; ++i)
        if (phi_[i]) y[i] = cur[i] + sigma_fwd * rng_.normal();
      valid = distinct(y, helper) && sigma_fwd > 0.0;
      if (valid) log_extra = hop_g(y, cur, helper) - hop_g(cur, y, helper);
    } else {
      const double sigma_fwd = max_phi_dist(cur, helper);
      for (Eigen::Index i = 0; i < dim_; ++i)
        if (phi_[i]) y[i] = helper[i] + sigma_fwd * rng_.normal();
      valid = distinct(y, helper) && sigma_fwd > 0.0;
      if (valid) log_extra = blow_g(y, cur, helper) - blow_g(cur, y, helper);
    }

    if (!valid || n_phi_ == 0) return n_phi_ == 0;
    const double lp_y = target_(y);
    if (lp_y == -inf) return false;
    const double log_alpha = (lp_y - lp_cur) + log_extra;
    if (log_alpha >= 0.0 || std::log(rng_.uniform()) < log_alpha) {
      cur = std::move(y);
      lp_cur = lp_y;
      return true;
    }
    return false;
  }

  const Eigen::VectorXd& point() const { return x_; }
  double logpost() const { return lp_x_; }

 private:
  double sim_beta() {
    const double at = TWalkConstants::a_traverse;
    if (rng_.uniform() < (at - 1.0) / (2.0 * at))
      return std::exp(std::log(rng_.uniform()) / (at + 1.0));
    return std::exp(std::log(rng_.uniform()) / (1.0 - at));
  }

  bool distinct(const Eigen::VectorXd& y, const Eigen::VectorXd& other) const {
    for (Eigen::Index i = 0; i < dim_; ++i)
      if (y[i] == other[i]) return false;
    return true;
  }

  double max_phi_dist(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    double m = 0.0;
    for (Eigen::Index i = 0; i < dim_; ++i)
      if (phi_[i]) m = std::max(m, std::fabs(b[i] - a[i]));
    return m;
  }

  // minus log proposal density of the hop kernel: h proposed around `center`
  // with scale set by the center-helper spread
  double hop_g(const Eigen::VectorXd& h, const Eigen::VectorXd& center,
               const Eigen::VectorXd& helper) const {
    const double sigma = max_phi_dist(center, helper) / 3.0;
    if (sigma <= 0.0) return inf;
    double ss = 0.0;
    for (Eigen::Index i = 0; i < dim_; ++i)
      if (phi_[i]) ss += (h[i] - center[i]) * (h[i] - center[i]);
    return 0.5 * double(n_phi_) * num::log_2pi + double(n_phi_) * std::log(sigma) +
           0.5 * ss / (sigma * sigma);
  }

  // minus log proposal density of the blow kernel: centered at the helper
  double blow_g(const Eigen::VectorXd& h, const Eigen::VectorXd& center,
                const Eigen::VectorXd& helper) const {
    const double sigma = max_phi_dist(center, helper);
    if (sigma <= 0.0) return inf;
    double ss = 0.0;
    for (Eigen::Index i = 0; i < dim_; ++i)
      if (phi_[i]) ss += (h[i] - helper[i]) * (h[i] - helper[i]);
    return 0.5 * double(n_phi_) * num::log_2pi + double(n_phi_) * std::log(sigma) +
           0.5 * ss / (sigma * sigma);
  }

  const LogDensity& target_;
  Rng rng_;
  Eigen::VectorXd x_, xp_;
  double lp_x_, lp_xp_;
  Eigen::Index dim_;
  double p_phi_;
  std::vector<bool> phi_;
  int n_phi_ = 0;
};

// ----- adaptive random-walk Metropolis -----
//
// Isotropic Gaussian proposal; the global scale follows a Robbins-Monro
// recursion toward acceptance 0.234 during burn-in and is frozen afterwards.

class AdaptiveRWM {
 public:
  AdaptiveRWM(const LogDensity& target, Eigen::VectorXd x, std::uint64_t seed)
      : target_(target), rng_(seed), x_(std::move(x)) {
    dim_ = x_.size();
    lp_x_ = target_(x_);
    if (!std::isfinite(lp_x_))
      throw std::runtime_error("sampler startup: target not finite at initial point");
    log_scale_ = std::log(2.38 / std::sqrt(double(dim_)));
  }

  bool step(bool adapting) {
    const double s = std::exp(log_scale_);
    Eigen::VectorXd y(dim_);
    for (Eigen::Index i = 0; i < dim_; ++i) y[i] = x_[i] + s * rng_.normal();
    const double lp_y = target_(y);
    bool accepted = false;
    if (lp_y > -inf) {
      const double log_alpha = lp_y - lp_x_;
      if (log_alpha >= 0.0 || std::log(rng_.uniform()) < log_alpha) {
        x_ = std::move(y);
        lp_x_ = lp_y;
        accepted = true;
      }
    }
    if (adapting) {
      ++t_;
      log_scale_ += std::pow(double(t_), -0.7) * ((accepted ? 1.0 : 0.0) - 0.234);
    }
    return accepted;
  }

  const Eigen::VectorXd& point() const { return x_; }
  double logpost() const { return lp_x_; }

 private:
  const LogDensity& target_;
  Rng rng_;
  Eigen::VectorXd x_;
  double lp_x_;
  Eigen::Index dim_;
  double log_scale_;
  std::size_t t_ = 0;
};

}  // namespace

Chain run_chain(const LogDensity& target, const ChainConfig& config) {
  const Eigen::Index dim = config.init1.size();
  config.validate(dim);

  Chain chain;
  chain.seed = config.seed;
  chain.draws.resize(config.n_keep, dim);
  chain.logpost.resize(config.n_keep);

  const std::size_t total = config.burn_in + config.n_keep * config.thin;
  std::size_t accepted = 0;
  std::size_t kept = 0;

  auto record = [&](std::size_t iter, const Eigen::VectorXd& x, double lp) {
    if (iter > config.burn_in && (iter - config.burn_in) % config.thin == 0) {
      chain.draws.row(kept) = x.transpose();
      chain.logpost[kept] = lp;
      ++kept;
    }
  };

  if (config.algorithm == SamplerAlgorithm::TWalk) {
    TWalk tw(target, config.init1, config.init2, config.seed);
    for (std::size_t it = 1; it <= total; ++it) {
      if (tw.step()) ++accepted;
      record(it, tw.point(), tw.logpost());
    }
  } else {
    AdaptiveRWM rwm(target, config.init1, config.seed);
    for (std::size_t it = 1; it <= total; ++it) {
      if (rwm.step(it <= config.burn_in)) ++accepted;
      record(it, rwm.point(), rwm.logpost());
    }
  }
  chain.acceptance_rate = double(accepted) / double(total);
  return chain;
}

double sample_quantile(std::vector<double> v, double p) {
  if (v.empty()) throw std::invalid_argument("sample_quantile: empty sample");
  std::sort(v.begin(), v.end());
  const double h = (double(v.size()) - 1.0) * p;
  const std::size_t lo = std::size_t(std::floor(h));
  if (lo + 1 >= v.size()) return v.back();
  return v[lo] + (h - double(lo)) * (v[lo + 1] - v[lo]);
}

std::vector<ParameterSummary> summarize(const Chain& chain) {
  if (chain.size() == 0) throw std::invalid_argument("summarize: empty chain");
  Eigen::Index map_idx = 0;
  chain.logpost.maxCoeff(&map_idx);
  std::vector<ParameterSummary> out;
  for (Eigen::Index j = 0; j < chain.dim(); ++j) {
    ParameterSummary s;
    s.name = (Eigen::Index(chain.parameter_names.size()) == chain.dim())
                 ? chain.parameter_names[j]
                 : "p" + std::to_string(j + 1);
    std::vector<double> col(chain.draws.col(j).data(),
                            chain.draws.col(j).data() + chain.size());
    s.median = sample_quantile(col, 0.5);
    s.lower95 = sample_quantile(col, 0.025);
    s.upper95 = sample_quantile(col, 0.975);
    s.map = chain.draws(map_idx, j);
    out.push_back(std::move(s));
  }
  return out;
}

namespace {

// initial-positive-sequence estimate of the autocorrelation time
double autocorr_time(const std::vector<const double*>& seqs, std::size_t n) {
  const std::size_t m = seqs.size();
  double mean_all = 0.0;
  std::vector<double> means(m, 0.0);
  for (std::size_t c = 0; c < m; ++c) {
    for (std::size_t t = 0; t < n; ++t) means[c] += seqs[c][t];
    means[c] /= double(n);
    mean_all += means[c] / double(m);
  }
  double var = 0.0;
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t t = 0; t < n; ++t) {
      const double d = seqs[c][t] - means[c];
      var += d * d;
    }
  var /= double(m * n);
  if (var <= 0.0) return inf;

  auto rho = [&](std::size_t lag) {
    double s = 0.0;
    for (std::size_t c = 0; c < m; ++c)
      for (std::size_t t = 0; t + lag < n; ++t)
        s += (seqs[c][t] - means[c]) * (seqs[c][t + lag] - means[c]);
    return s / (double(m) * double(n) * var);
  };

  // Geyer initial positive + monotone sequence over pairs
  // Gamma_k = rho(2k) + rho(2k+1), tau = -1 + 2 sum_k Gamma_k
  double pair_sum = 0.0;
  double prev_pair = inf;
  for (std::size_t lag = 0; lag + 1 < n; lag += 2) {
    const double pair = rho(lag) + rho(lag + 1);
    if (pair <= 0.0) break;
    const double use = std::min(pair, prev_pair);
    pair_sum += use;
    prev_pair = use;
  }
  const double tau = -1.0 + 2.0 * pair_sum;
  return std::max(tau, 0.1);  // caps ESS at 10x the pooled draw count
}

}  // namespace

DiagnosticsResult diagnostics(const std::vector<Chain>& chains) {
  if (chains.empty()) throw std::invalid_argument("diagnostics: no chains");
  const Eigen::Index dim = chains[0].dim();
  const Eigen::Index n = chains[0].size();
  for (const auto& c : chains)
    if (c.dim() != dim || c.size() != n)
      throw std::invalid_argument("diagnostics: chains must have equal shapes");

  if (n < 4) throw std::invalid_argument("diagnostics: chains too short");
  DiagnosticsResult res;
  const std::size_t half = std::size_t(n) / 2;
  for (Eigen::Index j = 0; j < dim; ++j) {
    // split each chain into halves
    std::vector<std::vector<double>> splits;
    for (const auto& c : chains) {
      std::vector<double> col(c.draws.col(j).data(), c.draws.col(j).data() + n);
      splits.emplace_back(col.begin(), col.begin() + half);
      splits.emplace_back(col.end() - half, col.end());
    }
    if (chains.size() >= 2 || splits.size() >= 2) {
      const std::size_t m = splits.size();
      std::vector<double> means(m), vars(m);
      double grand = 0.0;
      for (std::size_t c = 0; c < m; ++c) {
        double mu = 0.0;
        for (double x : splits[c]) mu += x;
        mu /= double(half);
        double s2 = 0.0;
        for (double x : splits[c]) s2 += (x - mu) * (x - mu);
        s2 /= double(half - 1);
        means[c] = mu;
        vars[c] = s2;
        grand += mu / double(m);
      }
      double B = 0.0, W = 0.0;
      for (std::size_t c = 0; c < m; ++c) {
        B += (means[c] - grand) * (means[c] - grand);
        W += vars[c];
      }
      B *= double(half) / double(m - 1);
      W /= double(m);
      if (chains.size() >= 2) {
        const double var_plus = (double(half) - 1.0) / double(half) * W + B / double(half);
        res.split_rhat.push_back(W > 0.0 ? std::sqrt(var_plus / W) : 1.0);
      }
    }
    std::vector<const double*> seqs;
    for (const auto& c : chains) seqs.push_back(c.draws.col(j).data());
    const double tau = autocorr_time(seqs, std::size_t(n));
    res.ess.push_back(double(chains.size()) * double(n) / tau);
  }
  return res;
}

}  // namespace tpreg

#include "tpreg/propriety.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "tpreg/numerics.hpp"
#include "tpreg/simplex.hpp"

namespace tpreg {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Satisfied: return "satisfied";
    case Verdict::Violated: return "violated";
    case Verdict::NumericallyChecked: return "numerically-checked";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

std::string ProprietyReport::to_text() const {
  std::ostringstream os;
  os << "posterior propriety: " << to_string(overall) << " (" << path << ")\n";
  for (const auto& c : conditions) {
    os << "  [" << to_string(c.verdict) << "] " << c.name;
    if (!c.required) os << " (informational)";
    if (!c.detail.empty()) os << ": " << c.detail;
    os << "\n";
  }
  return os.str();
}

std::string ProprietyReport::to_json() const {
  nlohmann::json j;
  j["overall"] = to_string(overall);
  j["path"] = path;
  j["conditions"] = nlohmann::json::array();
  for (const auto& c : conditions)
    j["conditions"].push_back({{"name", c.name},
                               {"verdict", to_string(c.verdict)},
                               {"detail", c.detail},
                               {"required", c.required}});
  return j.dump(2);
}

ConditionResult check_column_space(const Eigen::VectorXd& y_o, const Eigen::MatrixXd& X_o,
                                   double tol) {
  ConditionResult r{"response-not-in-column-space", Verdict::Unknown, "", true};
  if (y_o.size() != X_o.rows() || y_o.size() == 0) {
    r.detail = "dimension mismatch or empty sample";
    return r;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X_o);
  qr.setThreshold(1e-10);
  if (qr.rank() < X_o.cols()) {
    r.detail = "design submatrix is rank deficient; least squares not unique";
    return r;
  }
  const Eigen::VectorXd beta_hat = qr.solve(y_o);
  const double resid = (y_o - X_o * beta_hat).norm();
  const double scale = y_o.norm();
  std::ostringstream os;
  os << "relative residual " << (scale > 0 ? resid / scale : resid) << " vs tol " << tol;
  r.detail = os.str();
  r.verdict = (resid > tol * scale) ? Verdict::Satisfied : Verdict::Violated;
  return r;
}

ConditionResult check_sample_size(std::size_t n_o, std::size_t p, double q,
                                  const BaselineKind& baseline) {
  ConditionResult r{"sample-size", Verdict::Unknown, "", true};
  std::ostringstream os;
  const bool nll = baseline.tag == Baseline::Normal || baseline.tag == Baseline::Logistic ||
                   baseline.tag == Baseline::Laplace;
  if (q == 1.0) {
    os << "n=" << n_o << " > p=" << p << " required (q=1, SMN baseline)";
    r.verdict = (double(n_o) > double(p)) ? Verdict::Satisfied : Verdict::Violated;
  } else if (q >= 1.0 && nll) {
    os << "n=" << n_o << " > p+1-q=" << (double(p) + 1.0 - q) << " required";
    r.verdict = (double(n_o) > double(p) + 1.0 - q) ? Verdict::Satisfied : Verdict::Violated;
  } else {
    os << "no sample-size criterion covers q=" << q << " with baseline "
       << to_string(baseline);
  }
  r.detail = os.str();
  return r;
}

namespace {

// stabilized quadrature of  w(gamma)^{n+q-1} / (a+b)^n * pi(gamma)  over the
// gamma domain, where w is max{a,b} for condition (iii) and min{a,b} for (ii)
Verdict stabilized_integral(SkewParameterisation p, double q, std::size_t n, double a0,
                            double b0, bool use_max, std::string* detail) {
  const double expo = double(n) + q - 1.0;
  auto integrand = [&](double g) {
    const auto [a, b] = ab(g, p);
    const double w = use_max ? std::max(a, b) : std::min(a, b);
    const double logv = expo * std::log(w) - double(n) * std::log(a + b) +
                        gamma_logprior(g, a0, b0, p);
    return std::exp(logv);
  };
  double prev = 0.0;
  bool stabilized = false;
  double value = 0.0;
  for (int level = 1; level <= 12; ++level) {
    double lo, hi;
    if (p == SkewParameterisation::EpsilonSkew) {
      const double eps = std::pow(10.0, -double(level) - 1.0);
      lo = -1.0 + eps;
      hi = 1.0 - eps;
    } else {
      const double big = std::pow(10.0, double(level));
      lo = 1.0 / big;
      hi = big;
    }
    value = num::integrate(integrand, lo, hi, 1e-10);
    if (level > 1 && std::fabs(value - prev) <= 1e-8 * std::max(1.0, std::fabs(value))) {
      stabilized = true;
      break;
    }
    prev = value;
  }
  std::ostringstream os;
  os << "integral " << (stabilized ? "stabilized at " : "did not stabilize; last value ")
     << value << " (advisory: quadrature cannot prove finiteness)";
  *detail = os.str();
  return stabilized ? Verdict::NumericallyChecked : Verdict::Unknown;
}

ConditionResult check_condition_common(SkewParameterisation p, double q, std::size_t n,
                                       double a0, double b0, bool use_max) {
  ConditionResult r{use_max ? "condition-iii-skew-integral" : "condition-ii-skew-integral",
                    Verdict::Unknown, "", use_max};
  if (q == 1.0) {
    r.verdict = Verdict::Satisfied;
    r.detail = "q = 1: holds for any parameterisation";
    return r;
  }
  if (p == SkewParameterisation::EpsilonSkew && q >= 1.0) {
    r.verdict = Verdict::Satisfied;
    r.detail = "bounded a(.), b(.) with q >= 1";
    return r;
  }
  r.verdict = stabilized_integral(p, q, n, a0, b0, use_max, &r.detail);
  return r;
}

}  // namespace

ConditionResult check_condition_iii(SkewParameterisation p, double q, std::size_t n,
                                    double a0, double b0) {
  return check_condition_common(p, q, n, a0, b0, true);
}

ConditionResult check_condition_ii(SkewParameterisation p, double q, std::size_t n,
                                   double a0, double b0) {
  auto r = check_condition_common(p, q, n, a0, b0, false);
  r.required = false;
  return r;
}

ConditionResult check_interval_lp(const Eigen::MatrixXd& X_I, const Eigen::VectorXd& lo,
                                  const Eigen::VectorXd& hi) {
  ConditionResult r{"interval-box-disjoint-from-column-space", Verdict::Unknown, "", true};
  if (X_I.rows() == 0) {
    r.detail = "no interval-censored observations";
    return r;
  }
  switch (band_feasible(X_I, lo, hi)) {
    case LpStatus::Infeasible:
      r.verdict = Verdict::Satisfied;
      r.detail = "LP infeasible: censoring box and column space are disjoint";
      break;
    case LpStatus::Feasible:
      r.verdict = Verdict::Violated;
      r.detail = "LP feasible: some eta places X eta inside every interval";
      break;
    case LpStatus::Degenerate:
      r.verdict = Verdict::Unknown;
      r.detail = "simplex returned a degenerate/inconclusive status";
      break;
  }
  return r;
}

ProprietyReport propriety_report(const Dataset& data, const ModelSpec& spec,
                                 double column_space_tol) {
  spec.validate();
  ProprietyReport rep;

  std::vector<Eigen::Index> exact_rows, interval_rows;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    if (data.obs[i].kind == CensoredObservation::Kind::Exact) exact_rows.push_back(i);
    if (data.obs[i].kind == CensoredObservation::Kind::Interval) interval_rows.push_back(i);
  }
  const std::size_t n_o = exact_rows.size();
  const std::size_t n_I = interval_rows.size();
  const std::size_t p = std::size_t(data.p());

  if (n_o > 0) {
    rep.path = "uncensored sub-sample";
    Eigen::VectorXd y_o(n_o);
    Eigen::MatrixXd X_o(n_o, data.p());
    for (std::size_t k = 0; k < n_o; ++k) {
      y_o[k] = data.obs[exact_rows[k]].value();
      X_o.row(k) = data.design.row(exact_rows[k]);
    }
    rep.conditions.push_back(check_column_space(y_o, X_o, column_space_tol));
    rep.conditions.push_back(check_sample_size(n_o, p, spec.q, spec.baseline));
  } else if (n_I > 0) {
    rep.path = "interval-censored sub-sample";
    Eigen::MatrixXd X_I(n_I, data.p());
    Eigen::VectorXd lo(n_I), hi(n_I);
    for (std::size_t k = 0; k < n_I; ++k) {
      X_I.row(k) = data.design.row(interval_rows[k]);
      lo[k] = data.obs[interval_rows[k]].lo;
      hi[k] = data.obs[interval_rows[k]].hi;
    }
    rep.conditions.push_back(check_interval_lp(X_I, lo, hi));
    rep.conditions.push_back(check_sample_size(n_I, p, spec.q, spec.baseline));
  } else {
    rep.path = "no applicable sufficient conditions";
    rep.overall = Verdict::Unknown;
    rep.conditions.push_back(
        {"sufficient-conditions-coverage", Verdict::Unknown,
         "sample has neither uncensored nor interval-censored observations", true});
    return rep;
  }

  if (spec.has_gamma()) {
    rep.conditions.push_back(check_condition_iii(spec.parameterisation, spec.q,
                                                 n_o > 0 ? n_o : n_I, spec.gamma_a0,
                                                 spec.gamma_b0));
    rep.conditions.push_back(check_condition_ii(spec.parameterisation, spec.q,
                                                n_o > 0 ? n_o : n_I, spec.gamma_a0,
                                                spec.gamma_b0));
  }

  bool any_violated = false, all_ok = true;
  for (const auto& c : rep.conditions) {
    if (!c.required) continue;
    if (c.verdict == Verdict::Violated) any_violated = true;
    if (c.verdict != Verdict::Satisfied && c.verdict != Verdict::NumericallyChecked)
      all_ok = false;
  }
  rep.overall = any_violated ? Verdict::Violated
                             : (all_ok ? Verdict::Satisfied : Verdict::Unknown);
  return rep;
}

}  // namespace tpreg

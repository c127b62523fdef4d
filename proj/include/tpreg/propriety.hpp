#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "tpreg/model.hpp"

namespace tpreg {

enum class Verdict { Satisfied, Violated, NumericallyChecked, Unknown };

std::string to_string(Verdict v);

struct ConditionResult {
  std::string name;
  Verdict verdict = Verdict::Unknown;
  std::string detail;
  bool required = true;  // informational conditions never change the overall verdict
};

// Structured posterior-propriety certificate: one entry per sufficient
// condition that applies to the given data/model combination.
struct ProprietyReport {
  std::vector<ConditionResult> conditions;
  Verdict overall = Verdict::Unknown;
  std::string path;  // which set of sufficient conditions was applied

  std::string to_text() const;
  std::string to_json() const;
};

// y not in the column space of X: least-squares residual norm must exceed
// tol * ||y||. Rank-deficient designs give Unknown.
ConditionResult check_column_space(const Eigen::VectorXd& y_o, const Eigen::MatrixXd& X_o,
                                   double tol = 1e-8);

// sample-size conditions n_o > p (q = 1, any SMN baseline) or
// n_o > p + 1 - q (q >= 1; normal / logistic / laplace baselines)
ConditionResult check_sample_size(std::size_t n_o, std::size_t p, double q,
                                  const BaselineKind& baseline);

// finiteness of  ∫ H(γ)^{n+q-1} / [a(γ)+b(γ)]^n π(γ) dγ  with H = max{a,b};
// closed-form cases first, then stabilized quadrature on widening domains
ConditionResult check_condition_iii(SkewParameterisation p, double q, std::size_t n,
                                    double a0, double b0);

// condition (ii) (necessary; h = min{a,b}); informational in reports
ConditionResult check_condition_ii(SkewParameterisation p, double q, std::size_t n,
                                   double a0, double b0);

// Disjointness of the interval-censoring box and the column space of X_I,
// via infeasibility of  lo <= X_I eta <= hi  (bounds on the model / log-time
// scale). Infeasible = Satisfied (posterior proper), feasible = Violated.
ConditionResult check_interval_lp(const Eigen::MatrixXd& X_I, const Eigen::VectorXd& lo,
                                  const Eigen::VectorXd& hi);

ProprietyReport propriety_report(const Dataset& data, const ModelSpec& spec,
                                 double column_space_tol = 1e-8);

}  // namespace tpreg

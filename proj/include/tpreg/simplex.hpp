#pragma once

#include <Eigen/Dense>

namespace tpreg {

enum class LpStatus { Feasible, Infeasible, Degenerate };

// Feasibility of  l <= X eta <= u  with eta free, decided by a dense
// two-phase simplex with Bland's rule. Problem sizes here are tiny (the
// interval-censored propriety check), so no sparsity or scaling tricks.
LpStatus band_feasible(const Eigen::MatrixXd& X, const Eigen::VectorXd& l,
                       const Eigen::VectorXd& u);

}  // namespace tpreg

#include "tpreg/simplex.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace tpreg {

namespace {

constexpr double kEps = 1e-9;

struct PhaseOneResult {
  bool ok = false;
  double infeasibility = 0.0;
};

// Phase-one simplex on  A z = b, z >= 0  with artificials; minimizes the sum
// of artificial variables. ok = false when the pivot guard trips.
PhaseOneResult phase_one(Eigen::MatrixXd A, Eigen::VectorXd b) {
  const Eigen::Index m = A.rows();
  const Eigen::Index nz = A.cols();
  for (Eigen::Index i = 0; i < m; ++i)
    if (b[i] < 0.0) { A.row(i) = -A.row(i); b[i] = -b[i]; }

  // tableau: [A | I | b], objective = sum of artificial variables
  const Eigen::Index ncol = nz + m;
  Eigen::MatrixXd T(m + 1, ncol + 1);
  T.setZero();
  T.block(0, 0, m, nz) = A;
  T.block(0, nz, m, m) = Eigen::MatrixXd::Identity(m, m);
  T.block(0, ncol, m, 1) = b;
  // objective row: minimize sum of artificials => reduced costs of the basis
  for (Eigen::Index j = 0; j <= ncol; ++j) T(m, j) = -T.block(0, j, m, 1).sum();
  for (Eigen::Index i = 0; i < m; ++i) T(m, nz + i) = 0.0;

  std::vector<Eigen::Index> basis(m);
  for (Eigen::Index i = 0; i < m; ++i) basis[i] = nz + i;

  const Eigen::Index max_pivots = 2000 + 50 * (m + ncol);
  for (Eigen::Index pivots = 0;; ++pivots) {
    if (pivots > max_pivots) return {};  // cycling / stall guard tripped
    // Bland: entering variable = lowest index with negative reduced cost
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < ncol; ++j)
      if (T(m, j) < -kEps) { enter = j; break; }
    if (enter < 0) break;
    // ratio test, ties broken by lowest basis index (Bland)
    Eigen::Index leave = -1;
    double best = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (T(i, enter) <= kEps) continue;
      const double ratio = T(i, ncol) / T(i, enter);
      if (leave < 0 || ratio < best - 1e-15 ||
          (std::fabs(ratio - best) <= 1e-15 && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave < 0) return {};  // unbounded phase-one: numerical trouble
    // pivot
    T.row(leave) /= T(leave, enter);
    for (Eigen::Index i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double f = T(i, enter);
      if (f != 0.0) T.row(i) -= f * T.row(leave);
    }
    basis[leave] = enter;
  }
  return {true, std::max(0.0, -T(m, ncol))};
}

}  // namespace

LpStatus band_feasible(const Eigen::MatrixXd& X, const Eigen::VectorXd& l,
                       const Eigen::VectorXd& u) {
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  if (l.size() != n || u.size() != n)
    throw std::invalid_argument("band_feasible: bound size mismatch");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(l[i]) || !std::isfinite(u[i]))
      throw std::invalid_argument("band_feasible: bounds must be finite");
    if (!(l[i] < u[i])) throw std::invalid_argument("band_feasible: need l < u");
  }

  // eta = eta+ - eta-, slack s in [0, u-l]:  X eta - s = l, s + t = u - l
  // variables z = (eta+, eta-, s, t) >= 0
  const Eigen::Index nz = 2 * p + 2 * n;
  Eigen::MatrixXd A(2 * n, nz);
  Eigen::VectorXd b(2 * n);
  A.setZero();
  A.block(0, 0, n, p) = X;
  A.block(0, p, n, p) = -X;
  A.block(0, 2 * p, n, n) = -Eigen::MatrixXd::Identity(n, n);
  b.head(n) = l;
  A.block(n, 2 * p, n, n) = Eigen::MatrixXd::Identity(n, n);
  A.block(n, 2 * p + n, n, n) = Eigen::MatrixXd::Identity(n, n);
  b.tail(n) = u - l;

  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  const auto res = phase_one(std::move(A), std::move(b));
  if (!res.ok) return LpStatus::Degenerate;
  if (res.infeasibility <= 1e-8 * scale) return LpStatus::Feasible;
  if (res.infeasibility >= 1e-6 * scale) return LpStatus::Infeasible;
  return LpStatus::Degenerate;  // inconclusive band
}

}  // namespace tpreg

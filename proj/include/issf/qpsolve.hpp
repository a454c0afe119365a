#pragma once

#include <string>
#include <vector>

#include "issf/constraint.hpp"

namespace issf {

/// minimize 1/2 z^T H z + F^T z subject to the rows.
struct QpInstance {
  Matrix H;
  Vector F;
  std::vector<ConstraintRow> rows;
};

enum class QpStatus { Optimal, Infeasible };

const char* to_string(QpStatus status);

struct QpSolution {
  Vector z;
  QpStatus status = QpStatus::Infeasible;
  std::vector<int> active;           ///< row indices, ascending
  std::vector<double> multipliers;   ///< one per active row, >= 0 at optimum
  double objective = 0.0;
};

/// Maximum residual of each KKT condition.
struct KktReport {
  double stationarity = 0.0;
  double primal = 0.0;
  double dual = 0.0;
  double complementarity = 0.0;

  double worst() const;
  bool ok(double tol) const { return worst() <= tol; }
};

inline constexpr int kMaxQpRows = 8;

/// Exact global solve by active-set enumeration over all 2^rows subsets.
/// Throws Usage when H is not symmetric positive definite or there are more
/// than kMaxQpRows rows. When no subset yields a feasible KKT point, a
/// least-violation probe decides between Optimal and Infeasible.
QpSolution solve(const QpInstance& qp);

/// Recomputes the KKT residuals of `sol` against `qp`. Multipliers act on the
/// rows normalized to >= form.
KktReport verify_kkt(const QpInstance& qp, const QpSolution& sol);

double objective(const QpInstance& qp, const Vector& z);

}  // namespace issf

#include "issf/qpsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace issf {

namespace {

constexpr double kPivotThreshold = 1e-12;
constexpr double kMultiplierTol = 1e-10;
constexpr double kFeasibilityTol = 1e-9;
constexpr double kProbePenalty = 1e6;
constexpr double kProbeViolationTol = 1e-9;

struct Normalized {
  Matrix A;  // rows in >= form
  Vector b;
};

Normalized normalize(const QpInstance& qp) {
  const auto k = qp.H.rows();
  Normalized out{Matrix(static_cast<Eigen::Index>(qp.rows.size()), k),
                 Vector(static_cast<Eigen::Index>(qp.rows.size()))};
  for (std::size_t i = 0; i < qp.rows.size(); ++i) {
    const ConstraintRow& row = qp.rows[i];
    if (row.a_u.size() + 1 != k) {
      throw Error(ErrorKind::Shape, "constraint row " + std::to_string(i) + " has " +
                                        std::to_string(row.a_u.size() + 1) +
                                        " coefficients, QP has " + std::to_string(k) +
                                        " variables");
    }
    const double s = row.sense == Sense::GreaterEqual ? 1.0 : -1.0;
    out.A.row(static_cast<Eigen::Index>(i)) = s * row.coefficients().transpose();
    out.b(static_cast<Eigen::Index>(i)) = s * row.rhs;
  }
  return out;
}

struct Candidate {
  Vector z;
  std::vector<int> active;
  std::vector<double> multipliers;
  double objective;
};

double quad_objective(const Matrix& H, const Vector& F, const Vector& z) {
  return 0.5 * z.dot(H * z) + F.dot(z);
}

// Minimum over all subsets S of rows whose equality-constrained KKT point is
// primal feasible with nonnegative multipliers. Ties keep the earliest subset.
std::optional<Candidate> enumerate(const Eigen::LLT<Matrix>& llt, const Matrix& H,
                                   const Vector& F, const Matrix& A, const Vector& b) {
  const auto k = H.rows();
  const int r = static_cast<int>(A.rows());
  const Vector z_free = -llt.solve(F);
  std::optional<Candidate> best;

  for (unsigned mask = 0; mask < (1u << r); ++mask) {
    std::vector<int> subset;
    for (int i = 0; i < r; ++i) {
      if (mask & (1u << i)) subset.push_back(i);
    }
    const auto s = static_cast<Eigen::Index>(subset.size());
    if (s > k) continue;

    Vector z = z_free;
    Vector lambda(s);
    if (s > 0) {
      Matrix As(s, k);
      Vector bs(s);
      for (Eigen::Index j = 0; j < s; ++j) {
        As.row(j) = A.row(subset[static_cast<std::size_t>(j)]);
        bs(j) = b(subset[static_cast<std::size_t>(j)]);
      }
      const Matrix HinvAt = llt.solve(As.transpose());
      const Matrix schur = As * HinvAt;
      Eigen::FullPivLU<Matrix> lu(schur);
      lu.setThreshold(kPivotThreshold);
      if (lu.rank() < s) continue;
      lambda = lu.solve(bs - As * z_free);
      z = z_free + HinvAt * lambda;
    }

    if ((lambda.array() < -kMultiplierTol).any()) continue;
    bool feasible = true;
    for (int i = 0; i < r && feasible; ++i) {
      feasible = A.row(i).dot(z) - b(i) >= -kFeasibilityTol * (1.0 + std::abs(b(i)));
    }
    if (!feasible) continue;

    const double obj = quad_objective(H, F, z);
    if (!best || obj < best->objective) {
      Candidate c{z, subset, {}, obj};
      for (Eigen::Index j = 0; j < s; ++j) c.multipliers.push_back(std::max(0.0, lambda(j)));
      best = std::move(c);
    }
  }
  return best;
}

}  // namespace

const char* to_string(QpStatus status) {
  return status == QpStatus::Optimal ? "optimal" : "infeasible";
}

double KktReport::worst() const {
  return std::max({stationarity, primal, dual, complementarity});
}

double objective(const QpInstance& qp, const Vector& z) { return quad_objective(qp.H, qp.F, z); }

QpSolution solve(const QpInstance& qp) {
  const auto k = qp.H.rows();
  if (k == 0 || qp.H.cols() != k || qp.F.size() != k) {
    throw Error(ErrorKind::Shape, "QP needs square H and F of matching size");
  }
  if (static_cast<int>(qp.rows.size()) > kMaxQpRows) {
    throw Error(ErrorKind::Usage, "QP has " + std::to_string(qp.rows.size()) +
                                      " rows, at most " + std::to_string(kMaxQpRows) +
                                      " are supported");
  }
  if (!qp.H.allFinite() || !qp.F.allFinite()) {
    throw Error(ErrorKind::Numerics, "QP objective has non-finite entries");
  }
  if ((qp.H - qp.H.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + qp.H.cwiseAbs().maxCoeff())) {
    throw Error(ErrorKind::Usage, "QP Hessian is not symmetric");
  }
  const Eigen::LLT<Matrix> llt(qp.H);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::Usage, "QP Hessian is not positive definite");
  }
  const Normalized rows = normalize(qp);
  if (!rows.A.allFinite() || !rows.b.allFinite()) {
    throw Error(ErrorKind::Numerics, "QP constraint rows have non-finite entries");
  }

  if (auto best = enumerate(llt, qp.H, qp.F, rows.A, rows.b)) {
    return {best->z, QpStatus::Optimal, best->active, best->multipliers, best->objective};
  }

  // Least-violation probe over (z, t): rows a.z + t >= b, t >= 0, with an
  // exact linear penalty on t. t* = 0 iff the original rows are feasible.
  const int r = static_cast<int>(rows.A.rows());
  Matrix Hp = Matrix::Zero(k + 1, k + 1);
  Hp.topLeftCorner(k, k) = qp.H;
  Hp(k, k) = 1.0;
  Vector Fp(k + 1);
  Fp << qp.F, kProbePenalty;
  Matrix Ap = Matrix::Zero(r + 1, k + 1);
  Ap.topLeftCorner(r, k) = rows.A;
  Ap.col(k).head(r).setOnes();
  Ap(r, k) = 1.0;
  Vector bp(r + 1);
  bp << rows.b, 0.0;
  const Eigen::LLT<Matrix> llt_probe(Hp);
  const auto probe = enumerate(llt_probe, Hp, Fp, Ap, bp);

  QpSolution sol;
  if (!probe) {
    sol.z = Vector::Zero(k);
    sol.status = QpStatus::Infeasible;
    return sol;
  }
  sol.z = probe->z.head(k);
  if (probe->z(k) > kProbeViolationTol) {
    sol.status = QpStatus::Infeasible;
    sol.objective = objective(qp, sol.z);
    return sol;
  }
  sol.status = QpStatus::Optimal;
  sol.objective = objective(qp, sol.z);
  for (std::size_t j = 0; j < probe->active.size(); ++j) {
    if (probe->active[j] < r) {
      sol.active.push_back(probe->active[j]);
      sol.multipliers.push_back(probe->multipliers[j]);
    }
  }
  return sol;
}

KktReport verify_kkt(const QpInstance& qp, const QpSolution& sol) {
  const Normalized rows = normalize(qp);
  const auto r = rows.A.rows();
  Vector lambda = Vector::Zero(r);
  KktReport report;
  for (std::size_t j = 0; j < sol.active.size(); ++j) {
    const int idx = sol.active[j];
    const double l = j < sol.multipliers.size() ? sol.multipliers[j] : 0.0;
    if (idx < 0 || idx >= r) throw Error(ErrorKind::Usage, "active index out of range");
    lambda(idx) = l;
    report.dual = std::max(report.dual, -l);
  }
  const Vector grad = qp.H * sol.z + qp.F - rows.A.transpose() * lambda;
  report.stationarity = grad.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < r; ++i) {
    const double slack = rows.A.row(i).dot(sol.z) - rows.b(i);
    report.primal = std::max(report.primal, -slack);
    report.complementarity = std::max(report.complementarity, std::abs(lambda(i) * slack));
  }
  return report;
}

}  // namespace issf

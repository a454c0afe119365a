#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <random>

#include <Eigen/Dense>

#include "issf/qpsolve.hpp"

namespace oracle {

using issf::Matrix;
using issf::Vector;

struct Dense {
  Matrix A;  // rows in >= form
  Vector b;
};

inline Dense to_dense(const issf::QpInstance& qp) {
  const auto k = qp.H.rows();
  Dense d{Matrix(static_cast<Eigen::Index>(qp.rows.size()), k),
          Vector(static_cast<Eigen::Index>(qp.rows.size()))};
  for (std::size_t i = 0; i < qp.rows.size(); ++i) {
    const auto& row = qp.rows[i];
    Vector a(k);
    a.head(k - 1) = row.a_u;
    a(k - 1) = row.a_delta;
    const double s = row.sense == issf::Sense::GreaterEqual ? 1.0 : -1.0;
    d.A.row(static_cast<Eigen::Index>(i)) = s * a.transpose();
    d.b(static_cast<Eigen::Index>(i)) = s * row.rhs;
  }
  return d;
}

inline double value_at(const issf::QpInstance& qp, const Vector& z) {
  return 0.5 * z.dot(qp.H * z) + qp.F.dot(z);
}

struct Result {
  Vector z;
  double objective;
};

/// KKT enumeration by the null-space method: for each subset S, parametrize
/// {A_S z = b_S} as z_p + Z y via an SVD of A_S, minimize the reduced
/// quadratic, recover multipliers by least squares, keep the best admissible
/// point.
inline std::optional<Result> kkt_enumeration(const issf::QpInstance& qp) {
  const Dense d = to_dense(qp);
  const auto k = qp.H.rows();
  const int r = static_cast<int>(d.A.rows());
  std::optional<Result> best;
  for (int mask = 0; mask < (1 << r); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < r; ++i) {
      if (mask & (1 << i)) idx.push_back(i);
    }
    const auto s = static_cast<Eigen::Index>(idx.size());
    Matrix As(s, k);
    Vector bs(s);
    for (Eigen::Index j = 0; j < s; ++j) {
      As.row(j) = d.A.row(idx[static_cast<std::size_t>(j)]);
      bs(j) = d.b(idx[static_cast<std::size_t>(j)]);
    }
    Vector z;
    if (s == 0) {
      z = qp.H.ldlt().solve(-qp.F);
    } else {
      Eigen::JacobiSVD<Matrix> svd(As, Eigen::ComputeFullU | Eigen::ComputeFullV);
      const Vector sv = svd.singularValues();
      Eigen::Index rank = 0;
      for (Eigen::Index j = 0; j < sv.size(); ++j) {
        if (sv(j) > 1e-10 * std::max(1.0, sv(0))) ++rank;
      }
      if (rank < s) continue;
      const Vector zp = svd.solve(bs);
      const Matrix Z = svd.matrixV().rightCols(k - rank);
      if (Z.cols() == 0) {
        z = zp;
      } else {
        const Matrix Hr = Z.transpose() * qp.H * Z;
        const Vector gr = Z.transpose() * (qp.H * zp + qp.F);
        z = zp + Z * Hr.ldlt().solve(-gr);
      }
      const Vector lambda =
          As.transpose().colPivHouseholderQr().solve(qp.H * z + qp.F);
      if ((lambda.array() < -1e-9).any()) continue;
    }
    const double scale = 1.0 + (d.b.size() ? d.b.cwiseAbs().maxCoeff() : 0.0);
    if (((d.A * z - d.b).array() < -1e-9 * scale).any()) continue;
    const double obj = value_at(qp, z);
    if (!best || obj < best->objective) best = Result{z, obj};
  }
  return best;
}

/// Brute-force grid search with successive refinement around the incumbent.
/// The first level is densified (up to 4 times) until it hits the feasible
/// set, so thin slabs are not missed. Returns the best feasible grid point
/// found; an upper bound on the optimum.
inline std::optional<Result> grid_search(const issf::QpInstance& qp, double radius,
                                         int per_axis, int levels) {
  const Dense d = to_dense(qp);
  const auto k = qp.H.rows();
  bool found = false;
  Result best{Vector::Zero(k), std::numeric_limits<double>::infinity()};
  double half = radius;
  int densify = 0;
  for (int level = 0; level < levels; ++level) {
    const Vector center = best.z;
    std::vector<int> counter(static_cast<std::size_t>(k), 0);
    for (bool done = false; !done;) {
      Vector z(k);
      for (Eigen::Index j = 0; j < k; ++j) {
        z(j) = center(j) - half + 2.0 * half * counter[static_cast<std::size_t>(j)] / (per_axis - 1);
      }
      if (d.A.rows() == 0 || ((d.A * z - d.b).array() >= 0.0).all()) {
        const double obj = value_at(qp, z);
        if (obj < best.objective) {
          best = Result{z, obj};
          found = true;
        }
      }
      done = true;
      for (int& c : counter) {
        if (++c < per_axis) {
          done = false;
          break;
        }
        c = 0;
      }
    }
    if (!found) {
      if (level > 0 || densify == 4) return std::nullopt;
      ++densify;
      per_axis = 2 * per_axis - 1;
      --level;
      continue;
    }
    half *= 4.0 / (per_axis - 1);
  }
  return best;
}

/// Random strictly convex instance with H = M^T M + I and rows that keep a
/// random point feasible.
inline issf::QpInstance random_instance(std::mt19937_64& rng, int k, int rows) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  issf::QpInstance qp;
  Matrix M(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) M(i, j) = u(rng);
  }
  qp.H = M.transpose() * M + Matrix::Identity(k, k);
  qp.F = Vector(k);
  for (int i = 0; i < k; ++i) qp.F(i) = 2.0 * u(rng);
  Vector feasible(k);
  for (int i = 0; i < k; ++i) feasible(i) = u(rng);
  for (int r = 0; r < rows; ++r) {
    issf::ConstraintRow row;
    row.a_u = Vector(k - 1);
    for (int i = 0; i < k - 1; ++i) row.a_u(i) = u(rng);
    row.a_delta = u(rng);
    row.sense = u(rng) > 0.0 ? issf::Sense::GreaterEqual : issf::Sense::LessEqual;
    const double value = row.coefficients().dot(feasible);
    const double margin = 0.5 * (u(rng) + 1.0);
    row.rhs = row.sense == issf::Sense::GreaterEqual ? value - margin + 0.6 : value + margin - 0.6;
    if (row.slack(feasible) < 0.0) row.rhs = value;
    qp.rows.push_back(row);
  }
  return qp;
}

}  // namespace oracle

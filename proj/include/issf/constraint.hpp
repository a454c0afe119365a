#pragma once

#include "issf/system.hpp"

namespace issf {

enum class Sense { GreaterEqual, LessEqual };

/// One affine inequality a_u . u + a_delta * delta (sense) rhs over the
/// decision vector z = (u, delta).
struct ConstraintRow {
  Vector a_u;
  double a_delta = 0.0;
  double rhs = 0.0;
  Sense sense = Sense::GreaterEqual;

  /// Coefficients over z = (u, delta).
  Vector coefficients() const {
    Vector a(a_u.size() + 1);
    a << a_u, a_delta;
    return a;
  }

  /// Signed slack; nonnegative iff z satisfies the row.
  double slack(const Vector& z) const {
    const double lhs = coefficients().dot(z);
    return sense == Sense::GreaterEqual ? lhs - rhs : rhs - lhs;
  }
};

}  // namespace issf

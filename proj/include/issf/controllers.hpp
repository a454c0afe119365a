#pragma once

#include <functional>
#include <limits>
#include <optional>

#include "issf/barrier.hpp"
#include "issf/qpsolve.hpp"

namespace issf {

/// A = L_f h + alpha(h), B = L_g h^T.
struct UniversalTerms {
  double A;
  Vector B;
};

UniversalTerms universal_terms(const SafeSetSpec& spec, const ControlAffineSystem& sys,
                               const Vector& x);

/// |B| below 1e-12 * max(1, |x|) counts as zero.
bool input_gain_vanishes(const Vector& B, const Vector& x);

/// k(x) + L_g h(x)^T.
Vector issf_feedback(const Feedback& k, const SafeSetSpec& spec, const ControlAffineSystem& sys,
                     const Vector& x);

/// Sontag-type input-to-state safeguarding formula
///   u = 0                                          if B = 0
///   u = (-A + sqrt(A^2 + |B|^4)) / |B|^2 * B + B   otherwise.
/// Throws Certificate when B = 0 and A < 0.
Vector universal_issf(const SafeSetSpec& spec, const ControlAffineSystem& sys, const Vector& x);

/// Smallest-norm u with L_f h + L_g h u >= -alpha(h): zero when A >= 0,
/// otherwise -A / |B|^2 * B. Throws Infeasible when B = 0 and A < 0.
Vector min_norm_safeguarding(const SafeSetSpec& spec, const ControlAffineSystem& sys,
                             const Vector& x);

/// Controller output for one step.
struct ControlOutput {
  Vector u;
  double delta = std::numeric_limits<double>::quiet_NaN();
  std::optional<QpStatus> status;  ///< set by QP controllers only
};

using Controller = std::function<ControlOutput(const Vector&)>;

Controller make_feedback_controller(Feedback k);
Controller make_issf_feedback_controller(Feedback k, SafeSetSpec spec, ControlAffineSystem sys);
Controller make_universal_controller(SafeSetSpec spec, ControlAffineSystem sys);
Controller make_min_norm_controller(SafeSetSpec spec, ControlAffineSystem sys);

/// L_f V + L_g V u <= -decay(x) + delta.
struct ClfConstraint {
  OutputMap V;
  std::function<double(const Vector&)> decay;
};

ConstraintRow clf_row(const ControlAffineSystem& sys, const ClfConstraint& clf, const Vector& x);

/// Pointwise CLF/CBF quadratic program over z = (u, delta):
///   minimize 1/2 z^T H z + F(x)^T z  s.t. the CLF row and the barrier row.
class ClfCbfQp {
 public:
  using RowBuilder = std::function<ConstraintRow(const Vector&)>;
  using LinearTerm = std::function<Vector(const Vector&)>;

  /// `linear` may be empty, meaning F = 0.
  ClfCbfQp(ControlAffineSystem sys, ClfConstraint clf, RowBuilder barrier_row, Matrix H,
           LinearTerm linear = {});

  QpInstance build(const Vector& x) const;
  /// Throws Infeasible when the QP has no feasible point at x.
  ControlOutput operator()(const Vector& x) const;

 private:
  ControlAffineSystem sys_;
  ClfConstraint clf_;
  RowBuilder barrier_row_;
  Matrix H_;
  LinearTerm linear_;
};

/// H = diag(u_weights..., p).
Matrix qp_weights(const Vector& u_weights, double p);

}  // namespace issf

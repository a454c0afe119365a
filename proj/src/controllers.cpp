#include "issf/controllers.hpp"

#include <cmath>
#include <sstream>

namespace issf {

namespace {

std::string describe_state(const Vector& x) {
  std::ostringstream os;
  os.precision(17);
  os << "[";
  for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x(i);
  os << "]";
  return os.str();
}

ControlOutput direct(Vector u) {
  ControlOutput out;
  out.u = std::move(u);
  return out;
}

}  // namespace

UniversalTerms universal_terms(const SafeSetSpec& spec, const ControlAffineSystem& sys,
                               const Vector& x) {
  spec.require_in_working_region(x);
  const Lie1 d = lie1(sys, spec.h, x);
  return {d.lf + spec.alpha(spec.h.value(x)), d.lg};
}

bool input_gain_vanishes(const Vector& B, const Vector& x) {
  return B.norm() <= 1e-12 * std::max(1.0, x.norm());
}

Vector issf_feedback(const Feedback& k, const SafeSetSpec& spec, const ControlAffineSystem& sys,
                     const Vector& x) {
  const Vector u = k(x);
  sys.check_input(u);
  return u + lie1(sys, spec.h, x).lg;
}

Vector universal_issf(const SafeSetSpec& spec, const ControlAffineSystem& sys, const Vector& x) {
  const UniversalTerms t = universal_terms(spec, sys, x);
  if (input_gain_vanishes(t.B, x)) {
    if (t.A < 0.0) {
      throw Error(ErrorKind::Certificate, "h is not a CBF at x = " + describe_state(x) +
                                              ": L_g h = 0 and L_f h + alpha(h) < 0");
    }
    return Vector::Zero(sys.m());
  }
  const double bb = t.B.squaredNorm();
  return ((-t.A + std::sqrt(t.A * t.A + bb * bb)) / bb) * t.B + t.B;
}

Vector min_norm_safeguarding(const SafeSetSpec& spec, const ControlAffineSystem& sys,
                             const Vector& x) {
  const UniversalTerms t = universal_terms(spec, sys, x);
  if (t.A >= 0.0) return Vector::Zero(sys.m());
  if (input_gain_vanishes(t.B, x)) {
    throw Error(ErrorKind::Infeasible, "no input satisfies the barrier condition at x = " +
                                           describe_state(x) + " (L_g h = 0)");
  }
  return (-t.A / t.B.squaredNorm()) * t.B;
}

Controller make_feedback_controller(Feedback k) {
  return [k = std::move(k)](const Vector& x) { return direct(k(x)); };
}

Controller make_issf_feedback_controller(Feedback k, SafeSetSpec spec, ControlAffineSystem sys) {
  return [k = std::move(k), spec = std::move(spec), sys = std::move(sys)](const Vector& x) {
    return direct(issf_feedback(k, spec, sys, x));
  };
}

Controller make_universal_controller(SafeSetSpec spec, ControlAffineSystem sys) {
  return [spec = std::move(spec), sys = std::move(sys)](const Vector& x) {
    return direct(universal_issf(spec, sys, x));
  };
}

Controller make_min_norm_controller(SafeSetSpec spec, ControlAffineSystem sys) {
  return [spec = std::move(spec), sys = std::move(sys)](const Vector& x) {
    return direct(min_norm_safeguarding(spec, sys, x));
  };
}

ConstraintRow clf_row(const ControlAffineSystem& sys, const ClfConstraint& clf, const Vector& x) {
  const Lie1 d = lie1(sys, clf.V, x);
  ConstraintRow row;
  row.a_u = d.lg;
  row.a_delta = -1.0;
  row.sense = Sense::LessEqual;
  row.rhs = -clf.decay(x) - d.lf;
  return row;
}

Matrix qp_weights(const Vector& u_weights, double p) {
  if (!(p > 0.0) || (u_weights.array() <= 0.0).any()) {
    throw Error(ErrorKind::Domain, "QP weights must be positive");
  }
  const auto m = u_weights.size();
  Matrix H = Matrix::Zero(m + 1, m + 1);
  H.diagonal().head(m) = u_weights;
  H(m, m) = p;
  return H;
}

ClfCbfQp::ClfCbfQp(ControlAffineSystem sys, ClfConstraint clf, RowBuilder barrier_row, Matrix H,
                   LinearTerm linear)
    : sys_(std::move(sys)),
      clf_(std::move(clf)),
      barrier_row_(std::move(barrier_row)),
      H_(std::move(H)),
      linear_(std::move(linear)) {
  if (H_.rows() != sys_.m() + 1 || H_.cols() != sys_.m() + 1) {
    throw Error(ErrorKind::Shape, "QP weight matrix must be (m+1)x(m+1)");
  }
}

QpInstance ClfCbfQp::build(const Vector& x) const {
  QpInstance qp;
  qp.H = H_;
  qp.F = linear_ ? linear_(x) : Vector::Zero(sys_.m() + 1);
  qp.rows = {clf_row(sys_, clf_, x), barrier_row_(x)};
  return qp;
}

ControlOutput ClfCbfQp::operator()(const Vector& x) const {
  const QpInstance qp = build(x);
  const QpSolution sol = solve(qp);
  if (sol.status != QpStatus::Optimal) {
    throw Error(ErrorKind::Infeasible, "CLF/CBF QP infeasible at x = " + describe_state(x));
  }
  const auto m = sys_.m();
  return ControlOutput{sol.z.head(m), sol.z(m), sol.status};
}

}  // namespace issf

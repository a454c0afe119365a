#include "issf/models.hpp"

#include <cmath>

namespace issf::models {

namespace {

Vector scalar(double v) { return Vector::Constant(1, v); }

}  // namespace

ControlAffineSystem scalar_system() {
  return ControlAffineSystem(
      1, 1, [](const Vector& x) { return scalar(-x(0)); },
      [](const Vector& x) { return Matrix::Constant(1, 1, x(0) * x(0)); }, "scalar");
}

OutputMap scalar_barrier() {
  OutputMap h;
  h.value = [](const Vector& x) { return 2.0 - x(0); };
  h.grad = [](const Vector&) { return scalar(-1.0); };
  return h;
}

SafeSetSpec scalar_safe_set(double lambda) {
  return SafeSetSpec{scalar_barrier(), ComparisonFunction::linear(lambda), Bound::unbounded(),
                     Bound::unbounded()};
}

ComparisonFunction quarter_square_gain() {
  return ComparisonFunction::class_k_inf([](double s) { return 0.25 * s * s; });
}

ControlAffineSystem arctan_system() {
  return ControlAffineSystem(
      1, 1, [](const Vector& x) { return scalar(-std::atan(x(0))); },
      [](const Vector&) { return Matrix::Constant(1, 1, 1.0); }, "arctan");
}

OutputMap arctan_barrier() {
  OutputMap h;
  h.value = [](const Vector& x) { return 4.0 - x(0) * x(0); };
  h.grad = [](const Vector& x) { return scalar(-2.0 * x(0)); };
  return h;
}

OutputMap arctan_clf() {
  OutputMap V;
  V.value = [](const Vector& x) { return x(0) * std::atan(x(0)); };
  V.grad = [](const Vector& x) {
    const double v = x(0);
    return scalar(std::atan(v) + v / (1.0 + v * v));
  };
  return V;
}

ComparisonFunction arctan_alpha() {
  const double offset = 2.0 * std::atan(2.0);
  auto eval = [offset](double h) {
    const double s = std::sqrt(std::max(0.0, 4.0 - h));
    return 2.0 * (offset - s * std::atan(s));
  };
  return ComparisonFunction(eval, Bound::unbounded(), Bound::at(4.0), ComparisonKind::ExtendedK,
                            /*hi_closed=*/true);
}

SafeSetSpec arctan_safe_set() {
  return SafeSetSpec{arctan_barrier(), arctan_alpha(), Bound::unbounded(), Bound::at(4.0)};
}

ClfConstraint arctan_clf_constraint(double gain) {
  return ClfConstraint{arctan_clf(), [gain](const Vector& x) { return gain * x.squaredNorm(); }};
}

OutputMap robot_barrier(const RobotParams& params, double r_star) {
  OutputMap h;
  h.value = [r_star](const Vector& x) { return r_star - x(1); };
  h.grad = [](const Vector&) {
    Vector g = Vector::Zero(4);
    g(1) = -1.0;
    return g;
  };
  h.relative_degree = 2;
  // L_f h = -rdot, so L_f^2 h = -(drift of rdot) = -r thetadot^2.
  h.lf2 = [](const Vector& x) { return -x(1) * x(2) * x(2); };
  h.lglf = [m = params.m](const Vector&) {
    Vector g(2);
    g << 0.0, -1.0 / m;
    return g;
  };
  return h;
}

OutputMap robot_clf(const RobotTask& task) {
  OutputMap V;
  V.value = [task](const Vector& x) {
    const Eigen::Vector2d e = x.head<2>() - task.q_d;
    const Eigen::Vector2d qd = x.tail<2>();
    return e.dot(task.Kp.cwiseProduct(e)) + qd.dot(robot_inertia(task.params, x(1)) * qd);
  };
  V.grad = [task](const Vector& x) {
    const Eigen::Vector2d e = x.head<2>() - task.q_d;
    const Eigen::Matrix2d D = robot_inertia(task.params, x(1));
    const double r = x(1);
    const double thetadot = x(2);
    Vector g(4);
    g(0) = 2.0 * task.Kp(0) * e(0);
    g(1) = 2.0 * task.Kp(1) * e(1) + 2.0 * task.params.m * r * thetadot * thetadot;
    g(2) = 2.0 * D(0, 0) * thetadot;
    g(3) = 2.0 * D(1, 1) * x(3);
    return g;
  };
  return V;
}

ClfConstraint robot_clf_constraint(const RobotTask& task) {
  return ClfConstraint{robot_clf(task), [Kd = task.Kd](const Vector& x) {
                         const Eigen::Vector2d qd = x.tail<2>();
                         return qd.dot(Kd.cwiseProduct(qd));
                       }};
}

Vector robot_pd_reference(const RobotTask& task, const Vector& x) {
  const Eigen::Vector2d e = x.head<2>() - task.q_d;
  const Eigen::Vector2d qd = x.tail<2>();
  return -(task.Kp.cwiseProduct(e) + task.Kd.cwiseProduct(qd));
}

}  // namespace issf::models

#pragma once

#include "issf/barrier.hpp"
#include "issf/controllers.hpp"

/// The three benchmark plants with their analytic certificates.
namespace issf::models {

// Scalar plant xdot = -x + x^2 u with h = 2 - x.
ControlAffineSystem scalar_system();
OutputMap scalar_barrier();
/// alpha(r) = lambda r; b = c = inf.
SafeSetSpec scalar_safe_set(double lambda = 1.0);

/// iota(s) = s^2 / 4, the disturbance gain of the k + L_g h^T feedback.
ComparisonFunction quarter_square_gain();

// xdot = -atan(x) + u with h = 4 - x^2 and V = x atan(x).
ControlAffineSystem arctan_system();
OutputMap arctan_barrier();
OutputMap arctan_clf();
/// alpha(h) = 2 (2 atan 2 - s atan s) with s = sqrt(4 - h), on (-inf, 4].
/// Equals 2 (2 atan 2 - x atan x) along h = 4 - x^2.
ComparisonFunction arctan_alpha();
SafeSetSpec arctan_safe_set();
/// alpha_v(|x|) = gain |x|^2.
ClfConstraint arctan_clf_constraint(double gain);

// Rotate-and-extend arm, x = (theta, r, thetadot, rdot).
struct RobotTask {
  RobotParams params;
  Eigen::Vector2d Kp = Eigen::Vector2d::Ones();  ///< CLF position gains (diagonal)
  Eigen::Vector2d Kd = Eigen::Vector2d::Ones();  ///< CLF damping gains (diagonal)
  Eigen::Vector2d q_d{M_PI / 4.0, 1.5};
  double r_star = 2.0;
};

/// h = r* - r, relative degree two, analytic second-order Lie derivatives.
OutputMap robot_barrier(const RobotParams& params, double r_star);
/// V = (q - q_d)^T Kp (q - q_d) + qdot^T D(q) qdot.
OutputMap robot_clf(const RobotTask& task);
/// L_f V + L_g V u <= -qdot^T Kd qdot + delta.
ClfConstraint robot_clf_constraint(const RobotTask& task);
/// PD reference -Kp (q - q_d) - Kd qdot.
Vector robot_pd_reference(const RobotTask& task, const Vector& x);

}  // namespace issf::models

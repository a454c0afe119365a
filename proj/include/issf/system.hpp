#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include <Eigen/Dense>

#include "issf/error.hpp"

namespace issf {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// State feedback k: R^n -> R^m.
using Feedback = std::function<Vector(const Vector&)>;
/// Time-varying vector field (t, x) -> xdot.
using VectorField = std::function<Vector(double, const Vector&)>;

/// xdot = f(x) + g(x) u with x in R^n, u in R^m.
class ControlAffineSystem {
 public:
  using Drift = std::function<Vector(const Vector&)>;
  using InputMatrix = std::function<Matrix(const Vector&)>;

  ControlAffineSystem(int n, int m, Drift f, InputMatrix g, std::string name = {});

  int n() const noexcept { return n_; }
  int m() const noexcept { return m_; }
  const std::string& name() const noexcept { return name_; }

  /// f(x); throws Shape on a malformed state or drift output.
  Vector drift(const Vector& x) const;
  /// g(x); throws Shape on a malformed state or matrix output.
  Matrix input_matrix(const Vector& x) const;
  /// f(x) + g(x) u.
  Vector field(const Vector& x, const Vector& u) const;

  void check_state(const Vector& x) const;
  void check_input(const Vector& u) const;

 private:
  int n_;
  int m_;
  Drift f_;
  InputMatrix g_;
  std::string name_;
};

/// Matched disturbance d(t) in R^m with declared sup-norm bound.
class DisturbanceSignal {
 public:
  using Signal = std::function<Vector(double)>;

  DisturbanceSignal(int m, Signal d, double bound);

  static DisturbanceSignal zero(int m);
  static DisturbanceSignal constant(const Vector& value);
  /// amplitude * sin(2 pi frequency t), componentwise.
  static DisturbanceSignal sinusoid(const Vector& amplitude, double frequency_hz);

  Vector operator()(double t) const;
  double bound() const noexcept { return bound_; }
  int m() const noexcept { return m_; }

 private:
  int m_;
  Signal d_;
  double bound_;
};

/// Scalar output h (or V) with its gradient and, for relative degree two,
/// the second-order Lie derivatives.
struct OutputMap {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> grad;
  int relative_degree = 1;
  /// L_f^2 h. Optional; finite differences of L_f h are used when empty.
  std::function<double(const Vector&)> lf2;
  /// L_g L_f h. Optional, as above.
  std::function<Vector(const Vector&)> lglf;

  /// Output with a central-difference gradient.
  static OutputMap numeric(std::function<double(const Vector&)> value, int relative_degree = 1);
};

struct Lie1 {
  double lf;
  Vector lg;  ///< row L_g h stored as a length-m vector
};

struct Lie2 {
  double lf2;
  Vector lglf;
};

/// Central-difference gradient with per-component step 1e-6 * max(1, |x_i|).
Vector fd_gradient(const std::function<double(const Vector&)>& fn, const Vector& x);

/// L_f h(x) = grad h . f and L_g h(x) = grad h^T g.
Lie1 lie1(const ControlAffineSystem& sys, const OutputMap& out, const Vector& x);

/// L_f^2 h and L_g L_f h. Throws Usage unless out.relative_degree == 2.
Lie2 lie2(const ControlAffineSystem& sys, const OutputMap& out, const Vector& x);

/// (t, x) -> f(x) + g(x) (k(x) + d(t)).
VectorField closed_loop(const ControlAffineSystem& sys, Feedback k, DisturbanceSignal d);

/// Largest difference quotient of f and g (Frobenius) over random pairs in
/// the box center +- radius. A finite value on the box is the empirical
/// local Lipschitz check.
double lipschitz_estimate(const ControlAffineSystem& sys, const Vector& center, double radius,
                          int pairs, std::uint64_t seed);

/// Physical parameters of the planar rotate-and-extend arm.
struct RobotParams {
  double m = 1.0;  ///< mass of the sliding link [kg]
  double M = 1.0;  ///< mass of the rotating link [kg]
  double L = 3.0;  ///< length of the rotating link [m]
};

/// diag(m r^2 + M L^2 / 3, m).
Eigen::Matrix2d robot_inertia(const RobotParams& p, double r);
/// (2 m r rdot thetadot, -m r thetadot^2) for x = (theta, r, thetadot, rdot).
Eigen::Vector2d robot_coriolis(const RobotParams& p, const Vector& x);

/// State (theta, r, thetadot, rdot), inputs (torque, force). No gravity.
ControlAffineSystem robot2dof(const RobotParams& p);

}  // namespace issf

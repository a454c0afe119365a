#include <cmath>
#include <random>

#include <doctest.h>

#include "issf/models.hpp"
#include "issf/sim.hpp"

using namespace issf;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

bool throws_kind(ErrorKind kind, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind() == kind;
  }
  return false;
}

}  // namespace

TEST_CASE("lie1 on the scalar plant") {
  const auto sys = models::scalar_system();
  const auto h = models::scalar_barrier();
  const Lie1 a = lie1(sys, h, vec({1.0}));
  CHECK(a.lf == doctest::Approx(1.0));
  CHECK(a.lg(0) == doctest::Approx(-1.0));
  const Lie1 b = lie1(sys, h, vec({0.0}));
  CHECK(b.lf == 0.0);
  CHECK(b.lg(0) == 0.0);
  for (double x : {-2.0, 0.5, 3.0}) CHECK(lie1(sys, h, vec({x})).lg(0) == doctest::Approx(-x * x));
  CHECK(throws_kind(ErrorKind::Shape, [&] { lie1(sys, h, vec({1.0, 2.0})); }));
}

TEST_CASE("lie1 on the arctan plant matches finite differences") {
  const auto sys = models::arctan_system();
  const auto h = models::arctan_barrier();
  const Lie1 a = lie1(sys, h, vec({1.0}));
  CHECK(a.lf == doctest::Approx(M_PI / 2.0).epsilon(1e-14));
  CHECK(a.lg(0) == doctest::Approx(-2.0));
  const OutputMap numeric = OutputMap::numeric(h.value);
  const Lie1 n = lie1(sys, numeric, vec({1.0}));
  CHECK(n.lf == doctest::Approx(M_PI / 2.0).epsilon(1e-8));
  CHECK(n.lg(0) == doctest::Approx(-2.0).epsilon(1e-8));
}

TEST_CASE("closed_loop field") {
  const auto sys = models::scalar_system();
  const Feedback k = [](const Vector& x) { return Vector::Constant(1, -x(0) * x(0)); };
  const auto f1 = closed_loop(sys, k, DisturbanceSignal::zero(1));
  CHECK(f1(0.0, vec({1.0}))(0) == doctest::Approx(-2.0));

  const Feedback zero = [](const Vector&) { return Vector::Zero(1); };
  const auto f2 = closed_loop(sys, zero, DisturbanceSignal::constant(vec({1.0})));
  CHECK(f2(0.0, vec({2.0}))(0) == doctest::Approx(2.0));

  const auto robot = robot2dof(RobotParams{});
  const Feedback zero2 = [](const Vector&) { return Vector::Zero(2); };
  const auto f3 = closed_loop(robot, zero2, DisturbanceSignal::zero(2));
  const Vector x = vec({0.3, 1.2, 0.7, -0.4});
  CHECK((f3(0.0, x) - robot.drift(x)).norm() == 0.0);

  const Feedback bad = [](const Vector&) { return Vector::Zero(2); };
  const auto f4 = closed_loop(sys, bad, DisturbanceSignal::zero(1));
  CHECK(throws_kind(ErrorKind::Shape, [&] { f4(0.0, vec({1.0})); }));
}

TEST_CASE("disturbance signals") {
  const auto c = DisturbanceSignal::constant(vec({3.0, 4.0}));
  CHECK(c.bound() == doctest::Approx(5.0));
  CHECK(c(1.3)(1) == 4.0);
  const auto s = DisturbanceSignal::sinusoid(vec({2.0}), 0.5);
  CHECK(s(0.5)(0) == doctest::Approx(2.0));
  for (int i = 0; i < 1000; ++i) CHECK(s(0.013 * i).norm() <= s.bound() + 1e-12);
}

TEST_CASE("robot dynamics") {
  RobotParams p;
  CHECK(robot_inertia(p, 1.0).isApprox(Eigen::Vector2d(4.0, 1.0).asDiagonal().toDenseMatrix()));
  CHECK(robot_coriolis(p, vec({0.2, 1.0, 0.0, 0.0})).norm() == 0.0);
  const Eigen::Vector2d c = robot_coriolis(p, vec({0.0, 2.0, 1.0, 0.0}));
  CHECK(c(0) == doctest::Approx(0.0));
  CHECK(c(1) == doctest::Approx(-2.0));

  const auto sys = robot2dof(p);
  CHECK(sys.n() == 4);
  CHECK(sys.m() == 2);
  const Vector x = vec({0.1, 2.0, 1.0, 0.5});
  const Vector u = vec({1.0, -0.5});
  const Vector xdot = sys.field(x, u);
  const Eigen::Vector2d acc =
      robot_inertia(p, 2.0).inverse() * (Eigen::Vector2d(u(0), u(1)) - robot_coriolis(p, x));
  CHECK(xdot(0) == 1.0);
  CHECK(xdot(1) == 0.5);
  CHECK(xdot(2) == doctest::Approx(acc(0)));
  CHECK(xdot(3) == doctest::Approx(acc(1)));

  CHECK(throws_kind(ErrorKind::Domain, [] { robot2dof(RobotParams{0.0, 1.0, 3.0}); }));
  CHECK(throws_kind(ErrorKind::Domain, [] { robot2dof(RobotParams{1.0, -1.0, 3.0}); }));
  CHECK(throws_kind(ErrorKind::Domain, [] { robot2dof(RobotParams{1.0, 1.0, 0.0}); }));
}

TEST_CASE("property: robot inertia is SPD and outputs have consistent gradients") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const models::RobotTask task;
  const auto sys = robot2dof(task.params);
  const auto h = models::robot_barrier(task.params, task.r_star);
  const auto V = models::robot_clf(task);
  OutputMap h_fd = h;
  h_fd.lf2 = nullptr;
  h_fd.lglf = nullptr;
  for (int i = 0; i < 300; ++i) {
    const Vector x = vec({u(rng), u(rng), u(rng), u(rng)});
    const Eigen::Matrix2d D = robot_inertia(task.params, x(1));
    CHECK(D.isApprox(D.transpose()));
    CHECK(Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d>(D).eigenvalues().minCoeff() > 0.0);
    const Vector gV = V.grad(x);
    CHECK((gV - fd_gradient(V.value, x)).norm() <= 1e-5 * (1.0 + gV.norm()));
    CHECK(lie1(sys, h, x).lg.norm() == 0.0);
    const Lie2 a = lie2(sys, h, x);
    const Lie2 b = lie2(sys, h_fd, x);
    CHECK(a.lf2 == doctest::Approx(b.lf2).epsilon(1e-5).scale(1.0));
    CHECK((a.lglf - b.lglf).norm() <= 1e-5);
  }
  CHECK(throws_kind(ErrorKind::Usage, [&] { lie2(sys, models::robot_clf(task), vec({0, 1, 0, 0})); }));
}

TEST_CASE("property: lie1 agrees with the chain rule along a trajectory") {
  const auto sys = models::arctan_system();
  const auto h = models::arctan_barrier();
  const Controller ctrl = [](const Vector& x) {
    ControlOutput out;
    out.u = Vector::Constant(1, -0.5 * x(0));
    return out;
  };
  const auto d = DisturbanceSignal::sinusoid(vec({1.0}), 0.3);
  const double dt = 1e-3;
  const Trajectory tr = run_closed_loop(sys, ctrl, d, vec({1.5}), 2.0, dt, {h, std::nullopt});
  for (std::size_t k = 1; k + 1 < tr.size(); ++k) {
    const double slope = (tr.h_vals[k + 1] - tr.h_vals[k - 1]) / (2.0 * dt);
    CHECK(std::abs(slope - tr.hdot_vals[k]) <= 1e-2);
  }
}

TEST_CASE("Lipschitz estimate is finite on a box") {
  const double L = lipschitz_estimate(models::scalar_system(), vec({0.0}), 2.0, 500, 3);
  CHECK(std::isfinite(L));
  // |d/dx (-x)| = 1 and |d/dx x^2| <= 4 on [-2, 2].
  CHECK(L <= 4.0 + 1e-9);
  CHECK(L >= 1.0);
}

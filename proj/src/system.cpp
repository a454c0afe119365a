#include "issf/system.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace issf {

namespace {

std::string shape_msg(const char* what, Eigen::Index got_r, Eigen::Index got_c, int want_r,
                      int want_c) {
  std::ostringstream os;
  os << what << " has shape " << got_r << "x" << got_c << ", expected " << want_r << "x"
     << want_c;
  return os.str();
}

}  // namespace

ControlAffineSystem::ControlAffineSystem(int n, int m, Drift f, InputMatrix g, std::string name)
    : n_(n), m_(m), f_(std::move(f)), g_(std::move(g)), name_(std::move(name)) {
  if (n_ <= 0 || m_ <= 0) throw Error(ErrorKind::Shape, "system dimensions must be positive");
  if (!f_ || !g_) throw Error(ErrorKind::Usage, "system needs both f and g");
}

void ControlAffineSystem::check_state(const Vector& x) const {
  if (x.size() != n_) throw Error(ErrorKind::Shape, shape_msg("state", x.size(), 1, n_, 1));
}

void ControlAffineSystem::check_input(const Vector& u) const {
  if (u.size() != m_) throw Error(ErrorKind::Shape, shape_msg("input", u.size(), 1, m_, 1));
}

Vector ControlAffineSystem::drift(const Vector& x) const {
  check_state(x);
  Vector fx = f_(x);
  if (fx.size() != n_) throw Error(ErrorKind::Shape, shape_msg("f(x)", fx.size(), 1, n_, 1));
  return fx;
}

Matrix ControlAffineSystem::input_matrix(const Vector& x) const {
  check_state(x);
  Matrix gx = g_(x);
  if (gx.rows() != n_ || gx.cols() != m_) {
    throw Error(ErrorKind::Shape, shape_msg("g(x)", gx.rows(), gx.cols(), n_, m_));
  }
  return gx;
}

Vector ControlAffineSystem::field(const Vector& x, const Vector& u) const {
  check_input(u);
  return drift(x) + input_matrix(x) * u;
}

DisturbanceSignal::DisturbanceSignal(int m, Signal d, double bound)
    : m_(m), d_(std::move(d)), bound_(bound) {
  if (m_ <= 0) throw Error(ErrorKind::Shape, "disturbance dimension must be positive");
  if (!(bound_ >= 0.0)) throw Error(ErrorKind::Domain, "disturbance bound must be >= 0");
}

DisturbanceSignal DisturbanceSignal::zero(int m) {
  return DisturbanceSignal(m, [m](double) { return Vector::Zero(m).eval(); }, 0.0);
}

DisturbanceSignal DisturbanceSignal::constant(const Vector& value) {
  return DisturbanceSignal(static_cast<int>(value.size()), [value](double) { return value; },
                           value.norm());
}

DisturbanceSignal DisturbanceSignal::sinusoid(const Vector& amplitude, double frequency_hz) {
  const double w = 2.0 * M_PI * frequency_hz;
  return DisturbanceSignal(
      static_cast<int>(amplitude.size()),
      [amplitude, w](double t) { return (amplitude * std::sin(w * t)).eval(); },
      amplitude.norm());
}

Vector DisturbanceSignal::operator()(double t) const {
  Vector v = d_(t);
  if (v.size() != m_) throw Error(ErrorKind::Shape, shape_msg("d(t)", v.size(), 1, m_, 1));
  return v;
}

Vector fd_gradient(const std::function<double(const Vector&)>& fn, const Vector& x) {
  Vector grad(x.size());
  Vector probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double step = 1e-6 * std::max(1.0, std::abs(x(i)));
    probe(i) = x(i) + step;
    const double up = fn(probe);
    probe(i) = x(i) - step;
    const double down = fn(probe);
    probe(i) = x(i);
    grad(i) = (up - down) / (2.0 * step);
  }
  return grad;
}

OutputMap OutputMap::numeric(std::function<double(const Vector&)> value, int relative_degree) {
  OutputMap out;
  out.value = value;
  out.grad = [value](const Vector& x) { return fd_gradient(value, x); };
  out.relative_degree = relative_degree;
  return out;
}

Lie1 lie1(const ControlAffineSystem& sys, const OutputMap& out, const Vector& x) {
  sys.check_state(x);
  const Vector grad = out.grad(x);
  if (grad.size() != sys.n()) {
    throw Error(ErrorKind::Shape, shape_msg("grad h(x)", grad.size(), 1, sys.n(), 1));
  }
  return {grad.dot(sys.drift(x)), sys.input_matrix(x).transpose() * grad};
}

Lie2 lie2(const ControlAffineSystem& sys, const OutputMap& out, const Vector& x) {
  if (out.relative_degree != 2) {
    throw Error(ErrorKind::Usage, "second-order Lie derivatives need a relative-degree-2 output");
  }
  sys.check_state(x);
  Lie2 result{};
  if (out.lf2 && out.lglf) {
    result.lf2 = out.lf2(x);
    result.lglf = out.lglf(x);
  } else {
    auto lfh = [&](const Vector& y) { return out.grad(y).dot(sys.drift(y)); };
    const Vector grad_lfh = fd_gradient(lfh, x);
    result.lf2 = grad_lfh.dot(sys.drift(x));
    result.lglf = sys.input_matrix(x).transpose() * grad_lfh;
  }
  if (result.lglf.size() != sys.m()) {
    throw Error(ErrorKind::Shape, shape_msg("L_g L_f h(x)", result.lglf.size(), 1, sys.m(), 1));
  }
  return result;
}

VectorField closed_loop(const ControlAffineSystem& sys, Feedback k, DisturbanceSignal d) {
  if (d.m() != sys.m()) {
    throw Error(ErrorKind::Shape, shape_msg("disturbance", d.m(), 1, sys.m(), 1));
  }
  return [sys, k = std::move(k), d = std::move(d)](double t, const Vector& x) {
    const Vector u = k(x);
    if (u.size() != sys.m()) {
      throw Error(ErrorKind::Shape, shape_msg("k(x)", u.size(), 1, sys.m(), 1));
    }
    return sys.field(x, u + d(t));
  };
}

double lipschitz_estimate(const ControlAffineSystem& sys, const Vector& center, double radius,
                          int pairs, std::uint64_t seed) {
  sys.check_state(center);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  auto sample = [&] {
    Vector x(center.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = center(i) + radius * unit(rng);
    return x;
  };
  double worst = 0.0;
  for (int i = 0; i < pairs; ++i) {
    const Vector a = sample();
    const Vector b = sample();
    const double dist = (a - b).norm();
    if (dist == 0.0) continue;
    const double df = (sys.drift(a) - sys.drift(b)).norm();
    const double dg = (sys.input_matrix(a) - sys.input_matrix(b)).norm();
    worst = std::max(worst, std::max(df, dg) / dist);
  }
  return worst;
}

Eigen::Matrix2d robot_inertia(const RobotParams& p, double r) {
  Eigen::Matrix2d D = Eigen::Matrix2d::Zero();
  D(0, 0) = p.m * r * r + p.M * p.L * p.L / 3.0;
  D(1, 1) = p.m;
  return D;
}

Eigen::Vector2d robot_coriolis(const RobotParams& p, const Vector& x) {
  const double r = x(1);
  const double thetadot = x(2);
  const double rdot = x(3);
  return {2.0 * p.m * r * rdot * thetadot, -p.m * r * thetadot * thetadot};
}

ControlAffineSystem robot2dof(const RobotParams& p) {
  if (!(p.m > 0.0) || !(p.M > 0.0) || !(p.L > 0.0)) {
    throw Error(ErrorKind::Domain, "robot masses and length must be positive");
  }
  auto f = [p](const Vector& x) {
    const Eigen::Matrix2d D = robot_inertia(p, x(1));
    const Eigen::Vector2d c = robot_coriolis(p, x);
    Vector out(4);
    out << x(2), x(3), -c(0) / D(0, 0), -c(1) / D(1, 1);
    return out;
  };
  auto g = [p](const Vector& x) {
    const Eigen::Matrix2d D = robot_inertia(p, x(1));
    Matrix out = Matrix::Zero(4, 2);
    out(2, 0) = 1.0 / D(0, 0);
    out(3, 1) = 1.0 / D(1, 1);
    return out;
  };
  return ControlAffineSystem(4, 2, f, g, "robot2dof");
}

}  // namespace issf

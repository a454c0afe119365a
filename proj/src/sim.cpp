#include "issf/sim.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace issf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Escape {};

std::string where(double t, const Vector& x) {
  std::ostringstream os;
  os.precision(17);
  os << "t = " << t << ", x = [";
  for (Eigen::Index i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x(i);
  os << "]";
  return os.str();
}

long step_count(double t0, double tf, double dt) {
  if (!(dt > 0.0)) throw Error(ErrorKind::Domain, "dt must be positive");
  if (!(tf > t0)) throw Error(ErrorKind::Domain, "final time must exceed the start time");
  const double n = std::round((tf - t0) / dt);
  if (n > static_cast<double>(kMaxSteps)) {
    throw Error(ErrorKind::Usage, "simulation needs more than " + std::to_string(kMaxSteps) +
                                      " steps");
  }
  return std::max(1L, static_cast<long>(n));
}

// One RK4 step; throws Escape when a stage state leaves the escape ball.
Vector rk4_step(const VectorField& field, double t, const Vector& x, double dt,
                double escape_norm) {
  auto eval = [&](double ts, const Vector& xs) {
    if (!xs.allFinite() || xs.norm() > escape_norm) throw Escape{};
    Vector v = field(ts, xs);
    if (!v.allFinite()) {
      throw Error(ErrorKind::Numerics, "non-finite vector field at " + where(ts, xs));
    }
    return v;
  };
  const Vector k1 = eval(t, x);
  const Vector k2 = eval(t + 0.5 * dt, x + 0.5 * dt * k1);
  const Vector k3 = eval(t + 0.5 * dt, x + 0.5 * dt * k2);
  const Vector k4 = eval(t + dt, x + dt * k3);
  Vector next = x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!next.allFinite() || next.norm() > escape_norm) throw Escape{};
  return next;
}

}  // namespace

StatePath integrate(const VectorField& field, const Vector& x0, double t0, double tf, double dt,
                    double escape_norm) {
  const long steps = step_count(t0, tf, dt);
  StatePath path;
  path.times.reserve(static_cast<std::size_t>(steps) + 1);
  path.states.reserve(static_cast<std::size_t>(steps) + 1);
  path.times.push_back(t0);
  path.states.push_back(x0);
  Vector x = x0;
  for (long i = 0; i < steps; ++i) {
    const double t = t0 + static_cast<double>(i) * dt;
    try {
      x = rk4_step(field, t, x, dt, escape_norm);
    } catch (const Escape&) {
      path.escaped = true;
      break;
    }
    path.times.push_back(t0 + static_cast<double>(i + 1) * dt);
    path.states.push_back(x);
  }
  return path;
}

Trajectory run_closed_loop(const ControlAffineSystem& sys, const Controller& controller,
                           const DisturbanceSignal& d, const Vector& x0, double tf, double dt,
                           const MonitoredOutputs& outputs) {
  sys.check_state(x0);
  if (d.m() != sys.m()) throw Error(ErrorKind::Shape, "disturbance and system inputs differ");
  const long steps = step_count(0.0, tf, dt);

  Trajectory traj;
  traj.dt = dt;
  const auto cap = static_cast<std::size_t>(steps) + 1;
  traj.times.reserve(cap);
  traj.states.reserve(cap);
  traj.inputs.reserve(cap);
  traj.disturbances.reserve(cap);
  traj.h_vals.reserve(cap);
  traj.hdot_vals.reserve(cap);
  traj.V_vals.reserve(cap);
  traj.delta_vals.reserve(cap);
  traj.statuses.reserve(cap);

  Vector x = x0;
  for (long i = 0;; ++i) {
    const double t = static_cast<double>(i) * dt;
    ControlOutput out;
    try {
      out = controller(x);
      sys.check_input(out.u);
    } catch (const Error& e) {
      throw Error(e.kind(), "step " + std::to_string(i) + " (" + where(t, x) + "): " + e.what());
    }
    const Vector dt_now = d(t);
    traj.times.push_back(t);
    traj.states.push_back(x);
    traj.inputs.push_back(out.u);
    traj.disturbances.push_back(dt_now);
    if (outputs.h) {
      const Vector xdot = sys.field(x, out.u + dt_now);
      traj.h_vals.push_back(outputs.h->value(x));
      traj.hdot_vals.push_back(outputs.h->grad(x).dot(xdot));
    } else {
      traj.h_vals.push_back(kNaN);
      traj.hdot_vals.push_back(kNaN);
    }
    traj.V_vals.push_back(outputs.V ? outputs.V->value(x) : kNaN);
    traj.delta_vals.push_back(out.delta);
    traj.statuses.push_back(out.status);

    if (i == steps) break;
    const Vector held = out.u;
    const VectorField field = [&](double ts, const Vector& xs) {
      return sys.field(xs, held + d(ts));
    };
    try {
      x = rk4_step(field, t, x, dt, kEscapeNorm);
    } catch (const Escape&) {
      traj.escaped = true;
      break;
    }
  }
  return traj;
}

InvarianceReport check_invariance(const Trajectory& traj, double level_offset, double tol) {
  if (traj.h_vals.empty()) throw Error(ErrorKind::Usage, "trajectory has no samples");
  InvarianceReport report;
  report.min_level = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < traj.h_vals.size(); ++i) {
    const double h = traj.h_vals[i];
    if (std::isnan(h)) throw Error(ErrorKind::Usage, "trajectory has no recorded h values");
    if (h + level_offset < report.min_level) {
      report.min_level = h + level_offset;
      report.t_min = traj.times[i];
    }
  }
  report.pass = report.min_level >= -tol;
  return report;
}

}  // namespace issf

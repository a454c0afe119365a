#pragma once

#include <optional>
#include <vector>

#include "issf/controllers.hpp"

namespace issf {

inline constexpr double kEscapeNorm = 1e6;
inline constexpr long kMaxSteps = 10'000'000;
inline constexpr double kInvarianceTol = 1e-3;

/// Raw RK4 state path on the grid t0 + i dt.
struct StatePath {
  std::vector<double> times;
  std::vector<Vector> states;
  bool escaped = false;  ///< |x| exceeded kEscapeNorm (finite escape)
};

/// Classical fixed-step RK4. Stops early with `escaped` set once any stage
/// state leaves the ball of radius `escape_norm`. Throws Numerics when the
/// field returns non-finite values at a finite state.
StatePath integrate(const VectorField& field, const Vector& x0, double t0, double tf, double dt,
                    double escape_norm = kEscapeNorm);

/// Closed-loop record; all per-step arrays share one length.
struct Trajectory {
  double dt = 0.0;
  std::vector<double> times;
  std::vector<Vector> states;
  std::vector<Vector> inputs;        ///< controller output, before disturbance
  std::vector<Vector> disturbances;  ///< d(t) at the step start
  std::vector<double> h_vals;
  std::vector<double> hdot_vals;     ///< grad h . (f + g (u + d))
  std::vector<double> V_vals;
  std::vector<double> delta_vals;
  std::vector<std::optional<QpStatus>> statuses;
  bool escaped = false;

  std::size_t size() const noexcept { return times.size(); }
};

/// Outputs recorded along a run; either may be absent (recorded as NaN).
struct MonitoredOutputs {
  std::optional<OutputMap> h;
  std::optional<OutputMap> V;
};

/// Simulates xdot = f(x) + g(x) (u + d(t)) from t = 0 to tf. The controller
/// is evaluated once per step and held (zero-order hold); d(t) is evaluated
/// at every RK stage. Controller failures are rethrown with the step index.
Trajectory run_closed_loop(const ControlAffineSystem& sys, const Controller& controller,
                           const DisturbanceSignal& d, const Vector& x0, double tf, double dt,
                           const MonitoredOutputs& outputs);

struct InvarianceReport {
  double min_level = 0.0;
  double t_min = 0.0;
  bool pass = false;
};

/// min_t h(x(t)) + level_offset, passing when >= -tol.
InvarianceReport check_invariance(const Trajectory& traj, double level_offset,
                                  double tol = kInvarianceTol);

}  // namespace issf

#include <cmath>
#include <cstdio>

#include "issf/bench.hpp"

namespace issf {

namespace {

constexpr double kIdentityTol = 1e-9;
constexpr double kGradientTol = 1e-5;

class Reporter {
 public:
  explicit Reporter(CheckReport& report) : report_(report) {}

  void add(bool pass, const std::string& name, const std::string& detail) {
    report_.lines.push_back(std::string(pass ? "PASS " : "FAIL ") + name + ": " + detail);
    report_.ok = report_.ok && pass;
  }

  void validation(const std::string& name, const ComparisonFunction& fn) {
    const ValidationReport r = validate(fn);
    std::string detail = std::to_string(r.samples) + " samples";
    if (!r.ok()) detail += ", first violation: " + r.violations.front().describe();
    add(r.ok(), name, detail);
  }

  void sampled(const std::string& name, const SampleReport& r) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu samples, %zu skipped, %zu violations, min %.6g",
                  r.samples, r.skipped, r.violations, r.min_value);
    add(r.violations == 0 && r.samples > 0, name, buf);
  }

 private:
  CheckReport& report_;
};

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

/// Residual of A + B.u - |B|^2 = sqrt(A^2 + |B|^4), relative to its scale.
double universal_identity_error(const SafeSetSpec& spec, const ControlAffineSystem& sys,
                                const Vector& x) {
  const UniversalTerms t = universal_terms(spec, sys, x);
  const Vector u = universal_issf(spec, sys, x);
  const double bb = t.B.squaredNorm();
  const double lhs = t.A + t.B.dot(u) - bb;
  const double rhs = input_gain_vanishes(t.B, x) ? t.A : std::sqrt(t.A * t.A + bb * bb);
  return std::abs(lhs - rhs) / (1.0 + std::abs(t.A) + bb);
}

/// Checks the certificates shared by the relative-degree-one examples.
void check_first_order(Reporter& rep, const SafeSetSpec& spec, const ControlAffineSystem& sys,
                       const ComparisonFunction& iota, const Region& states, double mu_bound,
                       std::size_t samples, std::uint64_t seed) {
  rep.validation("alpha is extended class K", spec.alpha);
  rep.validation("iota is class K-infinity", iota);

  const Feedback zero = [m = sys.m()](const Vector&) { return Vector::Zero(m); };
  rep.sampled("BF condition under k = 0",
              sample_residual(states, samples, seed,
                              [&](const Vector& x) { return bf_residual(spec, sys, zero, x); }));

  const Feedback issf_k = [&](const Vector& x) { return issf_feedback(zero, spec, sys, x); };
  const int n = sys.n();
  Region joint{Vector(n + sys.m()), Vector(n + sys.m())};
  joint.lo << states.lo, Vector::Constant(sys.m(), -mu_bound);
  joint.hi << states.hi, Vector::Constant(sys.m(), mu_bound);
  rep.sampled("ISSf-BF condition under k + L_g h^T",
              sample_residual(joint, samples, seed + 1, [&](const Vector& xm) {
                return issf_bf_residual(spec, sys, issf_k, iota, xm.head(n), xm.tail(sys.m()));
              }));

  rep.sampled("universal formula identity",
              sample_residual(states, samples, seed + 2, [&](const Vector& x) {
                return -universal_identity_error(spec, sys, x);
              }, kIdentityTol));

  rep.sampled("L_g h = 0 implies L_f h + alpha(h) >= 0",
              sample_residual(states, samples, seed + 3, [&](const Vector& x) {
                const UniversalTerms t = universal_terms(spec, sys, x);
                return input_gain_vanishes(t.B, x) ? t.A : 0.0;
              }));
  const Vector origin = Vector::Zero(n);
  const UniversalTerms t0 = universal_terms(spec, sys, origin);
  const bool vanishes = input_gain_vanishes(t0.B, origin);
  rep.add(!vanishes || t0.A >= 0.0, "CBF condition at the origin",
          "|B| = " + number(t0.B.norm()) + ", A = " + number(t0.A));
}

void check_robot(Reporter& rep, std::size_t samples, std::uint64_t seed) {
  const models::RobotTask task;
  const ControlAffineSystem sys = robot2dof(task.params);
  const OutputMap h = models::robot_barrier(task.params, task.r_star);
  const OutputMap V = models::robot_clf(task);
  Region box{Vector(4), Vector(4)};
  box.lo << -M_PI, 0.1, -3.0, -3.0;
  box.hi << M_PI, 4.0, 3.0, 3.0;

  auto gradient_error = [](const OutputMap& out) {
    return [&out](const Vector& x) {
      const Vector g = out.grad(x);
      const Vector fd = fd_gradient(out.value, x);
      return -(g - fd).norm() / (1.0 + g.norm());
    };
  };
  rep.sampled("grad h matches finite differences",
              sample_residual(box, samples, seed, gradient_error(h), kGradientTol));
  rep.sampled("grad V matches finite differences",
              sample_residual(box, samples, seed + 1, gradient_error(V), kGradientTol));

  rep.sampled("L_g h = 0 (relative degree two)",
              sample_residual(box, samples, seed + 2, [&](const Vector& x) {
                return -lie1(sys, h, x).lg.norm();
              }));

  OutputMap h_numeric = h;
  h_numeric.lf2 = nullptr;
  h_numeric.lglf = nullptr;
  rep.sampled("analytic L_f^2 h and L_g L_f h match finite differences",
              sample_residual(box, samples, seed + 3, [&](const Vector& x) {
                const Lie2 a = lie2(sys, h, x);
                const Lie2 b = lie2(sys, h_numeric, x);
                const double err = std::abs(a.lf2 - b.lf2) + (a.lglf - b.lglf).norm();
                return -err / (1.0 + std::abs(a.lf2) + a.lglf.norm());
              }, kGradientTol));

  rep.sampled("L_g L_f h is nonzero",
              sample_residual(box, samples, seed + 4, [&](const Vector& x) {
                return lie2(sys, h, x).lglf.norm() - 1e-12;
              }, 0.0));

  rep.sampled("inertia is symmetric positive definite",
              sample_residual(box, samples, seed + 5, [&](const Vector& x) {
                const Eigen::Matrix2d D = robot_inertia(task.params, x(1));
                const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(D);
                return (D - D.transpose()).norm() > 0.0 ? -1.0 : eig.eigenvalues().minCoeff();
              }, 0.0));

  Vector center(4);
  center << 0.0, 2.0, 0.0, 0.0;
  const double lip = lipschitz_estimate(sys, center, 1.5, static_cast<int>(samples), seed + 6);
  rep.add(std::isfinite(lip), "local Lipschitz estimate on a box around r = 2",
          "L ~ " + number(lip));
}

}  // namespace

CheckReport run_certificate_check(ExampleId id, std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw Error(ErrorKind::Usage, "certificate check needs at least one sample");
  CheckReport report;
  Reporter rep(report);
  switch (id) {
    case ExampleId::Scalar: {
      Region states{Vector::Constant(1, -3.0), Vector::Constant(1, 5.0)};
      check_first_order(rep, models::scalar_safe_set(), models::scalar_system(),
                        models::quarter_square_gain(), states, 2.0, samples, seed);
      const Bound dmax = max_disturbance(models::scalar_safe_set().alpha,
                                         models::quarter_square_gain(), Bound::unbounded());
      rep.add(dmax.is_unbounded(), "disturbance margin is unbounded",
              "sup dbar = " + dmax.str());
      break;
    }
    case ExampleId::Arctan: {
      Region states{Vector::Constant(1, -5.0), Vector::Constant(1, 5.0)};
      check_first_order(rep, models::arctan_safe_set(), models::arctan_system(),
                        models::quarter_square_gain(), states, 10.0, samples, seed);
      break;
    }
    case ExampleId::Robot2Dof:
      check_robot(rep, samples, seed);
      break;
  }
  return report;
}

}  // namespace issf

#include "issf/barrier.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace issf {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

Bound SafeSetSpec::e() const {
  // Beyond this magnitude alpha is treated as divergent.
  constexpr double kDivergent = 1e12;
  double last = 0.0;
  if (b.is_finite()) {
    const double bb = b.value();
    for (int k = 1; k <= 12; ++k) {
      const double r = -bb + bb * std::pow(10.0, -k);
      if (!alpha.in_domain(r)) break;
      last = -alpha.eval_unchecked(r);
    }
  } else {
    for (int k = 0; k <= 60; ++k) {
      const double r = -std::ldexp(1.0, k);
      if (!alpha.in_domain(r)) break;
      last = -alpha.eval_unchecked(r);
      if (!std::isfinite(last) || last > kDivergent) return Bound::unbounded();
    }
  }
  return Bound::at(last);
}

bool SafeSetSpec::in_working_region(const Vector& x) const {
  const double hx = h.value(x);
  if (!std::isfinite(hx)) return false;
  if (b.is_finite() && !(hx + b.value() > 0.0)) return false;
  return alpha.in_domain(hx);
}

void SafeSetSpec::require_in_working_region(const Vector& x) const {
  if (!in_working_region(x)) {
    throw Error(ErrorKind::Domain, "state with h = " + fmt(h.value(x)) +
                                       " is outside the working region D (b = " + b.str() + ")");
  }
}

double bf_residual(const SafeSetSpec& spec, const ControlAffineSystem& sys, const Feedback& k,
                   const Vector& x) {
  spec.require_in_working_region(x);
  const Lie1 d = lie1(sys, spec.h, x);
  const Vector u = k(x);
  sys.check_input(u);
  return d.lf + d.lg.dot(u) + spec.alpha(spec.h.value(x));
}

double issf_bf_residual(const SafeSetSpec& spec, const ControlAffineSystem& sys,
                        const Feedback& k, const ComparisonFunction& iota, const Vector& x,
                        const Vector& mu) {
  spec.require_in_working_region(x);
  sys.check_input(mu);
  const Lie1 d = lie1(sys, spec.h, x);
  const Vector u = k(x);
  sys.check_input(u);
  return d.lf + d.lg.dot(u) + d.lg.dot(mu) + spec.alpha(spec.h.value(x)) + iota(mu.norm());
}

double cd_level(const SafeSetSpec& spec, const ComparisonFunction& gamma, double dbar,
                const Vector& x) {
  const double margin = gamma(dbar);
  if (spec.b.is_finite() && !(margin < spec.b.value())) {
    throw Error(ErrorKind::Margin, "gamma(" + fmt(dbar) + ") = " + fmt(margin) +
                                       " is not below b = " + spec.b.str() +
                                       "; the enlarged set leaves D");
  }
  return spec.h.value(x) + margin;
}

double exponential_cd_level(const OutputMap& h, double lambda, const ComparisonFunction& iota,
                            double dbar, const Vector& x) {
  if (!(lambda > 0.0)) throw Error(ErrorKind::Domain, "lambda must be positive");
  return h.value(x) + iota(dbar) / lambda;
}

ConstraintRow issf_cbf_row(const SafeSetSpec& spec, const ControlAffineSystem& sys,
                           const Vector& x, double epsilon) {
  if (!(epsilon >= 0.0)) throw Error(ErrorKind::Domain, "epsilon must be >= 0");
  spec.require_in_working_region(x);
  const Lie1 d = lie1(sys, spec.h, x);
  ConstraintRow row;
  row.a_u = d.lg;
  row.a_delta = 0.0;
  row.sense = Sense::GreaterEqual;
  row.rhs = -spec.alpha(spec.h.value(x)) - d.lf + epsilon * d.lg.squaredNorm();
  return row;
}

ConstraintRow rel2_issf_row(const OutputMap& h, const ControlAffineSystem& sys, const Vector& x,
                            double kp, double kd, double epsilon) {
  if (h.relative_degree != 2) {
    throw Error(ErrorKind::Usage, "rel2_issf_row needs a relative-degree-2 output");
  }
  if (!(kp > 0.0) || !(kd > 0.0)) throw Error(ErrorKind::Domain, "kp and kd must be positive");
  if (!(epsilon >= 0.0)) throw Error(ErrorKind::Domain, "epsilon must be >= 0");
  const Lie1 d1 = lie1(sys, h, x);
  const Lie2 d2 = lie2(sys, h, x);
  ConstraintRow row;
  row.a_u = d2.lglf;
  row.a_delta = 0.0;
  row.sense = Sense::GreaterEqual;
  row.rhs = -kp * h.value(x) - kd * d1.lf - d2.lf2 + epsilon * d2.lglf.squaredNorm();
  return row;
}

SampleReport sample_residual(const Region& region, std::size_t samples, std::uint64_t seed,
                             const std::function<double(const Vector&)>& residual, double tol) {
  if (region.lo.size() != region.hi.size()) {
    throw Error(ErrorKind::Shape, "region bounds differ in length");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SampleReport report;
  report.min_value = std::numeric_limits<double>::infinity();
  Vector x(region.lo.size());
  for (std::size_t i = 0; i < samples; ++i) {
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      x(j) = region.lo(j) + unit(rng) * (region.hi(j) - region.lo(j));
    }
    double value = 0.0;
    try {
      value = residual(x);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Domain) throw;
      ++report.skipped;
      continue;
    }
    ++report.samples;
    if (value < report.min_value) {
      report.min_value = value;
      report.argmin = x;
    }
    if (!(value >= -tol)) ++report.violations;
  }
  return report;
}

}  // namespace issf

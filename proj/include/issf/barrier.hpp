#pragma once

#include <cstdint>
#include <vector>

#include "issf/classk.hpp"
#include "issf/constraint.hpp"
#include "issf/system.hpp"

namespace issf {

/// Membership tests accept levels >= -kBoundaryTol.
inline constexpr double kBoundaryTol = 1e-9;

/// Safe set C = {h >= 0} with its barrier decay alpha on (-b, c), where
/// b = -inf h and c = sup h. The working region is D = {h + b > 0}.
struct SafeSetSpec {
  OutputMap h;
  ComparisonFunction alpha;
  Bound b = Bound::unbounded();
  Bound c = Bound::unbounded();

  /// e = -lim_{r -> -b} alpha(r), estimated by walking toward -b. Unbounded
  /// when alpha diverges.
  Bound e() const;

  bool in_working_region(const Vector& x) const;
  /// Throws Domain when x is outside D or h(x) is outside alpha's domain.
  void require_in_working_region(const Vector& x) const;
};

/// L_fbar h(x) + alpha(h(x)) with fbar = f + g k.
double bf_residual(const SafeSetSpec& spec, const ControlAffineSystem& sys, const Feedback& k,
                   const Vector& x);

/// L_fbar h + L_g h . mu + alpha(h) + iota(|mu|).
double issf_bf_residual(const SafeSetSpec& spec, const ControlAffineSystem& sys,
                        const Feedback& k, const ComparisonFunction& iota, const Vector& x,
                        const Vector& mu);

/// h(x) + gamma(dbar). Throws Margin when gamma(dbar) >= b.
double cd_level(const SafeSetSpec& spec, const ComparisonFunction& gamma, double dbar,
                const Vector& x);

/// h(x) + iota(dbar) / lambda for exponential barriers alpha(r) = lambda r.
double exponential_cd_level(const OutputMap& h, double lambda, const ComparisonFunction& iota,
                            double dbar, const Vector& x);

/// L_f h + L_g h u - eps |L_g h|^2 >= -alpha(h) as a row over (u, delta).
/// eps = 0 gives the plain CBF row.
ConstraintRow issf_cbf_row(const SafeSetSpec& spec, const ControlAffineSystem& sys,
                           const Vector& x, double epsilon);

inline ConstraintRow cbf_row(const SafeSetSpec& spec, const ControlAffineSystem& sys,
                             const Vector& x) {
  return issf_cbf_row(spec, sys, x, 0.0);
}

/// Exponential relative-degree-2 row
///   L_f^2 h + L_g L_f h u - eps |L_g L_f h|^2 >= -kp h - kd L_f h.
ConstraintRow rel2_issf_row(const OutputMap& h, const ControlAffineSystem& sys, const Vector& x,
                            double kp, double kd, double epsilon);

/// Axis-aligned sampling box.
struct Region {
  Vector lo;
  Vector hi;
};

struct SampleReport {
  std::size_t samples = 0;
  std::size_t violations = 0;
  std::size_t skipped = 0;  ///< draws outside the residual's domain
  double min_value = 0.0;
  Vector argmin;
};

/// Evaluates `residual` at `samples` uniform draws from the region and counts
/// values below -tol. Draws where the residual throws Domain are skipped.
SampleReport sample_residual(const Region& region, std::size_t samples, std::uint64_t seed,
                             const std::function<double(const Vector&)>& residual,
                             double tol = kBoundaryTol);

}  // namespace issf

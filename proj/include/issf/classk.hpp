#pragma once

#include <functional>
#include <string>
#include <vector>

#include "issf/error.hpp"

namespace issf {

/// One end of a scalar interval. Infinite ends are an explicit state, never
/// a sentinel float.
class Bound {
 public:
  static Bound unbounded() { return Bound(); }
  static Bound at(double value);

  bool is_unbounded() const noexcept { return unbounded_; }
  bool is_finite() const noexcept { return !unbounded_; }
  /// Throws Usage when the bound is unbounded.
  double value() const;

  /// Value as an extended real: +inf when unbounded.
  double magnitude_or_inf() const noexcept;

  std::string str() const;

 private:
  Bound() = default;
  bool unbounded_ = true;
  double value_ = 0.0;
};

enum class ComparisonKind { ClassK, ClassKInf, ExtendedK };

const char* to_string(ComparisonKind kind);

/// A strictly increasing scalar map that vanishes at zero.
///
/// Class K maps live on [0, a); class K-infinity maps on [0, inf) and are
/// unbounded; extended class K maps live on (-b, c). `lo`/`hi` are the domain
/// ends as signed values, so an extended map on (-b, c) has lo = -b.
class ComparisonFunction {
 public:
  using Map = std::function<double(double)>;

  ComparisonFunction(Map eval, Bound lo, Bound hi, ComparisonKind kind,
                     bool hi_closed = false);

  /// Class K on [0, a).
  static ComparisonFunction class_k(Map eval, Bound a = Bound::unbounded());
  /// Class K-infinity on [0, inf).
  static ComparisonFunction class_k_inf(Map eval);
  /// Extended class K on (-b, c); `b` and `c` are positive magnitudes.
  static ComparisonFunction extended_k(Map eval, Bound b = Bound::unbounded(),
                                       Bound c = Bound::unbounded());
  /// r -> lambda * r on the whole real line.
  static ComparisonFunction linear(double lambda);

  /// Throws Domain when `r` lies outside the domain.
  double operator()(double r) const;
  /// Evaluates without the domain check.
  double eval_unchecked(double r) const { return eval_(r); }

  bool in_domain(double r) const noexcept;
  bool lo_closed() const noexcept { return kind_ != ComparisonKind::ExtendedK; }
  bool hi_closed() const noexcept { return hi_closed_; }

  const Bound& lo() const noexcept { return lo_; }
  const Bound& hi() const noexcept { return hi_; }
  ComparisonKind kind() const noexcept { return kind_; }

 private:
  Map eval_;
  Bound lo_;
  Bound hi_;
  ComparisonKind kind_;
  bool hi_closed_;
};

enum class ViolationKind { ZeroAtZero, Monotonicity, NotUnbounded, NotFinite };

struct Violation {
  ViolationKind kind;
  double r1;
  double r2;
  double v1;
  double v2;

  std::string describe() const;
};

struct ValidationReport {
  std::size_t samples = 0;
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
};

inline constexpr int kDefaultValidationSamples = 1000;
inline constexpr double kDefaultInvertTol = 1e-10;

/// Dense sampled check of the class-K axioms. Samples are linearly spaced
/// over the domain (clipped to [-10, 10] for unbounded ends) plus log-spaced
/// toward every finite open end. Class K-infinity maps are additionally
/// checked for divergence on a doubling ladder.
ValidationReport validate(const ComparisonFunction& fn,
                          int samples = kDefaultValidationSamples);

/// beta(r) = -alpha(-r) on [0, b) for an extended class K alpha on (-b, c).
ComparisonFunction beta_of(const ComparisonFunction& alpha);

/// Solves fn(r) = y by bisection. The bracket grows geometrically (factor 2)
/// from the origin and is capped at the domain ends. Returns r with
/// |fn(r) - y| <= tol, or the best point once the bracket collapses to
/// adjacent doubles. Throws Range when y is not attained on the domain.
double invert(const ComparisonFunction& fn, double y,
              double tol = kDefaultInvertTol);

/// gamma = beta^{-1} o iota, the disturbance margin of the enlarged safe set.
/// Evaluating gamma(s) throws Range when iota(s) exceeds the range of beta.
ComparisonFunction gamma_from(const ComparisonFunction& alpha,
                              const ComparisonFunction& iota,
                              double tol = kDefaultInvertTol);

/// Largest disturbance bound d such that gamma(d) < b, where gamma is
/// gamma_from(alpha, iota). Unbounded when no finite bound exists.
Bound max_disturbance(const ComparisonFunction& alpha,
                      const ComparisonFunction& iota, Bound b,
                      double tol = kDefaultInvertTol);

}  // namespace issf

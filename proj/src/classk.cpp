#include "issf/classk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace issf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kZeroTol = 1e-12;
constexpr double kSampleWindow = 10.0;
constexpr int kMaxGrowthSteps = 2200;
constexpr int kMaxBisectionSteps = 400;
// Disturbance bounds admissible beyond this are reported as unbounded.
constexpr double kUnboundedDisturbance = 1e100;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double lo_value(const ComparisonFunction& fn) {
  return fn.lo().is_unbounded() ? -kInf : fn.lo().value();
}

double hi_value(const ComparisonFunction& fn) {
  return fn.hi().is_unbounded() ? kInf : fn.hi().value();
}

// Next probe when walking from `r` toward `edge` (signed direction `dir`):
// doubling away from the origin, halving the remaining gap once the doubled
// step would leave the domain.
double grow_toward(double r, double edge, bool edge_closed, int dir) {
  double next = (r == 0.0) ? static_cast<double>(dir) : 2.0 * r;
  if (std::isfinite(edge)) {
    const bool past = dir > 0 ? next >= edge : next <= edge;
    if (past) next = edge_closed ? edge : r + 0.5 * (edge - r);
  }
  return next;
}

}  // namespace

Bound Bound::at(double value) {
  if (std::isnan(value)) throw Error(ErrorKind::Domain, "bound is NaN");
  if (std::isinf(value)) return Bound::unbounded();
  Bound b;
  b.unbounded_ = false;
  b.value_ = value;
  return b;
}

double Bound::value() const {
  if (unbounded_) throw Error(ErrorKind::Usage, "value() on an unbounded bound");
  return value_;
}

double Bound::magnitude_or_inf() const noexcept {
  return unbounded_ ? kInf : value_;
}

std::string Bound::str() const { return unbounded_ ? "inf" : fmt(value_); }

const char* to_string(ComparisonKind kind) {
  switch (kind) {
    case ComparisonKind::ClassK: return "classK";
    case ComparisonKind::ClassKInf: return "classKinf";
    case ComparisonKind::ExtendedK: return "extendedK";
  }
  return "?";
}

ComparisonFunction::ComparisonFunction(Map eval, Bound lo, Bound hi,
                                       ComparisonKind kind, bool hi_closed)
    : eval_(std::move(eval)),
      lo_(lo),
      hi_(hi),
      kind_(kind),
      hi_closed_(hi_closed && hi.is_finite()) {
  if (!eval_) throw Error(ErrorKind::Usage, "comparison function has no map");
}

ComparisonFunction ComparisonFunction::class_k(Map eval, Bound a) {
  return ComparisonFunction(std::move(eval), Bound::at(0.0), a,
                            ComparisonKind::ClassK);
}

ComparisonFunction ComparisonFunction::class_k_inf(Map eval) {
  return ComparisonFunction(std::move(eval), Bound::at(0.0), Bound::unbounded(),
                            ComparisonKind::ClassKInf);
}

ComparisonFunction ComparisonFunction::extended_k(Map eval, Bound b, Bound c) {
  const Bound lo = b.is_unbounded() ? Bound::unbounded() : Bound::at(-b.value());
  return ComparisonFunction(std::move(eval), lo, c, ComparisonKind::ExtendedK);
}

ComparisonFunction ComparisonFunction::linear(double lambda) {
  if (!(lambda > 0.0))
    throw Error(ErrorKind::Domain, "linear comparison function needs lambda > 0, got " + fmt(lambda));
  return extended_k([lambda](double r) { return lambda * r; });
}

bool ComparisonFunction::in_domain(double r) const noexcept {
  if (std::isnan(r)) return false;
  if (lo_.is_finite()) {
    if (lo_closed() ? r < lo_.value() : r <= lo_.value()) return false;
  }
  if (hi_.is_finite()) {
    if (hi_closed_ ? r > hi_.value() : r >= hi_.value()) return false;
  }
  return true;
}

double ComparisonFunction::operator()(double r) const {
  if (!in_domain(r)) {
    throw Error(ErrorKind::Domain, "comparison function evaluated at " + fmt(r) +
                                       " outside its domain (" + lo_.str() + ", " +
                                       hi_.str() + ")");
  }
  return eval_(r);
}

std::string Violation::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case ViolationKind::ZeroAtZero:
      os << "value at zero is " << v1 << ", expected 0";
      break;
    case ViolationKind::Monotonicity:
      os << "not strictly increasing: f(" << r1 << ") = " << v1 << " >= f(" << r2
         << ") = " << v2;
      break;
    case ViolationKind::NotUnbounded:
      os << "class K-infinity map does not diverge: f(" << r2 << ") = " << v2;
      break;
    case ViolationKind::NotFinite:
      os << "non-finite value f(" << r1 << ") = " << v1;
      break;
  }
  return os.str();
}

ValidationReport validate(const ComparisonFunction& fn, int samples) {
  if (samples < 2) throw Error(ErrorKind::Usage, "validate needs at least 2 samples");
  const double lo = lo_value(fn);
  const double hi = hi_value(fn);
  if (!(lo < hi)) {
    throw Error(ErrorKind::Domain, "empty domain (" + fn.lo().str() + ", " + fn.hi().str() + ")");
  }
  if (fn.kind() == ComparisonKind::ClassKInf && fn.hi().is_finite()) {
    throw Error(ErrorKind::Domain, "class K-infinity map must have an unbounded domain");
  }

  const double wlo = std::max(lo, -kSampleWindow);
  const double whi = std::min(hi, kSampleWindow);
  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>(samples) + 2);

  const int n_edge = samples / 4;
  const int n_lin = std::max(2, samples - 2 * n_edge);
  for (int i = 0; i < n_lin; ++i) {
    const double t = static_cast<double>(i) / (n_lin - 1);
    pts.push_back(wlo + t * (whi - wlo));
  }
  // Log-spaced toward finite ends; the span is the distance to the origin or
  // to the far side of the window.
  auto edge_ladder = [&](double edge, int dir) {
    const double span = std::max(std::abs(edge), 1e-3);
    for (int i = 0; i < n_edge; ++i) {
      const double expo = -1.0 - 11.0 * static_cast<double>(i) / std::max(1, n_edge - 1);
      pts.push_back(edge + dir * span * std::pow(10.0, expo));
    }
  };
  if (std::isfinite(lo) && n_edge > 0) edge_ladder(lo, +1);
  if (std::isfinite(hi) && n_edge > 0) edge_ladder(hi, -1);
  if (fn.in_domain(0.0)) pts.push_back(0.0);

  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  pts.erase(std::remove_if(pts.begin(), pts.end(),
                           [&](double r) { return !fn.in_domain(r); }),
            pts.end());

  ValidationReport report;
  report.samples = pts.size();

  std::vector<double> vals(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    vals[i] = fn.eval_unchecked(pts[i]);
    if (!std::isfinite(vals[i])) {
      report.violations.push_back({ViolationKind::NotFinite, pts[i], pts[i], vals[i], vals[i]});
    }
  }
  if (fn.in_domain(0.0)) {
    const double v0 = fn.eval_unchecked(0.0);
    if (!(std::abs(v0) <= kZeroTol)) {
      report.violations.push_back({ViolationKind::ZeroAtZero, 0.0, 0.0, v0, v0});
    }
  }
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (!(vals[i] < vals[i + 1])) {
      report.violations.push_back(
          {ViolationKind::Monotonicity, pts[i], pts[i + 1], vals[i], vals[i + 1]});
    }
  }

  if (fn.kind() == ComparisonKind::ClassKInf) {
    const double base = std::max(1.0, std::abs(fn.eval_unchecked(1.0)));
    double last_r = 1.0;
    double last_v = fn.eval_unchecked(1.0);
    for (int k = 1; k <= 60; ++k) {
      last_r = std::ldexp(1.0, k);
      last_v = fn.eval_unchecked(last_r);
    }
    if (!(last_v >= 10.0 * base)) {
      report.violations.push_back({ViolationKind::NotUnbounded, 1.0, last_r, base, last_v});
    }
  }
  return report;
}

ComparisonFunction beta_of(const ComparisonFunction& alpha) {
  if (alpha.kind() != ComparisonKind::ExtendedK) {
    throw Error(ErrorKind::Usage, "beta_of needs an extended class K function");
  }
  if (alpha.lo().is_finite() && !(alpha.lo().value() < 0.0)) {
    throw Error(ErrorKind::Domain, "beta_of needs b > 0, alpha's domain starts at " +
                                       alpha.lo().str());
  }
  const Bound b = alpha.lo().is_unbounded() ? Bound::unbounded()
                                            : Bound::at(-alpha.lo().value());
  auto a = alpha;
  return ComparisonFunction([a](double r) { return -a.eval_unchecked(-r); }, Bound::at(0.0),
                            b, ComparisonKind::ClassK);
}

double invert(const ComparisonFunction& fn, double y, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorKind::Usage, "invert needs tol > 0");
  if (std::isnan(y)) throw Error(ErrorKind::Range, "invert target is NaN");
  if (!fn.in_domain(0.0)) throw Error(ErrorKind::Domain, "invert needs 0 in the domain");

  const double f0 = fn.eval_unchecked(0.0);
  if (std::abs(f0 - y) <= tol) return 0.0;
  const int dir = y > f0 ? 1 : -1;
  const double edge = dir > 0 ? hi_value(fn) : lo_value(fn);
  const bool edge_closed = dir > 0 ? fn.hi_closed() : fn.lo_closed();

  // `inner` stays on the near side of y, `outer` is the first probe past it.
  double inner = 0.0;
  double outer = 0.0;
  bool bracketed = false;
  for (int i = 0; i < kMaxGrowthSteps; ++i) {
    const double next = grow_toward(inner, edge, edge_closed, dir);
    if (next == inner || !std::isfinite(next)) break;
    const double v = fn.eval_unchecked(next);
    if (std::isnan(v)) break;
    if (dir > 0 ? v >= y : v <= y) {
      outer = next;
      bracketed = true;
      break;
    }
    inner = next;
  }
  if (!bracketed) {
    throw Error(ErrorKind::Range, "value " + fmt(y) + " is outside the range of the function on (" +
                                      fn.lo().str() + ", " + fn.hi().str() + ")");
  }

  double best = outer;
  double best_res = std::abs(fn.eval_unchecked(outer) - y);
  for (int i = 0; i < kMaxBisectionSteps && best_res > tol; ++i) {
    const double mid = inner + 0.5 * (outer - inner);
    if (mid == inner || mid == outer) break;
    const double v = fn.eval_unchecked(mid);
    const double res = std::abs(v - y);
    if (res < best_res) {
      best = mid;
      best_res = res;
    }
    if (dir > 0 ? v >= y : v <= y) {
      outer = mid;
    } else {
      inner = mid;
    }
  }
  const double inner_res = std::abs(fn.eval_unchecked(inner) - y);
  if (inner_res < best_res) best = inner;
  return best;
}

ComparisonFunction gamma_from(const ComparisonFunction& alpha, const ComparisonFunction& iota,
                              double tol) {
  if (iota.kind() == ComparisonKind::ExtendedK) {
    throw Error(ErrorKind::Usage, "gamma_from needs iota of class K");
  }
  const ComparisonFunction beta = beta_of(alpha);
  auto eval = [beta, iota, tol](double s) {
    const double target = iota(s);
    try {
      return invert(beta, target, tol);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Range) throw;
      throw Error(ErrorKind::Range, "iota(" + fmt(s) + ") = " + fmt(target) +
                                        " is not below the range limit of beta; the disturbance "
                                        "exceeds what alpha can absorb");
    }
  };
  return ComparisonFunction(eval, Bound::at(0.0), iota.hi(), ComparisonKind::ClassK,
                            iota.hi_closed());
}

Bound max_disturbance(const ComparisonFunction& alpha, const ComparisonFunction& iota, Bound b,
                      double tol) {
  if (b.is_finite() && !(b.value() > 0.0)) {
    throw Error(ErrorKind::Domain, "max_disturbance needs b > 0, got " + b.str());
  }
  const ComparisonFunction gamma = gamma_from(alpha, iota, std::min(tol, kDefaultInvertTol));
  auto admissible = [&](double s) {
    if (!gamma.in_domain(s)) return false;
    try {
      const double g = gamma.eval_unchecked(s);
      return b.is_unbounded() ? std::isfinite(g) : g < b.value();
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Range || e.kind() == ErrorKind::Domain) return false;
      throw;
    }
  };

  const double edge = hi_value(gamma);
  double good = 0.0;
  double bad = 0.0;
  bool found_bad = false;
  for (int i = 0; i < kMaxGrowthSteps; ++i) {
    const double next = grow_toward(good, edge, gamma.hi_closed(), +1);
    if (next == good || !std::isfinite(next) || next > kUnboundedDisturbance) break;
    if (!admissible(next)) {
      bad = next;
      found_bad = true;
      break;
    }
    good = next;
  }
  if (!found_bad) {
    return std::isfinite(edge) ? Bound::at(edge) : Bound::unbounded();
  }
  while (bad - good > tol) {
    const double mid = good + 0.5 * (bad - good);
    if (mid == good || mid == bad) break;
    if (admissible(mid)) {
      good = mid;
    } else {
      bad = mid;
    }
  }
  return Bound::at(good + 0.5 * (bad - good));
}

}  // namespace issf

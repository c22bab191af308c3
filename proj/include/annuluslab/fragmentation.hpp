#pragma once

#include <string>
#include <utility>
#include <vector>

#include "annuluslab/annulus.hpp"
#include "annuluslab/lift.hpp"
#include "annuluslab/report.hpp"

namespace annuluslab {

/// Decomposition of a circle lift into elements of A (lifts fixing pointwise a
/// nonempty open interval). The product f_1 o f_2 o ... o f_n equals target.
struct FragCertificate {
  PLLift target;
  std::vector<PLLift> factors;
  /// Threshold: least k >= 0 with min |F(x) - x| < k + 1.
  long k = 0;
  std::vector<FixedInterval> fixed_intervals;
  /// Whether the construction ran on the reflection x -> -x of the target.
  bool reflected = false;
  Rational min_disp;
  Rational max_disp;
};

/// f_1 o f_2 o ... o f_n (identity for an empty list).
inline PLLift product(const std::vector<PLLift>& factors, const Limits& limits = {}) {
  PLLift out = PLLift::identity();
  for (const auto& f : factors) out = compose(out, f, limits);
  return out;
}

namespace detail {

/// Builds a lift from increasing points of the line lying within one period
/// window; each point is moved to its representative with x in [0, 1).
inline PLLift lift_through(const std::vector<Sample>& points) {
  std::vector<Sample> reduced;
  reduced.reserve(points.size());
  for (const auto& p : points) {
    const Integer s = floor_int(p.x);
    reduced.push_back({Rational(p.x - Rational(s)), Rational(p.y - Rational(s))});
  }
  return PLLift::from_samples(std::move(reduced));
}

[[noreturn]] inline void broken(const std::string& what) { throw Error(ErrorCode::InternalInvariant, what); }

struct Step {
  PLLift h_inverse;  // first factor, fixes a neighbourhood of F(x0)
  PLLift remainder;  // h o F
};

/// Inductive step at level >= 1. Requires level <= F(x) - x < level + 1 at
/// the minimum. Produces h fixing a neighbourhood of c = F(x0) with
/// h(F(x1)) < x1 + level, so h o F has displacement in [level - 1, level) at
/// its minimum.
inline Step lower_displacement(const PLLift& f, long level, const Limits& limits) {
  const DisplacementSummary d = displacement_extrema(f);
  if (floor_long(d.min_disp) != level) broken("inductive step entered at the wrong level");
  const Rational& x0 = d.argmin;
  const Rational c = f(x0);
  // admissible x1: (x0, x0 + 1) intersected with (c - level, c - level + 1)
  const Rational x1 = midpoint(Rational(c - level), Rational(x0 + 1));
  const Rational y1 = f(x1);
  const Rational target = midpoint(c, Rational(x1 + level));
  if (!(c < y1 && y1 < c + 1 && c < target && target < c + 1)) broken("inductive step lost separation");
  Rational gap = min_q(Rational(y1 - c), Rational(c + 1 - y1));
  gap = min_q(gap, min_q(Rational(target - c), Rational(c + 1 - target)));
  const Rational delta = gap / 4;
  const PLLift h = lift_through({{Rational(c + delta), Rational(c + delta)},
                                 {y1, target},
                                 {Rational(c + 1 - delta), Rational(c + 1 - delta)}});
  Step step{invert(h), compose(h, f, limits)};
  const Rational moved = step.remainder(x1) - x1;
  if (!(moved < level)) broken("h o F does not steer F(x1) below x1 + level");
  return step;
}

/// Base step: 0 <= F(x0) - x0 < 1 at a chosen x0. Produces h fixing a
/// neighbourhood of c = F(x0) with h o F = Id on a neighbourhood of x1.
inline Step absorb(const PLLift& f, const Limits& limits) {
  const DisplacementSummary d = displacement_extrema(f);
  Rational x0;
  if (d.min_disp >= 0) {
    x0 = d.argmin;
  } else if (d.max_disp >= 0) {
    x0 = *leftmost_fixed_point(f);
  } else {
    broken("base step reached with negative displacement");
  }
  const Rational c = f(x0);
  if (!(x0 <= c && c < x0 + 1)) broken("base step displacement outside [0, 1)");
  const Rational x1 = midpoint(c, Rational(x0 + 1));
  const Rational eps = min_q(Rational(x1 - c), Rational(x0 + 1 - x1)) / 4;
  const Rational lo = x1 - eps;
  const Rational hi = x1 + eps;
  const Rational u = f(lo);
  const Rational v = f(hi);
  Rational gap = min_q(Rational(u - c), Rational(c + 1 - v));
  gap = min_q(gap, min_q(Rational(lo - c), Rational(c + 1 - hi)));
  if (!(gap > 0)) broken("base step lost separation");
  const Rational delta = gap / 4;

  // h = F^{-1} on [u, v]: pass through (F(b), b) for every breakpoint b of F
  // strictly inside (lo, hi)
  std::vector<Sample> points;
  points.push_back({Rational(c + delta), Rational(c + delta)});
  points.push_back({u, lo});
  std::vector<Rational> inner;
  const long base = floor_long(x1);
  for (const auto& s : f.samples()) {
    for (long j = base - 1; j <= base + 1; ++j) {
      Rational b = s.x + j;
      if (lo < b && b < hi) inner.push_back(std::move(b));
    }
  }
  std::sort(inner.begin(), inner.end());
  for (auto& b : inner) {
    Rational fb = f(b);
    points.push_back({std::move(fb), std::move(b)});
  }
  points.push_back({v, hi});
  points.push_back({Rational(c + 1 - delta), Rational(c + 1 - delta)});
  const PLLift h = lift_through(points);
  return Step{invert(h), compose(h, f, limits)};
}

}  // namespace detail

/// Constructive decomposition into exactly k + 2 elements of A, where k is the
/// least integer with min |F(x) - x| < k + 1. The identity gets no factors and
/// a member of A gets itself. Negative displacement is handled on the
/// reflection x -> -x, with the factors reflected back at the end.
inline FragCertificate fragment_circle(const PLLift& f, const Limits& limits = {}) {
  FragCertificate cert;
  cert.target = f;
  const DisplacementSummary d = displacement_extrema(f);
  cert.min_disp = d.min_disp;
  cert.max_disp = d.max_disp;
  cert.k = floor_long(d.min_abs_disp);
  if (f.is_identity()) return cert;
  if (auto iv = fixes_interval(f)) {
    cert.factors.push_back(f);
    cert.fixed_intervals.push_back(*iv);
    return cert;
  }

  PLLift work = f;
  if (d.max_disp < 0) {
    cert.reflected = true;
    work = reflect_conjugate(f);
  }
  std::vector<PLLift> factors;
  for (long level = cert.k; level >= 1; --level) {
    detail::Step step = detail::lower_displacement(work, level, limits);
    factors.push_back(std::move(step.h_inverse));
    work = std::move(step.remainder);
  }
  detail::Step last = detail::absorb(work, limits);
  factors.push_back(std::move(last.h_inverse));
  factors.push_back(std::move(last.remainder));

  if (cert.reflected) {
    for (auto& g : factors) g = reflect_conjugate(g);
  }
  for (const auto& g : factors) {
    auto iv = fixes_interval(g);
    if (!iv) detail::broken("constructed factor fixes no open interval");
    cert.fixed_intervals.push_back(*iv);
  }
  cert.factors = std::move(factors);
  if (!(product(cert.factors, limits) == f)) detail::broken("factor product differs from the target");
  return cert;
}

/// Checks a certificate: A-membership of each factor, the exact product, and
/// the necessary condition min |F(x) - x| < n - 1 for n >= 2 factors.
inline CheckReport verify_certificate(const FragCertificate& cert, const Limits& limits = {}) {
  CheckReport report;

  std::string outside;
  for (std::size_t i = 0; i < cert.factors.size(); ++i) {
    if (!fixes_interval(cert.factors[i])) {
      if (!outside.empty()) outside += ", ";
      outside += std::to_string(i);
    }
  }
  report.add("factors_fix_open_interval", outside.empty(),
             outside.empty() ? "all factors in A" : "factors not in A: " + outside);

  if (!cert.fixed_intervals.empty()) {
    bool ok = cert.fixed_intervals.size() == cert.factors.size();
    for (std::size_t i = 0; ok && i < cert.factors.size(); ++i) {
      const auto& iv = cert.fixed_intervals[i];
      const Rational m = iv.midpoint();
      ok = iv.a < iv.b && cert.factors[i](m) == m;
    }
    report.add("fixed_interval_witnesses", ok, ok ? "witness midpoints fixed" : "a witness interval is not fixed");
  }

  bool equal = false;
  std::string detail;
  try {
    equal = (product(cert.factors, limits) == cert.target);
    detail = equal ? "product equals target" : "product differs from target";
  } catch (const Error& e) {
    detail = e.what();
  }
  report.add("exact_product", equal, detail);

  const std::size_t n = cert.factors.size();
  if (n >= 2) {
    const Rational m = displacement_extrema(cert.target).min_abs_disp;
    const bool ok = m < static_cast<long>(n) - 1;
    report.add("displacement_bound", ok,
               "min |F(x)-x| = " + to_string(m) + (ok ? " < " : " >= ") + std::to_string(n - 1));
  } else {
    report.add("displacement_bound", true, "not applicable below two factors");
  }
  return report;
}

// ---------------------------------------------------------------------------
// Annulus fragmentation at the boundary-trace level.

enum class Regime { r0, r_general, r0_open_annulus, r_general_open_annulus };

inline Regime make_regime(bool r0, bool open_annulus) {
  if (r0) return open_annulus ? Regime::r0_open_annulus : Regime::r0;
  return open_annulus ? Regime::r_general_open_annulus : Regime::r_general;
}

inline bool is_r0(Regime r) { return r == Regime::r0 || r == Regime::r0_open_annulus; }
inline bool assumes_open_annulus(Regime r) {
  return r == Regime::r0_open_annulus || r == Regime::r_general_open_annulus;
}

/// Additive constant of the fragmentation upper bound E(alpha) + constant.
inline long frag_constant(Regime r) {
  switch (r) {
    case Regime::r0: return 36;
    case Regime::r_general: return 40;
    case Regime::r0_open_annulus: return 12;
    case Regime::r_general_open_annulus: return 16;
  }
  return 40;
}

inline std::string to_string(Regime r) {
  switch (r) {
    case Regime::r0: return "r0";
    case Regime::r_general: return "r_general";
    case Regime::r0_open_annulus: return "r0_open_annulus";
    case Regime::r_general_open_annulus: return "r_general_open_annulus";
  }
  return "r_general";
}

inline Regime parse_regime(const std::string& s) {
  if (s == "r0") return Regime::r0;
  if (s == "r_general") return Regime::r_general;
  if (s == "r0_open_annulus") return Regime::r0_open_annulus;
  if (s == "r_general_open_annulus") return Regime::r_general_open_annulus;
  throw Error(ErrorCode::InvalidArgument, "unknown regime \"" + s + "\"");
}

enum class FactorKind { explicit_factor, counted };

/// One disc-supported factor seen through its boundary traces. Counted factors
/// stand for two-dimensional pieces whose traces are the identity; only their
/// multiplicity matters.
struct TraceFactor {
  PLLift lower_trace;
  PLLift upper_trace;
  bool touches_lower = false;
  bool touches_upper = false;
  FactorKind kind = FactorKind::explicit_factor;
  long multiplicity = 1;
  std::string role;

  friend bool operator==(const TraceFactor& a, const TraceFactor& b) {
    return a.lower_trace == b.lower_trace && a.upper_trace == b.upper_trace &&
           a.touches_lower == b.touches_lower && a.touches_upper == b.touches_upper && a.kind == b.kind &&
           a.multiplicity == b.multiplicity && a.role == b.role;
  }
};

struct AnnulusFragPlan {
  AnnulusLift source;   // the lift as given
  AnnulusLift target;   // translate(source, deck_shift): the lift the factors compose to
  long deck_shift = 0;
  bool flipped = false;
  Rational x0;
  Rational alpha;
  Regime regime = Regime::r_general;
  std::vector<TraceFactor> factors;
  long total_count = 0;
};

inline long total_multiplicity(const std::vector<TraceFactor>& factors) {
  long n = 0;
  for (const auto& f : factors) n += f.multiplicity;
  return n;
}

namespace detail {

inline TraceFactor counted(long multiplicity, std::string role) {
  TraceFactor f;
  f.kind = FactorKind::counted;
  f.multiplicity = multiplicity;
  f.role = std::move(role);
  return f;
}

}  // namespace detail

/// Plans a decomposition into disc-supported factors: at most E(alpha) + 2
/// factors touching the upper boundary straighten the upper trace, at most two
/// more handle the lower trace, then four collar factors and the interior
/// factors (28, or 4 under the open-annulus assumption) are counted. General
/// regularity adds four for the approximation step.
inline AnnulusFragPlan plan_annulus_fragmentation(const AnnulusLift& a, Regime regime, const Limits& limits = {}) {
  if (is_identity_pair(a)) throw Error(ErrorCode::IdentityTarget, "plan needs a non-identity annulus lift");
  AnnulusFragPlan plan;
  plan.source = a;
  plan.regime = regime;

  const RecenterResult rc = recenter(a);
  plan.deck_shift = rc.shift;
  plan.flipped = rc.flipped;
  plan.x0 = rc.x0;
  plan.alpha = rc.alpha;
  plan.target = translate_diagonal(a, rc.shift);

  const AnnulusLift& b = rc.lift;
  const long e_alpha = floor_long(rc.alpha);
  if (!(b.upper(rc.x0) - rc.x0 < e_alpha + 1)) detail::broken("recentered upper trace too far from x0");

  const FragCertificate upper = fragment_circle(b.upper, limits);
  const FragCertificate lower = fragment_circle(b.lower, limits);
  if (static_cast<long>(upper.factors.size()) > e_alpha + 2) detail::broken("upper trace needs too many factors");
  if (lower.factors.size() > 2) detail::broken("lower trace needs more than two factors");

  // b = (Id, F1) o (F0, Id): upper factors first, then lower ones
  for (const auto& g : upper.factors) {
    TraceFactor f;
    f.lower_trace = PLLift::identity();
    f.upper_trace = g;
    f.touches_upper = true;
    f.role = "upper";
    plan.factors.push_back(std::move(f));
  }
  for (const auto& g : lower.factors) {
    TraceFactor f;
    f.lower_trace = g;
    f.upper_trace = PLLift::identity();
    f.touches_lower = true;
    f.role = "lower";
    plan.factors.push_back(std::move(f));
  }
  if (rc.flipped) {
    for (auto& f : plan.factors) {
      std::swap(f.lower_trace, f.upper_trace);
      std::swap(f.touches_lower, f.touches_upper);
      f.role = (f.role == "upper") ? "lower" : "upper";
    }
  }
  plan.factors.push_back(detail::counted(4, "collar"));
  plan.factors.push_back(detail::counted(assumes_open_annulus(regime) ? 4 : 28, "interior"));
  if (!is_r0(regime)) plan.factors.push_back(detail::counted(4, "approximation"));
  plan.total_count = total_multiplicity(plan.factors);

  if (plan.total_count > e_alpha + frag_constant(regime)) detail::broken("plan exceeds the fragmentation upper bound");
  if (plan.total_count < e_alpha + 1) detail::broken("plan below the fragmentation lower bound");
  return plan;
}

struct AuditReport {
  CheckReport checks;
  long k0 = 0;
  long k1 = 0;
  long total = 0;
  Rational alpha;
  /// Which branch of the (k0, k1) case analysis applies: "both_at_least_two",
  /// "one_and_at_least_two", "zero_and_at_least_two", "one_one", "degenerate".
  std::string analysis_case;

  bool passed() const { return checks.passed(); }
};

inline std::string classify_touch_counts(long k0, long k1) {
  const long lo = std::min(k0, k1);
  const long hi = std::max(k0, k1);
  if (lo >= 2) return "both_at_least_two";
  if (lo == 1 && hi >= 2) return "one_and_at_least_two";
  if (lo == 0 && hi >= 2) return "zero_and_at_least_two";
  if (lo == 1 && hi == 1) return "one_one";
  return "degenerate";
}

/// Audits a claimed decomposition of a into disc-supported factors at the
/// trace level and checks the strict lower bound alpha(a) < number of factors.
inline AuditReport audit_annulus_fragmentation(const AnnulusLift& a, const std::vector<TraceFactor>& factors,
                                               const Limits& limits = {}) {
  AuditReport out;
  std::string both, flags, outside, counted_bad;
  auto note = [](std::string& list, std::size_t i) {
    if (!list.empty()) list += ", ";
    list += std::to_string(i);
  };
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const TraceFactor& f = factors[i];
    if (f.touches_lower && f.touches_upper) note(both, i);
    if ((!f.touches_lower && !f.lower_trace.is_identity()) || (!f.touches_upper && !f.upper_trace.is_identity())) {
      note(flags, i);
    }
    if ((!f.lower_trace.is_identity() && !fixes_interval(f.lower_trace)) ||
        (!f.upper_trace.is_identity() && !fixes_interval(f.upper_trace))) {
      note(outside, i);
    }
    const bool counted_ok = f.kind == FactorKind::counted
                                ? (f.multiplicity >= 1 && f.lower_trace.is_identity() && f.upper_trace.is_identity())
                                : f.multiplicity == 1;
    if (!counted_ok) note(counted_bad, i);
    if (f.touches_lower) out.k0 += f.multiplicity;
    if (f.touches_upper) out.k1 += f.multiplicity;
    out.total += f.multiplicity;
  }
  out.checks.add("no_factor_touches_both_boundaries", both.empty(), both.empty() ? "" : "factors: " + both);
  out.checks.add("touch_flags_match_traces", flags.empty(), flags.empty() ? "" : "factors: " + flags);
  out.checks.add("traces_fix_open_interval", outside.empty(), outside.empty() ? "" : "factors: " + outside);
  out.checks.add("multiplicities_valid", counted_bad.empty(), counted_bad.empty() ? "" : "factors: " + counted_bad);

  bool composes = false;
  std::string detail;
  try {
    PLLift lower = PLLift::identity();
    PLLift upper = PLLift::identity();
    for (const auto& f : factors) {
      if (f.kind == FactorKind::counted) continue;
      lower = compose(lower, f.lower_trace, limits);
      upper = compose(upper, f.upper_trace, limits);
    }
    composes = (lower == a.lower && upper == a.upper);
    detail = composes ? "traces compose to the target" : "trace product differs from the target";
  } catch (const Error& e) {
    detail = e.what();
  }
  out.checks.add("exact_trace_composition", composes, detail);

  out.alpha = alpha(a);
  out.analysis_case = classify_touch_counts(out.k0, out.k1);
  if (is_identity_pair(a)) {
    out.checks.add("alpha_below_count", true, "identity target");
  } else {
    const bool ok = out.alpha < out.total;
    out.checks.add("alpha_below_count", ok,
                   "alpha = " + to_string(out.alpha) + (ok ? " < " : " >= ") + std::to_string(out.total));
  }
  return out;
}

}  // namespace annuluslab

#pragma once

#include <utility>

#include "annuluslab/lift.hpp"
#include "annuluslab/rotation.hpp"

namespace annuluslab {

/// Lift of an annulus homeomorphism, represented by its boundary traces on
/// R x {0} (lower) and R x {1} (upper). Both traces belong to one chosen lift,
/// so deck translations act on them together.
struct AnnulusLift {
  PLLift lower;
  PLLift upper;

  friend bool operator==(const AnnulusLift& a, const AnnulusLift& b) {
    return a.lower == b.lower && a.upper == b.upper;
  }
};

inline AnnulusLift make_annulus(PLLift lower, PLLift upper) { return {std::move(lower), std::move(upper)}; }

/// Traces of a lift of the identity: the same integer translation on both
/// boundary lines.
inline bool is_identity_pair(const AnnulusLift& a) {
  const auto c = a.lower.translation_amount();
  return c && a.lower == a.upper && c->get_den() == 1;
}

inline AnnulusLift translate_diagonal(const AnnulusLift& a, long k) {
  return {translate(a.lower, k), translate(a.upper, k)};
}

inline AnnulusLift twist_power(long n) { return {PLLift::identity(), PLLift::translation(Rational(n))}; }

/// Conjugation by (x, r) -> (x, 1 - r): swaps the boundary traces.
inline AnnulusLift flip(const AnnulusLift& a) { return {a.upper, a.lower}; }

inline AnnulusLift compose_annulus(const AnnulusLift& a, const AnnulusLift& b, const Limits& limits = {}) {
  return {compose(a.lower, b.lower, limits), compose(a.upper, b.upper, limits)};
}

inline AnnulusLift invert_annulus(const AnnulusLift& a) { return {invert(a.lower), invert(a.upper)}; }

inline AnnulusLift power_annulus(const AnnulusLift& a, long n, const Limits& limits = {}) {
  return {power(a.lower, n, limits), power(a.upper, n, limits)};
}

/// Torsion number: tau(upper) - tau(lower), exact when both traces are. Each
/// trace gets half of the width target.
inline CertifiedInterval rho(const AnnulusLift& a, const TauOptions& opts = {}) {
  TauOptions half = opts;
  half.width_target = opts.width_target / 2;
  const TauResult lower = tau(a.lower, half);
  const TauResult upper = tau(a.upper, half);
  return upper.interval - lower.interval;
}

/// Signed extrema of upper - lower (reported in the DisplacementSummary
/// layout: min_abs_disp is alpha).
inline DisplacementSummary trace_gap_extrema(const AnnulusLift& a) {
  return detail::summarize(detail::difference_profile(a.upper, a.lower));
}

/// alpha = min over the line of |F1 - F0|.
inline Rational alpha(const AnnulusLift& a) { return trace_gap_extrema(a).min_abs_disp; }

struct RecenterResult {
  AnnulusLift lift;   // translate(flip?(a), shift)
  long shift = 0;
  bool flipped = false;
  Rational x0;        // leftmost alpha-attaining point in [0, 1)
  Rational alpha;
};

/// Positive-twist normalization followed by the deck translation putting
/// F0(x0) - x0 into (-1, 0] at the leftmost point x0 where
/// alpha = F1(x0) - F0(x0).
inline RecenterResult recenter(const AnnulusLift& a) {
  RecenterResult out;
  AnnulusLift b = a;
  auto profile = detail::difference_profile(b.upper, b.lower);
  auto gap = detail::summarize(profile);
  if (gap.max_disp < 0) {
    out.flipped = true;
    b = flip(b);
    profile = detail::difference_profile(b.upper, b.lower);
    gap = detail::summarize(profile);
  }
  if (gap.min_disp >= 0) {
    out.x0 = gap.argmin;
  } else {
    // sign change: alpha = 0 at the leftmost zero
    out.x0 = *profile.leftmost_zero();
  }
  out.alpha = gap.min_abs_disp;
  const Rational v = b.lower(out.x0) - out.x0;
  out.shift = -ceil_long(v);
  out.lift = translate_diagonal(b, out.shift);
  return out;
}

}  // namespace annuluslab

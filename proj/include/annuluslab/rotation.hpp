#pragma once

#include <optional>
#include <utility>

#include "annuluslab/lift.hpp"

namespace annuluslab {

/// Rational interval guaranteed to contain an exact real invariant.
struct CertifiedInterval {
  Rational lo;
  Rational hi;
  bool exact = false;

  static CertifiedInterval point(const Rational& v) { return {v, v, true}; }

  Rational width() const { return Rational(hi - lo); }
  Rational mid() const { return midpoint(lo, hi); }
  bool contains(const Rational& v) const { return lo <= v && v <= hi; }
  bool intersects(const CertifiedInterval& o) const { return lo <= o.hi && o.lo <= hi; }
  bool within(const Rational& a, const Rational& b) const { return a <= lo && hi <= b; }

  friend bool operator==(const CertifiedInterval& a, const CertifiedInterval& b) {
    return a.lo == b.lo && a.hi == b.hi && a.exact == b.exact;
  }
};

inline CertifiedInterval make_interval(Rational lo, Rational hi) {
  const bool exact = (lo == hi);
  return {std::move(lo), std::move(hi), exact};
}

inline CertifiedInterval operator+(const CertifiedInterval& a, const CertifiedInterval& b) {
  return make_interval(Rational(a.lo + b.lo), Rational(a.hi + b.hi));
}

inline CertifiedInterval operator-(const CertifiedInterval& a) {
  return make_interval(Rational(-a.hi), Rational(-a.lo));
}

inline CertifiedInterval operator-(const CertifiedInterval& a, const CertifiedInterval& b) { return a + (-b); }

inline CertifiedInterval scale(const CertifiedInterval& a, long n) {
  Rational x = a.lo * n;
  Rational y = a.hi * n;
  if (n < 0) std::swap(x, y);
  return make_interval(std::move(x), std::move(y));
}

inline CertifiedInterval shift(const CertifiedInterval& a, const Rational& k) {
  return make_interval(Rational(a.lo + k), Rational(a.hi + k));
}

/// Range of |v| for v in the interval.
inline CertifiedInterval abs_interval(const CertifiedInterval& a) {
  if (a.lo >= 0) return a;
  if (a.hi <= 0) return -a;
  return make_interval(Rational(0), max_q(Rational(-a.lo), a.hi));
}

/// Intersection of two enclosures of the same quantity. Both being valid, the
/// intersection is nonempty; an empty one means a bug upstream.
inline CertifiedInterval intersect(const CertifiedInterval& a, const CertifiedInterval& b) {
  CertifiedInterval r = make_interval(max_q(a.lo, b.lo), min_q(a.hi, b.hi));
  if (r.lo > r.hi) throw Error(ErrorCode::InternalInvariant, "disjoint enclosures of one invariant");
  return r;
}

struct RationalTau {
  Rational value;  // p / q
  Integer p;
  long q = 1;
};

struct TauResult {
  CertifiedInterval interval;
  std::optional<RationalTau> rational_value;
  long iterations_used = 0;
};

struct TauOptions {
  Rational width_target = Rational(1, 64);
  long q_max = 8;
  /// Largest iterate n the doubling schedule may reach.
  long max_iterations = 1L << 12;
  Limits limits{};
};

/// Enclosure [min_disp(F^n)/n, max_disp(F^n)/n] read off an already computed
/// iterate.
inline CertifiedInterval tau_bounds_of_iterate(const PLLift& iterate, long n) {
  const DisplacementSummary d = displacement_extrema(iterate);
  return make_interval(Rational(d.min_disp / n), Rational(d.max_disp / n));
}

inline CertifiedInterval tau_bounds(const PLLift& f, long n, const Limits& limits = {}) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "tau_bounds needs n >= 1");
  return tau_bounds_of_iterate(power(f, n, limits), n);
}

namespace detail {

/// Widens a non-exact enclosure to the grid 2^-32 so that its endpoints stay
/// short. Exact enclosures pass through unchanged.
inline CertifiedInterval round_outward(const CertifiedInterval& a) {
  if (a.exact) return a;
  const Integer grid = Integer(1) << 32;
  Rational lo(floor_int(Rational(a.lo * grid)), grid);
  Rational hi(ceil_int(Rational(a.hi * grid)), grid);
  lo.canonicalize();
  hi.canonicalize();
  return make_interval(std::move(lo), std::move(hi));
}

/// If the iterate F^q has a point with F^q(x) = x + p, returns p. The
/// displacement is continuous with spread < 1, so at most one integer lies in
/// its range and the intermediate value theorem decides attainment.
inline std::optional<Integer> periodic_offset(const PLLift& iterate) {
  const DisplacementSummary d = displacement_extrema(iterate);
  Integer p = ceil_int(d.min_disp);
  if (Rational(p) <= d.max_disp) return p;
  return std::nullopt;
}

}  // namespace detail

/// Smallest-period rational translation number, if some q <= q_max works.
inline std::optional<RationalTau> tau_rational(const PLLift& f, long q_max, const Limits& limits = {}) {
  if (q_max < 1) throw Error(ErrorCode::InvalidArgument, "tau_rational needs q_max >= 1");
  PLLift iterate = f;
  for (long q = 1; q <= q_max; ++q) {
    if (q > 1) iterate = compose(iterate, f, limits);
    if (auto p = detail::periodic_offset(iterate)) {
      RationalTau r;
      r.value = Rational(*p, q);
      r.value.canonicalize();
      r.p = *p;
      r.q = q;
      return r;
    }
  }
  return std::nullopt;
}

/// Translation number: periodic-orbit detection for q <= q_max, then doubling
/// n = 1, 2, 4, ... until the certified width drops below the target or n
/// would exceed max_iterations. The returned interval is always a valid
/// enclosure, rounded outward to multiples of 2^-32 when not exact; it is
/// narrower than the target only when the loop converged.
inline TauResult tau(const PLLift& f, const TauOptions& opts = {}) {
  TauResult result;
  if (auto c = f.translation_amount()) {
    result.interval = CertifiedInterval::point(*c);
    RationalTau r;
    r.value = *c;
    r.p = c->get_num();
    r.q = c->get_den().get_si();
    result.rational_value = r;
    result.iterations_used = 1;
    return result;
  }

  if (opts.q_max >= 1) {
    PLLift iterate = f;
    for (long q = 1; q <= opts.q_max; ++q) {
      if (q > 1) iterate = compose(iterate, f, opts.limits);
      result.iterations_used = q;
      if (auto p = detail::periodic_offset(iterate)) {
        RationalTau r;
        r.value = Rational(*p, q);
        r.value.canonicalize();
        r.p = *p;
        r.q = q;
        result.interval = CertifiedInterval::point(r.value);
        result.rational_value = r;
        return result;
      }
    }
  }

  PLLift iterate = f;
  long n = 1;
  result.interval = detail::round_outward(tau_bounds_of_iterate(iterate, n));
  result.iterations_used = std::max(result.iterations_used, n);
  while (!result.interval.exact && result.interval.width() >= opts.width_target && n * 2 <= opts.max_iterations) {
    iterate = compose(iterate, iterate, opts.limits);
    n *= 2;
    result.interval = intersect(result.interval, detail::round_outward(tau_bounds_of_iterate(iterate, n)));
    result.iterations_used = std::max(result.iterations_used, n);
  }
  return result;
}

}  // namespace annuluslab

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "annuluslab/annulus.hpp"
#include "annuluslab/fragmentation.hpp"
#include "annuluslab/report.hpp"
#include "annuluslab/rotation.hpp"

namespace annuluslab {

/// Regularity order r of the diffeomorphism group: 0 (homeomorphisms), a
/// positive integer, or infinity.
struct Regularity {
  long order = 0;
  bool infinite = false;

  static Regularity r0() { return {0, false}; }
  /// Representative of the general case r != 0, 2, 3.
  static Regularity general() { return {0, true}; }
  static Regularity of(long r) { return {r, false}; }

  bool is_zero() const { return !infinite && order == 0; }
  /// The commutator-length estimates exclude r = 2 and r = 3.
  bool excluded_for_commutators() const { return !infinite && (order == 2 || order == 3); }

  std::string name() const {
    if (infinite) return "general";
    if (order == 0) return "r0";
    return "r" + std::to_string(order);
  }
};

inline Regularity parse_regularity(const std::string& s) {
  if (s == "r0" || s == "0") return Regularity::r0();
  if (s == "general" || s == "inf" || s == "rinf") return Regularity::general();
  std::string digits = (!s.empty() && s[0] == 'r') ? s.substr(1) : s;
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
    throw Error(ErrorCode::InvalidArgument, "unknown regularity \"" + s + "\"");
  }
  return Regularity::of(std::stol(digits));
}

struct Bracket {
  long lower = 0;
  long upper = 0;

  friend bool operator==(const Bracket& a, const Bracket& b) { return a.lower == b.lower && a.upper == b.upper; }
};

struct BoundsReport {
  Rational alpha;
  long floor_alpha = 0;
  CertifiedInterval rho;
  Regularity regularity;
  bool open_annulus_assumed = false;
  /// Absent when the regularity is excluded for commutator length (r = 2, 3).
  std::optional<Bracket> cl;
  long cl_constant = 0;
  Bracket frag;
  long frag_constant = 0;
};

/// Exact commutator length in Homeo_Z(R): least n >= 1 with
/// min |F(x) - x| < 2n - 1, and 0 for the identity.
inline long ehn_commutator_count(const PLLift& f) {
  if (f.is_identity()) return 0;
  const Rational m = displacement_extrema(f).min_abs_disp;
  // 2n - 1 > m  <=>  n > (m + 1) / 2
  return floor_long(Rational((m + 1) / 2)) + 1;
}

inline long cl_upper_constant(const Regularity& r) { return r.is_zero() ? 5 : 9; }

/// [E(alpha / 4) + 1, E((alpha + 3) / 4) + 9], with 5 in place of 9 for r = 0.
inline Bracket cl_bracket(const Rational& alpha, const Regularity& r) {
  if (r.excluded_for_commutators()) {
    throw Error(ErrorCode::UnsupportedRegularity, "commutator-length estimates exclude r = 2 and r = 3");
  }
  if (alpha < 0) throw Error(ErrorCode::InvalidArgument, "alpha must be nonnegative");
  return {floor_long(Rational(alpha / 4)) + 1, floor_long(Rational((alpha + 3) / 4)) + cl_upper_constant(r)};
}

inline Regime regime_for(const Regularity& r, bool open_annulus) { return make_regime(r.is_zero(), open_annulus); }

/// [E(alpha) + 1, E(alpha) + {40, 36, 16, 12}].
inline Bracket frag_bracket(const Rational& alpha, Regime regime) {
  if (alpha < 0) throw Error(ErrorCode::InvalidArgument, "alpha must be nonnegative");
  const long e = floor_long(alpha);
  return {e + 1, e + frag_constant(regime)};
}

inline Bracket cl_bounds(const AnnulusLift& a, const Regularity& r) {
  if (is_identity_pair(a)) throw Error(ErrorCode::IdentityTarget, "cl bounds need a non-identity annulus lift");
  return cl_bracket(alpha(a), r);
}

inline Bracket frag_bounds(const AnnulusLift& a, const Regularity& r, bool open_annulus_assumed) {
  if (is_identity_pair(a)) throw Error(ErrorCode::IdentityTarget, "frag bounds need a non-identity annulus lift");
  return frag_bracket(alpha(a), regime_for(r, open_annulus_assumed));
}

inline BoundsReport bounds_report(const AnnulusLift& a, const Regularity& r, bool open_annulus_assumed,
                                  const TauOptions& opts = {}) {
  if (is_identity_pair(a)) throw Error(ErrorCode::IdentityTarget, "bounds need a non-identity annulus lift");
  BoundsReport rep;
  rep.alpha = alpha(a);
  rep.floor_alpha = floor_long(rep.alpha);
  rep.rho = rho(a, opts);
  rep.regularity = r;
  rep.open_annulus_assumed = open_annulus_assumed;
  if (!r.excluded_for_commutators()) {
    rep.cl = cl_bracket(rep.alpha, r);
    rep.cl_constant = cl_upper_constant(r);
  }
  const Regime regime = regime_for(r, open_annulus_assumed);
  rep.frag = frag_bracket(rep.alpha, regime);
  rep.frag_constant = frag_constant(regime);
  return rep;
}

/// Quasi-isometry bands: the cl bracket within |rho| / 4 +- 12 and the frag
/// bracket within |rho| +- 40, for both the r = 0 and the general constants.
/// An interval rho widens the bands to its full |rho| range.
inline CheckReport qi_band_check(const AnnulusLift& a, const TauOptions& opts = {}) {
  if (is_identity_pair(a)) throw Error(ErrorCode::IdentityTarget, "band check needs a non-identity annulus lift");
  CheckReport report;
  TauOptions precise = opts;
  precise.width_target = min_q(opts.width_target, Rational(1, 64));
  const CertifiedInterval r = rho(a, precise);
  const bool precise_enough = r.exact || r.width() <= Rational(1, 64);
  report.add("rho_precision", precise_enough, "width " + to_string(r.width()));
  const CertifiedInterval mag = abs_interval(r);
  const Rational al = alpha(a);

  for (const Regularity reg : {Regularity::general(), Regularity::r0()}) {
    const Bracket cl = cl_bracket(al, reg);
    const bool cl_ok = Rational(cl.lower) >= mag.lo / 4 - 12 && Rational(cl.upper) <= mag.hi / 4 + 12;
    report.add("cl_band_" + reg.name(), cl_ok,
               "[" + std::to_string(cl.lower) + ", " + std::to_string(cl.upper) + "] vs |rho|/4 in [" +
                   to_string(Rational(mag.lo / 4)) + ", " + to_string(Rational(mag.hi / 4)) + "]");
    const Bracket fr = frag_bracket(al, regime_for(reg, false));
    const bool fr_ok = Rational(fr.lower) >= mag.lo - 40 && Rational(fr.upper) <= mag.hi + 40;
    report.add("frag_band_" + reg.name(), fr_ok,
               "[" + std::to_string(fr.lower) + ", " + std::to_string(fr.upper) + "] vs |rho| in [" +
                   to_string(mag.lo) + ", " + to_string(mag.hi) + "]");
  }
  return report;
}

using LiftPair = std::pair<PLLift, PLLift>;

/// [g, h] = g h g^-1 h^-1.
inline PLLift commutator(const PLLift& g, const PLLift& h, const Limits& limits = {}) {
  return compose(compose(g, h, limits), compose(invert(g), invert(h), limits), limits);
}

struct CommutatorProduct {
  PLLift product;
  CheckReport report;
  Rational min_abs_disp;
  CertifiedInterval tau;
};

/// Exact product of commutators with the two necessary conditions it must
/// satisfy: min |P(x) - x| < 2n - 1 and |tau(P)| <= 2n.
inline CommutatorProduct commutator_product(const std::vector<LiftPair>& pairs, const TauOptions& opts = {}) {
  CommutatorProduct out;
  out.product = PLLift::identity();
  for (const auto& [g, h] : pairs) out.product = compose(out.product, commutator(g, h, opts.limits), opts.limits);
  const long n = static_cast<long>(pairs.size());
  out.min_abs_disp = displacement_extrema(out.product).min_abs_disp;
  if (n == 0) {
    out.report.add("ehn_necessity", out.product.is_identity(), "empty product");
  } else {
    const bool ok = out.min_abs_disp < 2 * n - 1;
    out.report.add("ehn_necessity", ok,
                   "min |P(x)-x| = " + to_string(out.min_abs_disp) + (ok ? " < " : " >= ") + std::to_string(2 * n - 1));
  }
  out.tau = tau(out.product, opts).interval;
  const bool in_band = out.tau.within(Rational(-2 * n), Rational(2 * n));
  out.report.add("bavard_bound", in_band,
                 "tau in [" + to_string(out.tau.lo) + ", " + to_string(out.tau.hi) + "], bound " + std::to_string(2 * n));
  return out;
}

}  // namespace annuluslab

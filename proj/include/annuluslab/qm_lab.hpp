#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "annuluslab/annulus.hpp"
#include "annuluslab/bounds.hpp"
#include "annuluslab/report.hpp"
#include "annuluslab/rotation.hpp"
#include "annuluslab/sampler.hpp"

namespace annuluslab {

enum class QmName { tau_circle, rho_annulus };

inline std::string to_string(QmName q) { return q == QmName::tau_circle ? "tau_circle" : "rho_annulus"; }

inline QmName parse_qm_name(const std::string& s) {
  if (s == "tau_circle" || s == "tau") return QmName::tau_circle;
  if (s == "rho_annulus" || s == "rho") return QmName::rho_annulus;
  throw Error(ErrorCode::InvalidArgument, "unknown quasi-morphism \"" + s + "\"");
}

/// Known defect bound: 1 for the translation number, 2 for the torsion number.
inline Rational known_defect_bound(QmName q) { return Rational(q == QmName::tau_circle ? 1 : 2); }

using Element = std::variant<PLLift, AnnulusLift>;

inline CertifiedInterval eval_qm(QmName name, const Element& element, const TauOptions& opts = {}) {
  if (name == QmName::tau_circle) {
    const auto* f = std::get_if<PLLift>(&element);
    if (!f) throw Error(ErrorCode::TypeMismatch, "tau_circle evaluates circle lifts");
    return tau(*f, opts).interval;
  }
  const auto* a = std::get_if<AnnulusLift>(&element);
  if (!a) throw Error(ErrorCode::TypeMismatch, "rho_annulus evaluates annulus lifts");
  return rho(*a, opts);
}

namespace detail {

inline Element element_compose(const Element& a, const Element& b, const Limits& limits) {
  if (const auto* f = std::get_if<PLLift>(&a)) {
    const auto* g = std::get_if<PLLift>(&b);
    if (!g) throw Error(ErrorCode::TypeMismatch, "mixed element types");
    return compose(*f, *g, limits);
  }
  const auto* g = std::get_if<AnnulusLift>(&b);
  if (!g) throw Error(ErrorCode::TypeMismatch, "mixed element types");
  return compose_annulus(std::get<AnnulusLift>(a), *g, limits);
}

inline Element element_power(const Element& a, long n, const Limits& limits) {
  if (const auto* f = std::get_if<PLLift>(&a)) return power(*f, n, limits);
  return power_annulus(std::get<AnnulusLift>(a), n, limits);
}

inline Element element_invert(const Element& a) {
  if (const auto* f = std::get_if<PLLift>(&a)) return invert(*f);
  return invert_annulus(std::get<AnnulusLift>(a));
}

/// Consistency of two enclosures of the same real number.
inline bool consistent(const CertifiedInterval& a, const CertifiedInterval& b) {
  if (a.exact && b.exact) return a.lo == b.lo;
  return a.intersects(b);
}

}  // namespace detail

struct DefectProbeResult {
  QmName name = QmName::tau_circle;
  SamplerConfig config;
  long trials = 0;
  /// Largest certified upper end of |q(ab) - q(a) - q(b)| seen.
  Rational observed_max;
  /// Width of the enclosure behind observed_max.
  Rational slack;
  /// Largest certified lower end: a rigorous lower bound on the defect.
  Rational certified_lower_bound;
  Rational bound;
  /// Trials whose certified lower end exceeds the bound.
  long violations = 0;

  bool passed() const { return violations == 0 && observed_max - slack <= bound; }
};

/// Samples `trials` pairs (a, b) and encloses |q(ab) - q(a) - q(b)|. Trial i
/// draws its elements from substreams derive_seed(seed, 2i) and
/// derive_seed(seed, 2i + 1); annulus elements use 4i..4i+3 for their traces.
inline DefectProbeResult defect_probe(QmName name, const SamplerConfig& config, long trials,
                                      const TauOptions& opts = {},
                                      const std::optional<SamplerConfig>& upper_config = std::nullopt) {
  if (trials < 1) throw Error(ErrorCode::InvalidArgument, "defect_probe needs trials >= 1");
  DefectProbeResult out;
  out.name = name;
  out.config = config;
  out.trials = trials;
  out.bound = known_defect_bound(name);
  bool first = true;
  const SamplerConfig& upper = upper_config ? *upper_config : config;
  for (long t = 0; t < trials; ++t) {
    const auto i = static_cast<std::uint64_t>(t);
    Element a, b;
    if (name == QmName::tau_circle) {
      a = sample_lift(config.with_seed(derive_seed(config.seed, 2 * i)));
      b = sample_lift(config.with_seed(derive_seed(config.seed, 2 * i + 1)));
    } else {
      a = sample_annulus(config.with_seed(derive_seed(config.seed, 4 * i)),
                         upper.with_seed(derive_seed(config.seed, 4 * i + 1)));
      b = sample_annulus(config.with_seed(derive_seed(config.seed, 4 * i + 2)),
                         upper.with_seed(derive_seed(config.seed, 4 * i + 3)));
    }
    const Element ab = detail::element_compose(a, b, opts.limits);
    const CertifiedInterval e = eval_qm(name, ab, opts) - eval_qm(name, a, opts) - eval_qm(name, b, opts);
    const CertifiedInterval mag = abs_interval(e);
    if (first || mag.hi > out.observed_max) {
      out.observed_max = mag.hi;
      out.slack = e.width();
    }
    if (first || mag.lo > out.certified_lower_bound) out.certified_lower_bound = mag.lo;
    if (mag.lo > out.bound) ++out.violations;
    first = false;
  }
  return out;
}

/// q(a^n) against n q(a) for n = 1..n_max.
inline CheckReport homogeneity_probe(QmName name, const Element& element, long n_max, const TauOptions& opts = {}) {
  if (n_max < 1) throw Error(ErrorCode::InvalidArgument, "homogeneity_probe needs n_max >= 1");
  CheckReport report;
  const CertifiedInterval base = eval_qm(name, element, opts);
  for (long n = 1; n <= n_max; ++n) {
    const CertifiedInterval pow_value = eval_qm(name, detail::element_power(element, n, opts.limits), opts);
    const CertifiedInterval scaled = scale(base, n);
    const bool ok = detail::consistent(pow_value, scaled);
    report.add("n=" + std::to_string(n), ok,
               (pow_value.exact && scaled.exact ? "exact " : "interval ") + to_string(pow_value.lo) + ".." +
                   to_string(pow_value.hi) + " vs " + to_string(scaled.lo) + ".." + to_string(scaled.hi));
  }
  return report;
}

/// q(h g h^-1) against q(g).
inline CheckReport conjugation_probe(QmName name, const Element& g, const Element& h, const TauOptions& opts = {}) {
  CheckReport report;
  const Element conj =
      detail::element_compose(detail::element_compose(h, g, opts.limits), detail::element_invert(h), opts.limits);
  const CertifiedInterval a = eval_qm(name, conj, opts);
  const CertifiedInterval b = eval_qm(name, g, opts);
  report.add("conjugation_invariance", detail::consistent(a, b),
             to_string(a.lo) + ".." + to_string(a.hi) + " vs " + to_string(b.lo) + ".." + to_string(b.hi));
  return report;
}

struct GapReport {
  CheckReport report;
  Rational alpha;
  CertifiedInterval rho;
  /// ||rho| - alpha| when rho is exact.
  std::optional<Rational> exact_gap;
};

/// ||rho(f)| - alpha(f)| <= 2, with the rho enclosure width as slack.
inline GapReport rho_alpha_gap(const AnnulusLift& a, const TauOptions& opts = {}) {
  GapReport out;
  out.alpha = alpha(a);
  out.rho = rho(a, opts);
  const CertifiedInterval mag = abs_interval(out.rho);
  // distance from alpha to the |rho| range
  Rational dist(0);
  if (out.alpha < mag.lo) dist = mag.lo - out.alpha;
  if (out.alpha > mag.hi) dist = out.alpha - mag.hi;
  if (out.rho.exact) out.exact_gap = abs_q(Rational(mag.lo - out.alpha));
  const bool ok = dist <= 2;
  out.report.add("rho_alpha_gap", ok, "distance " + to_string(dist) + ", slack " + to_string(out.rho.width()));
  return out;
}

/// |tau(prod [G_i, H_i])| <= 2n using the defect bound 1 of tau.
inline CheckReport bavard_probe(const std::vector<LiftPair>& pairs, const TauOptions& opts = {}) {
  CommutatorProduct cp = commutator_product(pairs, opts);
  CheckReport report;
  report.checks.push_back(*cp.report.find("bavard_bound"));
  return report;
}

/// rho(t^n f) - rho(f) - n stays within the defect bound 2 for n in
/// [-window, window].
inline CheckReport twist_drift_probe(const AnnulusLift& a, long window, const TauOptions& opts = {}) {
  CheckReport report;
  const CertifiedInterval base = rho(a, opts);
  for (long n = -window; n <= window; ++n) {
    const CertifiedInterval moved = rho(compose_annulus(twist_power(n), a, opts.limits), opts);
    const CertifiedInterval drift = shift(moved - base, Rational(-n));
    const bool ok = abs_interval(drift).lo <= 2;
    report.add("n=" + std::to_string(n), ok, "drift " + to_string(drift.lo) + ".." + to_string(drift.hi));
  }
  return report;
}

}  // namespace annuluslab

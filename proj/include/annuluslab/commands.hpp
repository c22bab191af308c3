#pragma once

#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "annuluslab/annulus.hpp"
#include "annuluslab/bounds.hpp"
#include "annuluslab/document.hpp"
#include "annuluslab/fragmentation.hpp"
#include "annuluslab/qm_lab.hpp"
#include "annuluslab/report.hpp"
#include "annuluslab/rotation.hpp"
#include "annuluslab/sampler.hpp"

namespace annuluslab {

enum class OutputFormat { human, json };

inline OutputFormat parse_output_format(const std::string& s) {
  if (s == "human") return OutputFormat::human;
  if (s == "json") return OutputFormat::json;
  throw Error(ErrorCode::InvalidArgument, "unknown format \"" + s + "\" (expected human or json)");
}

struct CommandFlags {
  std::string regime = "general";
  bool open_annulus = false;
  long iterations = 1L << 12;
  long q_max = 8;
  Rational width = Rational(1, 64);
  std::optional<std::uint64_t> seed;
  std::optional<long> trials;
  std::optional<std::string> qm;
  /// Probe kind for the probe command: defect, homogeneity, conjugation, gap,
  /// bavard or drift.
  std::string probe;
  long n_max = 8;
  long count = 1;
  std::string sample_kind = "lift";

  TauOptions tau_options() const {
    TauOptions o;
    o.width_target = width;
    o.q_max = q_max;
    o.max_iterations = iterations;
    return o;
  }
};

struct Report {
  std::string command;
  Json result = Json::object();
  CheckReport checks;
  /// A document the command produced (certificate, plan, sampled element),
  /// printed alone under --emit.
  std::optional<Json> document;

  bool passed() const { return checks.passed(); }
  int exit_code() const { return passed() ? 0 : 1; }
};

// ---------------------------------------------------------------------------
// json views of results

inline Json interval_json(const CertifiedInterval& i) {
  return Json{{"lo", to_string(i.lo)}, {"hi", to_string(i.hi)}, {"exact", i.exact}, {"width", to_string(i.width())}};
}

inline Json tau_json(const TauResult& t) {
  Json j = interval_json(t.interval);
  j["iterations_used"] = t.iterations_used;
  if (t.rational_value) {
    j["rational"] = Json{{"value", to_string(t.rational_value->value)},
                         {"p", t.rational_value->p.get_str()},
                         {"q", t.rational_value->q}};
  } else {
    j["rational"] = nullptr;
  }
  return j;
}

inline Json bracket_json(const Bracket& b) { return Json::array({b.lower, b.upper}); }

inline Json checks_json(const CheckReport& r) {
  Json out = Json::array();
  for (const auto& c : r.checks) out.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  return out;
}

inline Json displacement_json(const DisplacementSummary& d) {
  return Json{{"min", to_string(d.min_disp)},
              {"max", to_string(d.max_disp)},
              {"argmin", to_string(d.argmin)},
              {"argmax", to_string(d.argmax)},
              {"min_abs", to_string(d.min_abs_disp)}};
}

inline Json bounds_json(const BoundsReport& b) {
  Json j{{"alpha", to_string(b.alpha)},
         {"floor_alpha", b.floor_alpha},
         {"rho", interval_json(b.rho)},
         {"regularity", b.regularity.name()},
         {"open_annulus_assumed", b.open_annulus_assumed},
         {"frag", Json{{"bracket", bracket_json(b.frag)},
                       {"constant", b.frag_constant},
                       {"formula", "[E(alpha)+1, E(alpha)+" + std::to_string(b.frag_constant) + "]"}}}};
  if (b.cl) {
    j["cl"] = Json{{"bracket", bracket_json(*b.cl)},
                   {"constant", b.cl_constant},
                   {"formula", "[E(alpha/4)+1, E((alpha+3)/4)+" + std::to_string(b.cl_constant) + "]"}};
  } else {
    j["cl"] = nullptr;
  }
  return j;
}

inline Json defect_json(const DefectProbeResult& r) {
  return Json{{"qm", to_string(r.name)},
              {"config", sampler_json(r.config)},
              {"trials", r.trials},
              {"observed_max", to_string(r.observed_max)},
              {"slack", to_string(r.slack)},
              {"certified_lower_bound", to_string(r.certified_lower_bound)},
              {"bound", to_string(r.bound)},
              {"violations", r.violations}};
}

// ---------------------------------------------------------------------------
// commands

namespace detail {

inline const Document& single(const std::vector<Document>& docs, const std::string& command) {
  if (docs.size() != 1) {
    throw Error(ErrorCode::InvalidArgument,
                command + " takes exactly one document, got " + std::to_string(docs.size()));
  }
  return docs.front();
}

inline Regularity flag_regularity(const CommandFlags& f) { return parse_regularity(f.regime); }

inline Report analyze(const std::vector<Document>& docs, const CommandFlags& flags) {
  Report rep;
  const Document& d = single(docs, "analyze");
  const TauOptions opts = flags.tau_options();
  if (d.kind() == DocumentKind::lift) {
    const PLLift& f = d.as<PLLift>("lift");
    rep.result["input"] = "lift";
    rep.result["tau"] = tau_json(tau(f, opts));
    const DisplacementSummary disp = displacement_extrema(f);
    rep.result["displacement"] = displacement_json(disp);
    rep.result["ehn_commutator_count"] = ehn_commutator_count(f);
    rep.result["fixes_interval"] = fixes_interval(f).has_value();
    const FragCertificate cert = fragment_circle(f, opts.limits);
    rep.result["fragmentation_factors"] = cert.factors.size();
    rep.checks.append(verify_certificate(cert, opts.limits), "fragmentation.");
    return rep;
  }
  const AnnulusLift& a = d.as<AnnulusLift>("lift or annulus");
  rep.result["input"] = "annulus";
  rep.result["tau_lower"] = tau_json(tau(a.lower, opts));
  rep.result["tau_upper"] = tau_json(tau(a.upper, opts));
  rep.result["rho"] = interval_json(rho(a, opts));
  rep.result["alpha"] = to_string(alpha(a));
  const DisplacementSummary gap = trace_gap_extrema(a);
  rep.result["trace_gap"] = Json{{"min", to_string(gap.min_disp)}, {"max", to_string(gap.max_disp)}};
  const bool identity = is_identity_pair(a);
  rep.result["identity"] = identity;
  const GapReport g = rho_alpha_gap(a, opts);
  rep.checks.append(g.report);
  if (identity) return rep;
  const Rational al = alpha(a);
  rep.result["cl"] = Json{{"general", bracket_json(cl_bracket(al, Regularity::general()))},
                          {"r0", bracket_json(cl_bracket(al, Regularity::r0()))}};
  Json frag = Json::object();
  for (Regime r : {Regime::r0, Regime::r_general, Regime::r0_open_annulus, Regime::r_general_open_annulus}) {
    frag[to_string(r)] = bracket_json(frag_bracket(al, r));
  }
  rep.result["frag"] = frag;
  rep.checks.append(qi_band_check(a, opts), "qi.");
  return rep;
}

inline Report tau_command(const std::vector<Document>& docs, const CommandFlags& flags) {
  Report rep;
  const Document& d = single(docs, "tau");
  const TauOptions opts = flags.tau_options();
  if (d.kind() == DocumentKind::annulus) {
    const AnnulusLift& a = d.as<AnnulusLift>("annulus");
    rep.result["lower"] = tau_json(tau(a.lower, opts));
    rep.result["upper"] = tau_json(tau(a.upper, opts));
    rep.result["rho"] = interval_json(rho(a, opts));
    return rep;
  }
  rep.result = tau_json(tau(d.as<PLLift>("lift or annulus"), opts));
  return rep;
}

inline Report fragment(const std::vector<Document>& docs, const CommandFlags& flags) {
  Report rep;
  const PLLift& f = single(docs, "fragment").as<PLLift>("lift");
  const Limits limits = flags.tau_options().limits;
  const FragCertificate cert = fragment_circle(f, limits);
  rep.result["factor_count"] = cert.factors.size();
  rep.result["k"] = cert.k;
  rep.result["reflected"] = cert.reflected;
  rep.result["certificate"] = to_json(cert);
  rep.document = to_json(cert);
  rep.checks = verify_certificate(cert, limits);
  return rep;
}

inline Report verify(const std::vector<Document>& docs, const CommandFlags& flags) {
  Report rep;
  const FragCertificate& cert = single(docs, "verify").as<FragCertificate>("certificate");
  rep.result["factor_count"] = cert.factors.size();
  rep.result["k"] = cert.k;
  rep.result["target_min_abs_disp"] = to_string(displacement_extrema(cert.target).min_abs_disp);
  rep.checks = verify_certificate(cert, flags.tau_options().limits);
  return rep;
}

inline Json audit_json(const AuditReport& a) {
  return Json{{"k0", a.k0},
              {"k1", a.k1},
              {"total", a.total},
              {"alpha", to_string(a.alpha)},
              {"analysis_case", a.analysis_case}};
}

inline Report plan(const std::vector<Document>& docs, const CommandFlags& flags) {
  Report rep;
  const AnnulusLift& a = single(docs, "plan").as<AnnulusLift>("annulus");
  const Regularity reg = flag_regularity(flags);
  const Regime regime = regime_for(reg, flags.open_annulus);
  const Limits limits = flags.tau_options().limits;
  const AnnulusFragPlan p = plan_annulus_fragmentation(a, regime, limits);
  const Bracket bracket = frag_bracket(p.alpha, regime);
  rep.result["regime"] = to_string(regime);
  rep.result["total_count"] = p.total_count;
  rep.result["bracket"] = bracket_json(bracket);
  rep.result["plan"] = to_json(p);
  rep.document = to_json(p);
  rep.checks.add("sandwich_lower", p.total_count >= bracket.lower,
                 std::to_string(p.total_count) + " >= " + std::to_string(bracket.lower));
  rep.checks.add("sandwich_upper", p.total_count <= bracket.upper,
                 std::to_string(p.total_count) + " <= " + std::to_string(bracket.upper));
  const AuditReport audit = audit_annulus_fragmentation(p.target, p.factors, limits);
  rep.result["audit"] = audit_json(audit);
  rep.checks.append(audit.checks, "audit.");
  return rep;
}

inline Report audit(const std::vector<Document>& docs, const CommandFlags& flags) {
  Report rep;
  const AnnulusFragPlan& p = single(docs, "audit").as<AnnulusFragPlan>("plan");
  const AuditReport a = audit_annulus_fragmentation(p.target, p.factors, flags.tau_options().limits);
  rep.result = audit_json(a);
  rep.result["regime"] = to_string(p.regime);
  rep.checks = a.checks;
  return rep;
}

inline Report bounds(const std::vector<Document>& docs, const CommandFlags& flags) {
  Report rep;
  const AnnulusLift& a = single(docs, "bounds").as<AnnulusLift>("annulus");
  const TauOptions opts = flags.tau_options();
  const BoundsReport b = bounds_report(a, flag_regularity(flags), flags.open_annulus, opts);
  rep.result = bounds_json(b);
  if (b.cl) rep.checks.add("cl_bracket_ordered", b.cl->lower <= b.cl->upper);
  rep.checks.add("frag_bracket_ordered", b.frag.lower <= b.frag.upper);
  rep.checks.append(qi_band_check(a, opts), "qi.");
  return rep;
}

inline ProbeConfig probe_config(const std::vector<Document>& docs, const CommandFlags& flags) {
  ProbeConfig c;
  for (const auto& d : docs) {
    if (d.kind() == DocumentKind::probe_config) c = d.as<ProbeConfig>("probe_config");
  }
  if (flags.seed) c.sampler.seed = *flags.seed;
  if (flags.trials) c.trials = *flags.trials;
  if (flags.qm) c.qm = parse_qm_name(*flags.qm);
  return c;
}

inline Report sample(const std::vector<Document>& docs, const CommandFlags& flags) {
  Report rep;
  if (docs.size() > 1) throw Error(ErrorCode::InvalidArgument, "sample takes at most one probe_config document");
  if (flags.count < 1) throw Error(ErrorCode::InvalidArgument, "--count must be >= 1");
  const ProbeConfig c = probe_config(docs, flags);
  const SamplerConfig upper = c.upper_sampler ? *c.upper_sampler : c.sampler;
  Json out = Json::array();
  for (long i = 0; i < flags.count; ++i) {
    const auto idx = static_cast<std::uint64_t>(i);
    if (flags.sample_kind == "lift") {
      out.push_back(to_json(sample_lift(c.sampler.with_seed(derive_seed(c.sampler.seed, idx)))));
    } else if (flags.sample_kind == "annulus") {
      out.push_back(to_json(sample_annulus(c.sampler.with_seed(derive_seed(c.sampler.seed, 2 * idx)),
                                           upper.with_seed(derive_seed(c.sampler.seed, 2 * idx + 1)))));
    } else {
      throw Error(ErrorCode::InvalidArgument, "--kind must be lift or annulus");
    }
  }
  rep.result["sampler"] = sampler_json(c.sampler);
  if (c.upper_sampler) rep.result["upper_sampler"] = sampler_json(*c.upper_sampler);
  rep.result["documents"] = out;
  if (flags.count == 1) rep.document = out.front();
  return rep;
}

inline Element element_of(const Document& d) {
  if (d.kind() == DocumentKind::lift) return d.as<PLLift>("lift");
  return d.as<AnnulusLift>("lift or annulus");
}

inline QmName qm_for(const Element& e) {
  return std::holds_alternative<PLLift>(e) ? QmName::tau_circle : QmName::rho_annulus;
}

inline Report probe(const std::vector<Document>& docs, const CommandFlags& flags) {
  Report rep;
  const TauOptions opts = flags.tau_options();
  std::string kind = flags.probe;
  if (kind.empty()) {
    kind = "defect";
    for (const auto& d : docs) {
      if (d.kind() == DocumentKind::probe_config) kind = d.as<ProbeConfig>("probe_config").probe;
    }
  }
  rep.result["probe"] = kind;

  if (kind == "defect") {
    const ProbeConfig c = probe_config(docs, flags);
    const DefectProbeResult r = defect_probe(c.qm, c.sampler, c.trials, opts, c.upper_sampler);
    rep.result["defect"] = defect_json(r);
    if (c.upper_sampler) rep.result["upper_sampler"] = sampler_json(*c.upper_sampler);
    rep.checks.add("defect_bound", r.passed(),
                   "observed " + to_string(r.observed_max) + " - slack " + to_string(r.slack) + " vs bound " +
                       to_string(r.bound));
  } else if (kind == "homogeneity") {
    const Element e = element_of(single(docs, "probe homogeneity"));
    rep.result["qm"] = to_string(qm_for(e));
    rep.result["n_max"] = flags.n_max;
    rep.checks = homogeneity_probe(qm_for(e), e, flags.n_max, opts);
  } else if (kind == "conjugation") {
    if (docs.size() != 2) throw Error(ErrorCode::InvalidArgument, "probe conjugation takes two documents: g and h");
    const Element g = element_of(docs[0]);
    const Element h = element_of(docs[1]);
    if (g.index() != h.index()) throw Error(ErrorCode::TypeMismatch, "g and h must have the same document kind");
    rep.result["qm"] = to_string(qm_for(g));
    rep.checks = conjugation_probe(qm_for(g), g, h, opts);
  } else if (kind == "gap") {
    const AnnulusLift& a = single(docs, "probe gap").as<AnnulusLift>("annulus");
    const GapReport g = rho_alpha_gap(a, opts);
    rep.result["alpha"] = to_string(g.alpha);
    rep.result["rho"] = interval_json(g.rho);
    rep.result["exact_gap"] = g.exact_gap ? Json(to_string(*g.exact_gap)) : Json(nullptr);
    rep.checks = g.report;
  } else if (kind == "bavard") {
    if (docs.size() % 2 != 0) throw Error(ErrorCode::InvalidArgument, "probe bavard takes pairs of lift documents");
    std::vector<LiftPair> pairs;
    for (std::size_t i = 0; i < docs.size(); i += 2) {
      pairs.push_back({docs[i].as<PLLift>("lift"), docs[i + 1].as<PLLift>("lift")});
    }
    const CommutatorProduct cp = commutator_product(pairs, opts);
    rep.result["pairs"] = pairs.size();
    rep.result["tau"] = interval_json(cp.tau);
    rep.result["min_abs_disp"] = to_string(cp.min_abs_disp);
    rep.checks = cp.report;
  } else if (kind == "drift") {
    const AnnulusLift& a = single(docs, "probe drift").as<AnnulusLift>("annulus");
    rep.result["window"] = flags.n_max;
    rep.checks = twist_drift_probe(a, flags.n_max, opts);
  } else {
    throw Error(ErrorCode::UnknownCommand, "unknown probe \"" + kind + "\"");
  }
  return rep;
}

}  // namespace detail

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"analyze", "tau",    "fragment", "verify", "plan",
                                              "audit",   "bounds", "sample",   "probe"};
  return names;
}

/// Runs one command. Errors from the modules propagate as Error; check
/// failures are recorded in the report.
inline Report run_command(const std::string& command, const std::vector<Document>& docs, const CommandFlags& flags) {
  Report rep;
  if (command == "analyze") {
    rep = detail::analyze(docs, flags);
  } else if (command == "tau") {
    rep = detail::tau_command(docs, flags);
  } else if (command == "fragment") {
    rep = detail::fragment(docs, flags);
  } else if (command == "verify") {
    rep = detail::verify(docs, flags);
  } else if (command == "plan") {
    rep = detail::plan(docs, flags);
  } else if (command == "audit") {
    rep = detail::audit(docs, flags);
  } else if (command == "bounds") {
    rep = detail::bounds(docs, flags);
  } else if (command == "sample") {
    rep = detail::sample(docs, flags);
  } else if (command == "probe") {
    rep = detail::probe(docs, flags);
  } else {
    throw Error(ErrorCode::UnknownCommand, "unknown command \"" + command + "\"");
  }
  rep.command = command;
  return rep;
}

// ---------------------------------------------------------------------------
// output

inline Json report_json(const Report& r) {
  return Json{{"command", r.command},
              {"status", r.passed() ? "pass" : "fail"},
              {"failures", r.checks.failures()},
              {"checks", checks_json(r.checks)},
              {"result", r.result}};
}

inline Json error_json(const std::string& command, const Error& e) {
  return Json{{"command", command},
              {"status", "error"},
              {"error", Json{{"code", to_string(e.code())}, {"cause", to_string(e.cause())}, {"message", e.what()}}}};
}

namespace detail {

inline bool scalar_array(const Json& j) {
  for (const auto& v : j) {
    if (v.is_structured()) return false;
  }
  return true;
}

inline std::string scalar_text(const Json& j) { return j.is_string() ? j.get<std::string>() : j.dump(); }

inline void flatten(const Json& j, const std::string& path, std::ostringstream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(*it, path.empty() ? it.key() : path + "." + it.key(), out);
  } else if (j.is_array() && scalar_array(j)) {
    out << "  " << path << ": [";
    for (std::size_t i = 0; i < j.size(); ++i) out << (i ? ", " : "") << scalar_text(j[i]);
    out << "]\n";
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", out);
  } else {
    out << "  " << path << ": " << scalar_text(j) << "\n";
  }
}

}  // namespace detail

/// human: a sorted key/value listing of the result, then one line per check.
/// json: the canonical report object.
inline std::string write_report(const Report& r, OutputFormat format) {
  if (format == OutputFormat::json) return dump_canonical(report_json(r));
  std::ostringstream out;
  out << "command: " << r.command << "\n";
  if (!r.result.empty()) {
    out << "result:\n";
    detail::flatten(r.result, "", out);
  }
  if (!r.checks.checks.empty()) {
    out << "checks:\n";
    for (const auto& c : r.checks.checks) {
      out << "  " << (c.passed ? "PASS " : "FAIL ") << c.name;
      if (!c.detail.empty()) out << "  (" << c.detail << ")";
      out << "\n";
    }
  }
  out << "status: " << (r.passed() ? "pass" : "fail") << "\n";
  return out.str();
}

}  // namespace annuluslab

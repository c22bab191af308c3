#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "annuluslab/annulus.hpp"
#include "annuluslab/fragmentation.hpp"
#include "annuluslab/lift.hpp"
#include "annuluslab/qm_lab.hpp"
#include "annuluslab/sampler.hpp"

namespace annuluslab {

using Json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

/// Settings for the probe and sample commands.
struct ProbeConfig {
  std::string probe = "defect";
  QmName qm = QmName::tau_circle;
  long trials = 100;
  SamplerConfig sampler;
  std::optional<SamplerConfig> upper_sampler;

  friend bool operator==(const ProbeConfig& a, const ProbeConfig& b) {
    return a.probe == b.probe && a.qm == b.qm && a.trials == b.trials && a.sampler == b.sampler &&
           a.upper_sampler == b.upper_sampler;
  }
};

enum class DocumentKind { lift, annulus, certificate, plan, probe_config };

inline std::string to_string(DocumentKind k) {
  switch (k) {
    case DocumentKind::lift: return "lift";
    case DocumentKind::annulus: return "annulus";
    case DocumentKind::certificate: return "certificate";
    case DocumentKind::plan: return "plan";
    case DocumentKind::probe_config: return "probe_config";
  }
  return "unknown";
}

using DocumentPayload = std::variant<PLLift, AnnulusLift, FragCertificate, AnnulusFragPlan, ProbeConfig>;

struct Document {
  DocumentPayload payload;

  DocumentKind kind() const { return static_cast<DocumentKind>(payload.index()); }

  template <typename T>
  const T& as(const char* what) const {
    if (const T* p = std::get_if<T>(&payload)) return *p;
    throw Error(ErrorCode::TypeMismatch, std::string("expected a ") + what + " document, got " + to_string(kind()));
  }
};

// ---------------------------------------------------------------------------
// serialization

inline Json samples_json(const PLLift& f) {
  Json out = Json::array();
  for (const auto& s : f.samples()) out.push_back(Json::array({to_string(s.x), to_string(s.y)}));
  return out;
}

inline Json sampler_json(const SamplerConfig& c) {
  return Json{{"seed", c.seed},
              {"breakpoint_count", c.breakpoint_count},
              {"denominator_bound", c.denominator_bound},
              {"displacement_offset", to_string(c.displacement_offset)},
              {"roughness", to_string(c.roughness)}};
}

inline Json annulus_fields(const AnnulusLift& a) {
  return Json{{"lower", samples_json(a.lower)}, {"upper", samples_json(a.upper)}};
}

inline Json trace_factor_json(const TraceFactor& f) {
  return Json{{"kind", f.kind == FactorKind::counted ? "counted" : "explicit"},
              {"lower", samples_json(f.lower_trace)},
              {"upper", samples_json(f.upper_trace)},
              {"touches_lower", f.touches_lower},
              {"touches_upper", f.touches_upper},
              {"multiplicity", f.multiplicity},
              {"role", f.role}};
}

inline Json to_json(const PLLift& f) {
  return Json{{"kind", "lift"}, {"format_version", kFormatVersion}, {"samples", samples_json(f)}};
}

inline Json to_json(const AnnulusLift& a) {
  Json j = annulus_fields(a);
  j["kind"] = "annulus";
  j["format_version"] = kFormatVersion;
  return j;
}

inline Json to_json(const FragCertificate& c) {
  Json factors = Json::array();
  for (const auto& f : c.factors) factors.push_back(samples_json(f));
  Json intervals = Json::array();
  for (const auto& iv : c.fixed_intervals) {
    intervals.push_back(Json{{"a", to_string(iv.a)}, {"b", to_string(iv.b)}, {"whole_line", iv.whole_line}});
  }
  return Json{{"kind", "certificate"},
              {"format_version", kFormatVersion},
              {"target", samples_json(c.target)},
              {"factors", factors},
              {"k", c.k},
              {"fixed_intervals", intervals},
              {"reflected", c.reflected},
              {"min_disp", to_string(c.min_disp)},
              {"max_disp", to_string(c.max_disp)}};
}

inline Json to_json(const AnnulusFragPlan& p) {
  Json factors = Json::array();
  for (const auto& f : p.factors) factors.push_back(trace_factor_json(f));
  return Json{{"kind", "plan"},
              {"format_version", kFormatVersion},
              {"source", annulus_fields(p.source)},
              {"target", annulus_fields(p.target)},
              {"deck_shift", p.deck_shift},
              {"flipped", p.flipped},
              {"x0", to_string(p.x0)},
              {"alpha", to_string(p.alpha)},
              {"regime", to_string(p.regime)},
              {"factors", factors},
              {"total_count", p.total_count}};
}

inline Json to_json(const ProbeConfig& c) {
  Json j{{"kind", "probe_config"},
         {"format_version", kFormatVersion},
         {"probe", c.probe},
         {"qm", to_string(c.qm)},
         {"trials", c.trials},
         {"sampler", sampler_json(c.sampler)}};
  if (c.upper_sampler) j["upper_sampler"] = sampler_json(*c.upper_sampler);
  return j;
}

inline Json to_json(const Document& d) {
  return std::visit([](const auto& p) { return to_json(p); }, d.payload);
}

/// Canonical text: sorted keys, two-space indent, trailing newline.
inline std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

inline std::string serialize_document(const Document& d) { return dump_canonical(to_json(d)); }

// ---------------------------------------------------------------------------
// parsing

namespace detail {

[[noreturn]] inline void bad_field(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::SyntaxError, "at " + path + ": " + what);
}

inline const Json& field(const Json& obj, const std::string& path, const char* key) {
  if (!obj.is_object()) bad_field(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) bad_field(path, std::string("missing field \"") + key + "\"");
  return *it;
}

inline Rational rational_field(const Json& j, const std::string& path) {
  if (!j.is_string()) bad_field(path, "rationals are written as \"p/q\" strings");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const Error& e) {
    bad_field(path, e.message());
  }
}

inline long integer_field(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) bad_field(path, "expected an integer");
  return j.get<long>();
}

inline bool bool_field(const Json& j, const std::string& path) {
  if (!j.is_boolean()) bad_field(path, "expected true or false");
  return j.get<bool>();
}

inline std::string string_field(const Json& j, const std::string& path) {
  if (!j.is_string()) bad_field(path, "expected a string");
  return j.get<std::string>();
}

/// Lift invariants surface as InvariantViolation naming the broken one.
inline PLLift lift_field(const Json& j, const std::string& path) {
  if (!j.is_array()) bad_field(path, "expected an array of [x, y] samples");
  std::vector<Sample> samples;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    const Json& pair = j[i];
    if (!pair.is_array() || pair.size() != 2) bad_field(p, "expected an [x, y] pair");
    samples.push_back({rational_field(pair[0], p + "[0]"), rational_field(pair[1], p + "[1]")});
  }
  try {
    return PLLift::from_samples(std::move(samples));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ResourceLimit) throw;
    throw Error(ErrorCode::InvariantViolation, e.code(), e.message() + " at " + path);
  }
}

inline AnnulusLift annulus_field(const Json& j, const std::string& path) {
  return {lift_field(field(j, path, "lower"), path + ".lower"), lift_field(field(j, path, "upper"), path + ".upper")};
}

inline SamplerConfig sampler_field(const Json& j, const std::string& path) {
  SamplerConfig c;
  const Json& seed = field(j, path, "seed");
  if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0)) {
    bad_field(path + ".seed", "expected a nonnegative integer");
  }
  c.seed = seed.get<std::uint64_t>();
  c.breakpoint_count = integer_field(field(j, path, "breakpoint_count"), path + ".breakpoint_count");
  c.denominator_bound = integer_field(field(j, path, "denominator_bound"), path + ".denominator_bound");
  c.displacement_offset = rational_field(field(j, path, "displacement_offset"), path + ".displacement_offset");
  c.roughness = rational_field(field(j, path, "roughness"), path + ".roughness");
  return c;
}

[[noreturn]] inline void violated(const std::string& what) { throw Error(ErrorCode::InvariantViolation, what); }

inline FragCertificate certificate_payload(const Json& j) {
  FragCertificate c;
  c.target = lift_field(field(j, "$", "target"), "$.target");
  const Json& factors = field(j, "$", "factors");
  if (!factors.is_array()) bad_field("$.factors", "expected an array");
  for (std::size_t i = 0; i < factors.size(); ++i) {
    c.factors.push_back(lift_field(factors[i], "$.factors[" + std::to_string(i) + "]"));
  }
  c.k = integer_field(field(j, "$", "k"), "$.k");
  const Json& intervals = field(j, "$", "fixed_intervals");
  if (!intervals.is_array()) bad_field("$.fixed_intervals", "expected an array");
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const std::string p = "$.fixed_intervals[" + std::to_string(i) + "]";
    c.fixed_intervals.push_back({rational_field(field(intervals[i], p, "a"), p + ".a"),
                                 rational_field(field(intervals[i], p, "b"), p + ".b"),
                                 bool_field(field(intervals[i], p, "whole_line"), p + ".whole_line")});
  }
  c.reflected = bool_field(field(j, "$", "reflected"), "$.reflected");
  c.min_disp = rational_field(field(j, "$", "min_disp"), "$.min_disp");
  c.max_disp = rational_field(field(j, "$", "max_disp"), "$.max_disp");

  // derived fields must agree with the target; the factors are left to verify
  const DisplacementSummary d = displacement_extrema(c.target);
  if (d.min_disp != c.min_disp || d.max_disp != c.max_disp) violated("certificate extrema disagree with its target");
  if (c.k != floor_long(d.min_abs_disp)) violated("certificate threshold k disagrees with its target");
  return c;
}

inline AnnulusFragPlan plan_payload(const Json& j) {
  AnnulusFragPlan p;
  p.source = annulus_field(field(j, "$", "source"), "$.source");
  p.target = annulus_field(field(j, "$", "target"), "$.target");
  p.deck_shift = integer_field(field(j, "$", "deck_shift"), "$.deck_shift");
  p.flipped = bool_field(field(j, "$", "flipped"), "$.flipped");
  p.x0 = rational_field(field(j, "$", "x0"), "$.x0");
  p.alpha = rational_field(field(j, "$", "alpha"), "$.alpha");
  try {
    p.regime = parse_regime(string_field(field(j, "$", "regime"), "$.regime"));
  } catch (const Error& e) {
    bad_field("$.regime", e.message());
  }
  const Json& factors = field(j, "$", "factors");
  if (!factors.is_array()) bad_field("$.factors", "expected an array");
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const std::string path = "$.factors[" + std::to_string(i) + "]";
    const Json& fj = factors[i];
    TraceFactor f;
    const std::string kind = string_field(field(fj, path, "kind"), path + ".kind");
    if (kind == "explicit") {
      f.kind = FactorKind::explicit_factor;
    } else if (kind == "counted") {
      f.kind = FactorKind::counted;
    } else {
      bad_field(path + ".kind", "expected \"explicit\" or \"counted\"");
    }
    f.lower_trace = lift_field(field(fj, path, "lower"), path + ".lower");
    f.upper_trace = lift_field(field(fj, path, "upper"), path + ".upper");
    f.touches_lower = bool_field(field(fj, path, "touches_lower"), path + ".touches_lower");
    f.touches_upper = bool_field(field(fj, path, "touches_upper"), path + ".touches_upper");
    f.multiplicity = integer_field(field(fj, path, "multiplicity"), path + ".multiplicity");
    f.role = string_field(field(fj, path, "role"), path + ".role");
    p.factors.push_back(std::move(f));
  }
  p.total_count = integer_field(field(j, "$", "total_count"), "$.total_count");

  if (!(translate_diagonal(p.source, p.deck_shift) == p.target)) {
    violated("plan target is not the source moved by deck_shift");
  }
  if (p.total_count != total_multiplicity(p.factors)) violated("plan total_count differs from the factor multiplicities");
  return p;
}

inline ProbeConfig probe_config_payload(const Json& j) {
  ProbeConfig c;
  c.probe = string_field(field(j, "$", "probe"), "$.probe");
  try {
    c.qm = parse_qm_name(string_field(field(j, "$", "qm"), "$.qm"));
  } catch (const Error& e) {
    bad_field("$.qm", e.message());
  }
  c.trials = integer_field(field(j, "$", "trials"), "$.trials");
  c.sampler = sampler_field(field(j, "$", "sampler"), "$.sampler");
  if (j.contains("upper_sampler")) c.upper_sampler = sampler_field(j["upper_sampler"], "$.upper_sampler");
  return c;
}

}  // namespace detail

inline Document document_from_json(const Json& j) {
  const std::string kind = detail::string_field(detail::field(j, "$", "kind"), "$.kind");
  const Json& version = detail::field(j, "$", "format_version");
  if (!version.is_number_integer() || version.get<long>() != kFormatVersion) {
    detail::bad_field("$.format_version", "unsupported format version (expected 1)");
  }
  if (kind == "lift") return {detail::lift_field(detail::field(j, "$", "samples"), "$.samples")};
  if (kind == "annulus") return {detail::annulus_field(j, "$")};
  if (kind == "certificate") return {detail::certificate_payload(j)};
  if (kind == "plan") return {detail::plan_payload(j)};
  if (kind == "probe_config") return {detail::probe_config_payload(j)};
  detail::bad_field("$.kind", "unknown document kind \"" + kind + "\"");
}

/// Parses one JSON document. Malformed JSON raises SyntaxError with the
/// parser's line/column; broken lift invariants raise InvariantViolation.
inline Document parse_document(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::SyntaxError, e.what());
  }
  return document_from_json(j);
}

}  // namespace annuluslab

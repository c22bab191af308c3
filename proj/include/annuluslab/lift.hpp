#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "annuluslab/error.hpp"
#include "annuluslab/rational.hpp"

namespace annuluslab {

struct Sample {
  Rational x;
  Rational y;

  friend bool operator==(const Sample& a, const Sample& b) { return a.x == b.x && a.y == b.y; }
};

/// Optional guard on growth during composition and iteration. Zero means
/// unlimited.
struct Limits {
  std::size_t max_breakpoints = 0;
  std::size_t max_denominator_bits = 0;
};

/// Piecewise-linear lift of a circle homeomorphism: the unique PL map of the
/// line through every (x + m, y + m), m integer. Samples are stored for one
/// period with x in [0, 1), strictly increasing x and y, and
/// y_last < y_first + 1. Canonical form keeps only genuine slope changes; a
/// translation x + c is stored as the single sample (0, c).
class PLLift {
 public:
  PLLift() : samples_{Sample{Rational(0), Rational(0)}} {}

  static PLLift identity() { return PLLift(); }

  static PLLift translation(const Rational& c) {
    PLLift f;
    f.samples_.front().y = c;
    return f;
  }

  /// Validates and canonicalizes raw sample data. Samples may be given in any
  /// x order.
  static PLLift from_samples(std::vector<Sample> samples);

  const std::vector<Sample>& samples() const { return samples_; }
  std::size_t breakpoint_count() const { return samples_.size(); }

  bool is_translation() const { return samples_.size() == 1; }
  bool is_identity() const { return is_translation() && samples_.front().y == 0; }

  /// Translation amount when this lift is a translation.
  std::optional<Rational> translation_amount() const {
    if (!is_translation()) return std::nullopt;
    return samples_.front().y;
  }

  Rational operator()(const Rational& x) const;

  friend bool operator==(const PLLift& a, const PLLift& b) { return a.samples_ == b.samples_; }

 private:
  struct Unchecked {};
  PLLift(Unchecked, std::vector<Sample> samples) : samples_(std::move(samples)) {}

  std::vector<Sample> samples_;
};

/// Extrema of the periodic displacement x -> F(x) - x.
struct DisplacementSummary {
  Rational min_disp;
  Rational max_disp;
  Rational argmin;
  Rational argmax;
  Rational min_abs_disp;
};

/// Open interval (a, b) with a in [0, 1) and b <= a + 1 on which a lift is
/// the identity. whole_line marks the identity lift itself.
struct FixedInterval {
  Rational a;
  Rational b;
  bool whole_line = false;

  Rational midpoint() const { return annuluslab::midpoint(a, b); }
};

// ---------------------------------------------------------------------------
// Periodic PL profiles. Displacements F - id and trace differences F1 - F0 are
// both periodic piecewise-linear functions; their extrema sit on nodes.

namespace detail {

struct ProfileNode {
  Rational x;
  Rational value;
};

/// Nodes sorted by x in [0, 1), first node at x = 0, periodic extension
/// value(x + 1) = value(x).
class PeriodicProfile {
 public:
  explicit PeriodicProfile(std::vector<ProfileNode> nodes) : nodes_(std::move(nodes)) {}

  const std::vector<ProfileNode>& nodes() const { return nodes_; }

  /// (min, argmin, max, argmax); ties resolve to the leftmost node.
  std::pair<std::size_t, std::size_t> extrema_indices() const {
    std::size_t lo = 0;
    std::size_t hi = 0;
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
      if (nodes_[i].value < nodes_[lo].value) lo = i;
      if (nodes_[i].value > nodes_[hi].value) hi = i;
    }
    return {lo, hi};
  }

  /// Leftmost zero in [0, 1), if any.
  std::optional<Rational> leftmost_zero() const {
    const std::size_t n = nodes_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const auto& p = nodes_[i];
      if (p.value == 0) return p.x;
      const Rational next_x = (i + 1 < n) ? nodes_[i + 1].x : Rational(1);
      const Rational& next_v = (i + 1 < n) ? nodes_[i + 1].value : nodes_[0].value;
      if ((p.value < 0 && next_v > 0) || (p.value > 0 && next_v < 0)) {
        // linear on [p.x, next_x]
        const Rational t = p.value / (p.value - next_v);
        return Rational(p.x + t * (next_x - p.x));
      }
    }
    return std::nullopt;
  }

 private:
  std::vector<ProfileNode> nodes_;
};

inline std::vector<Rational> merged_abscissae(const PLLift& f, const PLLift& g) {
  std::vector<Rational> xs;
  xs.reserve(f.breakpoint_count() + g.breakpoint_count() + 1);
  xs.emplace_back(0);
  for (const auto& s : f.samples()) xs.push_back(s.x);
  for (const auto& s : g.samples()) xs.push_back(s.x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

/// Profile of upper(x) - lower(x).
inline PeriodicProfile difference_profile(const PLLift& upper, const PLLift& lower) {
  std::vector<ProfileNode> nodes;
  for (auto& x : merged_abscissae(upper, lower)) {
    Rational v = upper(x) - lower(x);
    nodes.push_back({std::move(x), std::move(v)});
  }
  return PeriodicProfile(std::move(nodes));
}

inline DisplacementSummary summarize(const PeriodicProfile& profile) {
  const auto [lo, hi] = profile.extrema_indices();
  const auto& nodes = profile.nodes();
  DisplacementSummary s;
  s.min_disp = nodes[lo].value;
  s.max_disp = nodes[hi].value;
  s.argmin = nodes[lo].x;
  s.argmax = nodes[hi].x;
  if (s.min_disp <= 0 && s.max_disp >= 0) {
    s.min_abs_disp = 0;
  } else {
    s.min_abs_disp = min_q(abs_q(s.min_disp), abs_q(s.max_disp));
  }
  return s;
}

inline void enforce(const PLLift& f, const Limits& limits) {
  if (limits.max_breakpoints != 0 && f.breakpoint_count() > limits.max_breakpoints) {
    throw Error(ErrorCode::ResourceLimit,
                "breakpoint count " + std::to_string(f.breakpoint_count()) + " exceeds " +
                    std::to_string(limits.max_breakpoints));
  }
  if (limits.max_denominator_bits != 0) {
    for (const auto& s : f.samples()) {
      if (denominator_bits(s.x) > limits.max_denominator_bits ||
          denominator_bits(s.y) > limits.max_denominator_bits) {
        throw Error(ErrorCode::ResourceLimit,
                    "denominator exceeds " + std::to_string(limits.max_denominator_bits) + " bits");
      }
    }
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline PLLift PLLift::from_samples(std::vector<Sample> samples) {
  if (samples.empty()) throw Error(ErrorCode::EmptyLift, "a lift needs at least one sample");
  for (auto& s : samples) {
    s.x.canonicalize();
    s.y.canonicalize();
    if (s.x < 0 || s.x >= 1) {
      throw Error(ErrorCode::XOutOfRange, "sample x = " + to_string(s.x) + " outside [0, 1)");
    }
  }
  std::sort(samples.begin(), samples.end(), [](const Sample& a, const Sample& b) { return a.x < b.x; });
  const std::size_t n = samples.size();
  for (std::size_t i = 1; i < n; ++i) {
    if (samples[i].x == samples[i - 1].x) {
      throw Error(ErrorCode::DuplicateX, "repeated x = " + to_string(samples[i].x));
    }
    if (samples[i].y <= samples[i - 1].y) {
      throw Error(ErrorCode::NonIncreasingY, "y does not increase at x = " + to_string(samples[i].x));
    }
  }
  if (samples.back().y >= samples.front().y + 1) {
    throw Error(ErrorCode::PeriodViolation, "y_last >= y_first + 1");
  }

  // One pass suffices: dropping a point whose two adjacent segments share a
  // slope leaves every other point's neighbouring slopes unchanged.
  std::vector<Rational> slope(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Sample& a = samples[i];
    if (i + 1 < n) {
      const Sample& b = samples[i + 1];
      slope[i] = (b.y - a.y) / (b.x - a.x);
    } else {
      const Sample& b = samples[0];
      slope[i] = (b.y + 1 - a.y) / (b.x + 1 - a.x);
    }
  }
  std::vector<Sample> kept;
  for (std::size_t i = 0; i < n; ++i) {
    const Rational& before = slope[(i + n - 1) % n];
    if (before != slope[i]) kept.push_back(samples[i]);
  }
  if (kept.empty()) {
    // all slopes are 1: a translation
    return translation(Rational(samples.front().y - samples.front().x));
  }
  return PLLift(Unchecked{}, std::move(kept));
}

inline Rational PLLift::operator()(const Rational& x) const {
  const Integer shift = floor_int(x);
  const Rational t = x - Rational(shift);
  const auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                                   [](const Rational& v, const Sample& s) { return v < s.x; });
  Rational x0, y0, x1, y1;
  if (it == samples_.begin()) {
    x0 = samples_.back().x - 1;
    y0 = samples_.back().y - 1;
    x1 = samples_.front().x;
    y1 = samples_.front().y;
  } else if (it == samples_.end()) {
    x0 = samples_.back().x;
    y0 = samples_.back().y;
    x1 = samples_.front().x + 1;
    y1 = samples_.front().y + 1;
  } else {
    x0 = std::prev(it)->x;
    y0 = std::prev(it)->y;
    x1 = it->x;
    y1 = it->y;
  }
  Rational value = y0 + (y1 - y0) * (t - x0) / (x1 - x0);
  value += Rational(shift);
  return value;
}

// ---------------------------------------------------------------------------
// Lift algebra

inline PLLift normalize(std::vector<Sample> samples) { return PLLift::from_samples(std::move(samples)); }

inline Rational evaluate(const PLLift& f, const Rational& x) { return f(x); }

inline PLLift translate(const PLLift& f, long k) {
  std::vector<Sample> s = f.samples();
  for (auto& p : s) p.y += k;
  return PLLift::from_samples(std::move(s));
}

inline PLLift invert(const PLLift& f) {
  std::vector<Sample> s;
  s.reserve(f.breakpoint_count());
  for (const auto& p : f.samples()) {
    const Integer shift = floor_int(p.y);
    s.push_back({Rational(p.y - Rational(shift)), Rational(p.x - Rational(shift))});
  }
  return PLLift::from_samples(std::move(s));
}

/// f o g.
inline PLLift compose(const PLLift& f, const PLLift& g, const Limits& limits = {}) {
  if (f.is_translation() && g.is_translation()) {
    return PLLift::translation(Rational(*f.translation_amount() + *g.translation_amount()));
  }
  std::vector<Rational> xs;
  xs.reserve(f.breakpoint_count() + g.breakpoint_count());
  for (const auto& s : g.samples()) xs.push_back(s.x);
  const PLLift g_inv = invert(g);
  for (const auto& s : f.samples()) xs.push_back(frac(g_inv(s.x)));
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<Sample> samples;
  samples.reserve(xs.size());
  for (auto& x : xs) {
    Rational y = f(g(x));
    samples.push_back({std::move(x), std::move(y)});
  }
  PLLift out = PLLift::from_samples(std::move(samples));
  detail::enforce(out, limits);
  return out;
}

/// n-fold composition; negative n iterates the inverse.
inline PLLift power(const PLLift& f, long n, const Limits& limits = {}) {
  if (n == 0) return PLLift::identity();
  PLLift base = n < 0 ? invert(f) : f;
  unsigned long e = n < 0 ? static_cast<unsigned long>(-(n + 1)) + 1UL : static_cast<unsigned long>(n);
  if (base.is_translation()) return PLLift::translation(Rational(*base.translation_amount() * static_cast<long>(e)));
  PLLift result = PLLift::identity();
  bool have = false;
  while (e != 0) {
    if (e & 1UL) {
      result = have ? compose(result, base, limits) : base;
      have = true;
    }
    e >>= 1;
    if (e != 0) base = compose(base, base, limits);
  }
  return result;
}

inline DisplacementSummary displacement_extrema(const PLLift& f) {
  return detail::summarize(detail::difference_profile(f, PLLift::identity()));
}

/// Leftmost fixed point of f in [0, 1), if f has one.
inline std::optional<Rational> leftmost_fixed_point(const PLLift& f) {
  return detail::difference_profile(f, PLLift::identity()).leftmost_zero();
}

/// Maximal open interval on which f is the identity (leftmost start in
/// [0, 1)); nullopt when f lies outside the generating set A.
inline std::optional<FixedInterval> fixes_interval(const PLLift& f) {
  if (f.is_identity()) return FixedInterval{Rational(0), Rational(1), true};
  if (f.is_translation()) return std::nullopt;
  const auto& s = f.samples();
  const std::size_t n = s.size();
  std::vector<bool> zero_seg(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    zero_seg[i] = (s[i].y == s[i].x) && (s[j].y == s[j].x);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!zero_seg[i] || zero_seg[(i + n - 1) % n]) continue;
    std::size_t end = i;
    // canonical non-identity lifts always have a non-fixed segment, so the
    // run terminates before wrapping all the way round
    while (zero_seg[end % n]) ++end;
    const std::size_t stop = end % n;
    Rational b = s[stop].x;
    if (end >= n) b += 1;
    return FixedInterval{s[i].x, b, false};
  }
  return std::nullopt;
}

/// R o f o R with R(x) = -x.
inline PLLift reflect_conjugate(const PLLift& f) {
  std::vector<Sample> s;
  s.reserve(f.breakpoint_count());
  for (const auto& p : f.samples()) {
    Rational x = -p.x;
    Rational y = -p.y;
    if (x < 0) {
      x += 1;
      y += 1;
    }
    s.push_back({std::move(x), std::move(y)});
  }
  return PLLift::from_samples(std::move(s));
}

}  // namespace annuluslab

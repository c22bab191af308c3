#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

#include "annuluslab/annulus.hpp"
#include "annuluslab/lift.hpp"

namespace annuluslab {

/// SplitMix64. State update s += 0x9E3779B97F4A7C15, output
///   z = s; z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
///   z = (z ^ (z >> 27)) * 0x94D049BB133111EB; return z ^ (z >> 31).
/// below(n) is next() % n. These constants fix every corpus bit for bit.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

/// Substream seed for item `index` of a corpus seeded with `seed`: the first
/// output of SplitMix64(seed ^ (index * 0xD1B54A32D192ED03)).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64(seed ^ (index * 0xD1B54A32D192ED03ULL)).next();
}

struct SamplerConfig {
  std::uint64_t seed = 0;
  long breakpoint_count = 4;
  long denominator_bound = 16;
  Rational displacement_offset = Rational(0);
  Rational roughness = Rational(1, 8);

  SamplerConfig with_seed(std::uint64_t s) const {
    SamplerConfig c = *this;
    c.seed = s;
    return c;
  }

  friend bool operator==(const SamplerConfig& a, const SamplerConfig& b) {
    return a.seed == b.seed && a.breakpoint_count == b.breakpoint_count &&
           a.denominator_bound == b.denominator_bound && a.displacement_offset == b.displacement_offset &&
           a.roughness == b.roughness;
  }
};

/// Deterministic PL lift. Abscissae x_0 < ... < x_{b-1} are b distinct
/// multiples of 1/D (D = denominator_bound) drawn by partial Fisher-Yates.
/// Displacements d_i = y_i - x_i stay in the band offset +- roughness:
/// d_0 = offset + roughness * (u - D) / D with u uniform in [0, 2D], and each
/// later d_i = L + (U - L) * u / (2D) with u uniform in [1, 2D - 1], where
///   L = max(offset - roughness, d_{i-1} - (x_i - x_{i-1}))
///   U = min(offset + roughness, d_0 + 1 + x_0 - x_i).
/// L keeps y increasing and U keeps y_last < y_first + 1 reachable, so the draw
/// is always feasible. Roughness 0 gives the translation x + offset.
inline PLLift sample_lift(const SamplerConfig& cfg) {
  if (cfg.breakpoint_count < 1) throw Error(ErrorCode::InfeasibleConfig, "breakpoint_count must be >= 1");
  if (cfg.denominator_bound < 2) throw Error(ErrorCode::InfeasibleConfig, "denominator_bound must be >= 2");
  if (cfg.breakpoint_count > cfg.denominator_bound) {
    throw Error(ErrorCode::InfeasibleConfig, "more breakpoints than multiples of 1/denominator_bound");
  }
  if (cfg.roughness < 0) throw Error(ErrorCode::InfeasibleConfig, "roughness must be >= 0");

  SplitMix64 rng(cfg.seed);
  const long den = cfg.denominator_bound;
  const auto count = static_cast<std::size_t>(cfg.breakpoint_count);
  std::vector<long> pool(static_cast<std::size_t>(den));
  std::iota(pool.begin(), pool.end(), 0L);
  for (std::size_t i = 0; i < count; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(den) - i));
    std::swap(pool[i], pool[j]);
  }
  std::vector<long> numerators(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count));
  std::sort(numerators.begin(), numerators.end());

  const Rational& off = cfg.displacement_offset;
  const Rational& r = cfg.roughness;
  const Rational band_lo = off - r;
  const Rational band_hi = off + r;
  std::vector<Sample> s;
  s.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rational x(numerators[i], den);
    x.canonicalize();
    Rational d;
    if (r == 0) {
      d = off;
    } else if (i == 0) {
      const auto u = static_cast<long>(rng.below(static_cast<std::uint64_t>(2 * den + 1)));
      d = off + r * Rational(u - den, den);
    } else {
      const Rational& prev_x = s[i - 1].x;
      const Rational prev_d = s[i - 1].y - prev_x;
      const Rational lo = max_q(band_lo, Rational(prev_d - (x - prev_x)));
      const Rational hi = min_q(band_hi, Rational(s[0].y - s[0].x + 1 + s[0].x - x));
      if (!(lo < hi)) throw Error(ErrorCode::InfeasibleConfig, "empty displacement window");
      const auto u = static_cast<long>(1 + rng.below(static_cast<std::uint64_t>(2 * den - 1)));
      d = lo + (hi - lo) * Rational(u, 2 * den);
    }
    d.canonicalize();
    Rational y = x + d;
    s.push_back({std::move(x), std::move(y)});
  }
  return PLLift::from_samples(std::move(s));
}

inline AnnulusLift sample_annulus(const SamplerConfig& lower, const SamplerConfig& upper) {
  return {sample_lift(lower), sample_lift(upper)};
}

}  // namespace annuluslab

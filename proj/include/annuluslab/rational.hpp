#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <regex>
#include <string>
#include <string_view>

#include "annuluslab/error.hpp"

namespace annuluslab {

/// Exact arbitrary-precision rational. Every quantity the library reasons
/// about (breakpoints, displacements, invariants, bounds) lives here; there is
/// no floating point anywhere on an invariant path.
using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw Error(ErrorCode::InvalidArgument, "zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Integer floor_int(const Rational& q) {
  Integer r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

inline Integer ceil_int(const Rational& q) {
  Integer r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

/// Lower integer part, as a long. Throws when the value does not fit, which
/// for the magnitudes this library handles means a corrupted input.
inline long floor_long(const Rational& q) {
  const Integer r = floor_int(q);
  if (!r.fits_slong_p()) throw Error(ErrorCode::ResourceLimit, "integer part out of range");
  return r.get_si();
}

inline long ceil_long(const Rational& q) {
  const Integer r = ceil_int(q);
  if (!r.fits_slong_p()) throw Error(ErrorCode::ResourceLimit, "integer part out of range");
  return r.get_si();
}

/// Fractional part in [0, 1).
inline Rational frac(const Rational& q) { return Rational(q - Rational(floor_int(q))); }

inline Rational abs_q(const Rational& q) { return q < 0 ? Rational(-q) : q; }

inline Rational midpoint(const Rational& a, const Rational& b) { return Rational((a + b) / 2); }

inline const Rational& min_q(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max_q(const Rational& a, const Rational& b) { return a < b ? b : a; }

/// Bit length of the denominator; the resource guard watches this.
inline std::size_t denominator_bits(const Rational& q) {
  return mpz_sizeinbase(q.get_den_mpz_t(), 2);
}

/// "p/q" in lowest terms, or "p" for integers.
inline std::string to_string(const Rational& q) { return q.get_str(10); }

inline Rational parse_rational(std::string_view text) {
  static const std::regex pattern(R"(^[+-]?[0-9]+(/[0-9]+)?$)");
  const std::string s(text);
  if (!std::regex_match(s, pattern)) {
    throw Error(ErrorCode::SyntaxError, "not a rational literal: \"" + s + "\"");
  }
  // gmp rejects a leading '+'
  const std::string body = (s[0] == '+') ? s.substr(1) : s;
  Rational q;
  if (q.set_str(body, 10) != 0) throw Error(ErrorCode::SyntaxError, "not a rational literal: \"" + s + "\"");
  if (q.get_den() == 0) throw Error(ErrorCode::SyntaxError, "zero denominator in \"" + s + "\"");
  q.canonicalize();
  return q;
}

}  // namespace annuluslab

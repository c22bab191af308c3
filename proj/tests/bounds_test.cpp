#include <gtest/gtest.h>

#include "test_support.hpp"

namespace annuluslab {
namespace {

using testing::lift;
using testing::q;
using testing::seeded_lift;
using testing::shift_by;

/// Least n >= 1 with m < 2n - 1, by counting upwards.
long ehn_oracle(const Rational& m) {
  long n = 1;
  while (!(m < 2 * n - 1)) ++n;
  return n;
}

TEST(Ehn, Examples) {
  EXPECT_EQ(ehn_commutator_count(PLLift::identity()), 0);
  EXPECT_EQ(ehn_commutator_count(shift_by("1/2")), 1);
  EXPECT_EQ(ehn_commutator_count(shift_by("3")), 3);
  EXPECT_EQ(ehn_commutator_count(shift_by("-3")), 3);
  EXPECT_EQ(ehn_commutator_count(shift_by("1")), 2);
  // a fixed point but not the identity
  EXPECT_EQ(ehn_commutator_count(lift({{"0", "0"}, {"1/2", "3/4"}})), 1);
}

TEST(Ehn, MatchesOracleAndMonotone) {
  const auto values = testing::seeded_rationals(77, 300, 12);
  for (const Rational& c : values) {
    const PLLift f = PLLift::translation(c);
    if (f.is_identity()) continue;
    EXPECT_EQ(ehn_commutator_count(f), ehn_oracle(abs_q(c))) << to_string(c);
  }
  std::vector<Rational> sorted;
  for (const auto& c : values) sorted.push_back(abs_q(c));
  std::sort(sorted.begin(), sorted.end());
  long prev = 0;
  for (const Rational& m : sorted) {
    if (m == 0) continue;
    const long n = ehn_commutator_count(PLLift::translation(m));
    EXPECT_GE(n, prev);
    EXPECT_EQ(n == 1, m < 1);
    prev = n;
  }
}

TEST(ClBracket, Examples) {
  EXPECT_EQ(cl_bounds(make_annulus(PLLift::identity(), shift_by("5")), Regularity::general()), (Bracket{2, 11}));
  EXPECT_EQ(cl_bounds(twist_power(8), Regularity::general()), (Bracket{3, 11}));
  EXPECT_EQ(cl_bounds(make_annulus(PLLift::identity(), shift_by("1/2")), Regularity::r0()), (Bracket{1, 5}));
  EXPECT_EQ(cl_bounds(twist_power(1), Regularity::general()), (Bracket{1, 10}));
}

TEST(ClBracket, ExcludedRegularities) {
  for (long r : {2L, 3L}) {
    try {
      cl_bounds(twist_power(1), Regularity::of(r));
      FAIL() << "r = " << r;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::UnsupportedRegularity);
    }
  }
  EXPECT_NO_THROW(cl_bounds(twist_power(1), Regularity::of(1)));
  EXPECT_NO_THROW(cl_bounds(twist_power(1), Regularity::of(4)));
}

TEST(ClBracket, IdentityRejected) {
  try {
    cl_bounds(twist_power(0), Regularity::general());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::IdentityTarget);
  }
}

TEST(FragBracket, Examples) {
  const AnnulusLift a = make_annulus(PLLift::identity(), shift_by("9/4"));
  EXPECT_EQ(frag_bounds(a, Regularity::general(), false), (Bracket{3, 42}));
  EXPECT_EQ(frag_bounds(a, Regularity::r0(), false), (Bracket{3, 38}));
  EXPECT_EQ(frag_bounds(twist_power(1), Regularity::general(), false), (Bracket{2, 41}));
  EXPECT_EQ(frag_bounds(twist_power(1), Regularity::r0(), true), (Bracket{2, 13}));
  EXPECT_EQ(frag_bounds(twist_power(1), Regularity::general(), true), (Bracket{2, 17}));
}

TEST(BracketArithmetic, WidthsOnSeededAlphas) {
  for (const Rational& c : testing::seeded_rationals(91, 200, 20)) {
    const Rational al = abs_q(c);
    const Bracket g = cl_bracket(al, Regularity::general());
    EXPECT_LE(g.lower, g.upper);
    EXPECT_LE(g.upper - g.lower, 9);
    const Bracket z = cl_bracket(al, Regularity::r0());
    EXPECT_LE(z.upper - z.lower, 5);
    for (Regime r : {Regime::r0, Regime::r_general, Regime::r0_open_annulus, Regime::r_general_open_annulus}) {
      const Bracket f = frag_bracket(al, r);
      EXPECT_EQ(f.upper - f.lower, frag_constant(r) - 1);
    }
  }
}

TEST(BoundsReportTest, EchoesInputs) {
  const BoundsReport r = bounds_report(twist_power(3), Regularity::r0(), true);
  EXPECT_EQ(r.alpha, 3);
  EXPECT_EQ(r.floor_alpha, 3);
  EXPECT_TRUE(r.rho.exact);
  EXPECT_EQ(r.rho.lo, 3);
  ASSERT_TRUE(r.cl);
  EXPECT_EQ(*r.cl, (Bracket{1, 6}));
  EXPECT_EQ(r.cl_constant, 5);
  EXPECT_EQ(r.frag, (Bracket{4, 15}));
  EXPECT_EQ(r.frag_constant, 12);

  const BoundsReport s = bounds_report(twist_power(3), Regularity::of(2), false);
  EXPECT_FALSE(s.cl);
  EXPECT_EQ(s.frag, (Bracket{4, 43}));
}

TEST(Regularities, Parse) {
  EXPECT_TRUE(parse_regularity("r0").is_zero());
  EXPECT_TRUE(parse_regularity("general").infinite);
  EXPECT_TRUE(parse_regularity("r3").excluded_for_commutators());
  EXPECT_EQ(parse_regularity("5").order, 5);
  EXPECT_THROW(parse_regularity("rx"), Error);
}

TEST(QiBand, TwistPowers) {
  for (long n = 1; n <= 12; ++n) {
    const CheckReport r = qi_band_check(twist_power(n));
    EXPECT_TRUE(r.passed()) << n << ": " << testing::failure_list(r);
  }
  EXPECT_TRUE(qi_band_check(make_annulus(shift_by("1/3"), shift_by("3/4"))).passed());
}

TEST(QiBand, SeededPairs) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    const AnnulusLift a = make_annulus(seeded_lift(4000 + s), seeded_lift(4300 + s));
    if (is_identity_pair(a)) continue;
    const CheckReport r = qi_band_check(a);
    EXPECT_TRUE(r.passed()) << "seed " << s << ": " << testing::failure_list(r);
  }
}

TEST(CommutatorProductTest, Examples) {
  const CommutatorProduct trivial = commutator_product({{PLLift::identity(), PLLift::identity()}});
  EXPECT_TRUE(trivial.product.is_identity());
  EXPECT_EQ(trivial.min_abs_disp, 0);
  EXPECT_TRUE(trivial.report.passed());

  const PLLift h = seeded_lift(4700);
  const CommutatorProduct one = commutator_product({{shift_by("1/2"), h}});
  EXPECT_LT(one.min_abs_disp, 1);
  EXPECT_TRUE(one.report.passed());

  // [g, h] by hand at a few points
  const PLLift g = seeded_lift(4701);
  const CommutatorProduct gh = commutator_product({{g, h}});
  const PLLift gi = invert(g), hi = invert(h);
  for (const Rational& x : {q("0"), q("2/7"), q("-5/3")}) EXPECT_EQ(gh.product(x), g(h(gi(hi(x)))));
}

TEST(CommutatorProductTest, SeededPairsOfLength2) {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const std::vector<LiftPair> pairs{{seeded_lift(4800 + 4 * s), seeded_lift(4801 + 4 * s)},
                                      {seeded_lift(4802 + 4 * s), seeded_lift(4803 + 4 * s)}};
    const CommutatorProduct cp = commutator_product(pairs);
    EXPECT_LT(cp.min_abs_disp, 3);
    EXPECT_TRUE(cp.tau.within(Rational(-4), Rational(4)));
    EXPECT_TRUE(cp.report.passed());
  }
}

}  // namespace
}  // namespace annuluslab

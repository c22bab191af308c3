#include <gtest/gtest.h>

#include "test_support.hpp"

namespace annuluslab {
namespace {

using testing::lift;
using testing::q;
using testing::seeded_lift;
using testing::shift_by;

TEST(TauBounds, Translation) {
  const CertifiedInterval i = tau_bounds(shift_by("1/3"), 1);
  EXPECT_EQ(i.lo, q("1/3"));
  EXPECT_EQ(i.hi, q("1/3"));
  EXPECT_TRUE(i.exact);
}

TEST(TauBounds, FixedPointForcesZero) {
  const PLLift f = lift({{"0", "1/4"}, {"1/2", "1/2"}});
  for (long n : {1L, 3L, 8L}) EXPECT_TRUE(tau_bounds(f, n).contains(Rational(0)));
}

TEST(TauBounds, NestedRefinement) {
  const PLLift f = lift({{"0", "1/8"}, {"1/2", "3/4"}});
  const CertifiedInterval a = tau_bounds(f, 16);
  const CertifiedInterval b = tau_bounds(f, 32);
  EXPECT_LT(a.width(), q("1/16"));
  EXPECT_LT(b.width(), q("1/32"));
  EXPECT_TRUE(a.intersects(b));
  EXPECT_NO_THROW(intersect(a, b));
}

TEST(TauBounds, RejectsNonPositiveN) { EXPECT_THROW(tau_bounds(shift_by("1/3"), 0), Error); }

TEST(TauRational, Translation) {
  const auto r = tau_rational(shift_by("2/5"), 5);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->value, q("2/5"));
  EXPECT_EQ(r->q, 5);
  EXPECT_EQ(r->p, 2);
  EXPECT_FALSE(tau_rational(shift_by("2/5"), 4));
}

TEST(TauRational, HalfTurn) {
  // F(0) = 1/2, F(1/2) = 1: the orbit 0 -> 1/2 -> 1
  const PLLift f = lift({{"0", "1/2"}, {"1/2", "1"}});
  EXPECT_TRUE(power(f, 2) == shift_by("1"));
  const auto r = tau_rational(f, 4);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->value, q("1/2"));
  EXPECT_EQ(r->q, 2);
}

TEST(TauRational, NonTranslationPeriodThree) {
  // an order-three orbit of a genuinely PL map: conjugate x + 1/3 by a bump
  const PLLift h = lift({{"0", "0"}, {"1/4", "1/8"}, {"1/2", "1/2"}});
  const PLLift f = compose(compose(h, shift_by("1/3")), invert(h));
  EXPECT_FALSE(f.is_translation());
  const auto r = tau_rational(f, 10);
  ASSERT_TRUE(r);
  EXPECT_EQ(r->value, q("1/3"));
  EXPECT_EQ(r->q, 3);
}

/// Family F_c = G + c with a fixed two-slope G; tau is nondecreasing in c.
PLLift two_slope(const Rational& c) {
  return PLLift::from_samples({{Rational(0), c}, {Rational(1, 2), Rational(Rational(3, 4) + c)}});
}

bool excludes_small_denominators(const CertifiedInterval& i, long q_max) {
  for (long den = 1; den <= q_max; ++den) {
    const long lo = floor_long(Rational(i.lo * den)) - 1;
    const long hi = ceil_long(Rational(i.hi * den)) + 1;
    for (long num = lo; num <= hi; ++num) {
      if (i.contains(Rational(num, den))) return false;
    }
  }
  return true;
}

TEST(TauRational, TunedLiftHasNoSmallPeriod) {
  // bisection on the offset c towards tau = 0.4142..., between the Farey
  // neighbours 2/5 and 3/7 of order 10
  const Rational target(29, 70);
  Rational lo(0), hi(1, 2);
  CertifiedInterval window;
  PLLift f;
  for (int step = 0; step < 40; ++step) {
    const Rational c = midpoint(lo, hi);
    f = two_slope(c);
    window = tau_bounds(f, 64);
    if (window.hi < target) {
      lo = c;
    } else if (window.lo > target) {
      hi = c;
    } else {
      break;
    }
  }
  ASSERT_TRUE(window.contains(target));
  ASSERT_TRUE(excludes_small_denominators(window, 10));
  EXPECT_FALSE(tau_rational(f, 10));
  TauOptions opts;
  opts.q_max = 10;
  opts.width_target = Rational(1, 256);
  const TauResult t = tau(f, opts);
  EXPECT_FALSE(t.rational_value);
  EXPECT_LT(t.interval.width(), opts.width_target);
  EXPECT_TRUE(t.interval.intersects(window));
}

TEST(Tau, Examples) {
  const TauResult t = tau(shift_by("1/3"));
  ASSERT_TRUE(t.rational_value);
  EXPECT_EQ(t.rational_value->value, q("1/3"));
  EXPECT_TRUE(t.interval.exact);

  for (std::uint64_t s = 0; s < 10; ++s) {
    const PLLift f = seeded_lift(900 + s);
    const TauResult base = tau(f);
    const TauResult moved = tau(translate(f, 1));
    EXPECT_EQ(moved.interval.lo, base.interval.lo + 1);
    EXPECT_EQ(moved.interval.hi, base.interval.hi + 1);
    const TauResult inv = tau(invert(f));
    EXPECT_EQ(inv.interval.lo, -base.interval.hi);
    EXPECT_EQ(inv.interval.hi, -base.interval.lo);
  }
}

TEST(Tau, IterationCapStillEncloses) {
  const PLLift f = lift({{"0", "1/8"}, {"1/2", "3/4"}});
  TauOptions opts;
  opts.q_max = 1;
  opts.max_iterations = 4;
  opts.width_target = Rational(1, 1000);
  const TauResult t = tau(f, opts);
  EXPECT_LE(t.iterations_used, 4);
  EXPECT_TRUE(t.interval.intersects(tau_bounds(f, 64)));
}

// --- properties ------------------------------------------------------------

TEST(RotationProperties, WidthBelowOneOverN) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const PLLift f = seeded_lift(1000 + s);
    std::vector<CertifiedInterval> seen;
    for (long n : {1L, 4L, 16L, 64L}) {
      const CertifiedInterval i = tau_bounds(f, n);
      EXPECT_LT(i.width(), Rational(1, n)) << "seed " << s << " n " << n;
      for (const auto& j : seen) EXPECT_TRUE(i.intersects(j));
      seen.push_back(i);
    }
  }
}

TEST(RotationProperties, RationalValueLiesInEveryEnclosure) {
  int detected = 0;
  for (std::uint64_t s = 0; s < 60; ++s) {
    const PLLift f = seeded_lift(1200 + s);
    const auto r = tau_rational(f, 6);
    if (!r) continue;
    ++detected;
    for (long n : {1L, 2L, 5L, 16L}) EXPECT_TRUE(tau_bounds(f, n).contains(r->value));
  }
  EXPECT_GT(detected, 0);
}

TEST(RotationProperties, Equivariance) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const PLLift f = seeded_lift(1300 + s);
    const TauResult a = tau(f);
    for (long k : {-2L, 3L}) {
      const TauResult b = tau(translate(f, k));
      if (a.rational_value) {
        ASSERT_TRUE(b.rational_value);
        EXPECT_EQ(b.rational_value->value, a.rational_value->value + k);
      }
      EXPECT_TRUE(b.interval.intersects(shift(a.interval, Rational(k))));
    }
    const TauResult inv = tau(invert(f));
    EXPECT_TRUE(inv.interval.intersects(-a.interval));
  }
}

TEST(RotationProperties, Monotonicity) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const PLLift f = seeded_lift(1400 + s);
    // p >= Id pointwise, hence p o f >= f
    const PLLift p = translate(seeded_lift(1500 + s, 0), 1);
    ASSERT_GE(displacement_extrema(p).min_disp, 0);
    const PLLift g = compose(p, f);
    ASSERT_GE(displacement_extrema(compose(invert(f), g)).min_disp, 0);
    const TauResult tf = tau(f);
    const TauResult tg = tau(g);
    EXPECT_LE(tf.interval.lo, tg.interval.hi);
  }
}

}  // namespace
}  // namespace annuluslab

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace annuluslab {
namespace {

using testing::lift;
using testing::q;
using testing::seeded_lift;
using testing::seeded_rationals;
using testing::shift_by;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::InternalInvariant;
}

TEST(Normalize, PrunesCollinearTranslation) {
  const PLLift f = lift({{"0", "1/2"}, {"1/4", "3/4"}, {"1/2", "1"}});
  EXPECT_TRUE(f.is_translation());
  EXPECT_EQ(f, shift_by("1/2"));
  ASSERT_EQ(f.samples().size(), 1u);
  EXPECT_EQ(f.samples()[0].x, 0);
}

TEST(Normalize, TwoBreakpoints) {
  const PLLift f = lift({{"0", "0"}, {"1/2", "3/4"}});
  ASSERT_EQ(f.breakpoint_count(), 2u);
  EXPECT_EQ(f(q("1/2")) - f(q("0")), q("3/4"));      // slope 3/2 on [0, 1/2]
  EXPECT_EQ(f(q("1")) - f(q("1/2")), q("1/4"));      // slope 1/2 on [1/2, 1]
}

TEST(Normalize, Errors) {
  EXPECT_EQ(code_of([] { lift({{"0", "0"}, {"1/2", "0"}}); }), ErrorCode::NonIncreasingY);
  EXPECT_EQ(code_of([] { lift({{"0", "0"}, {"0", "1/4"}}); }), ErrorCode::DuplicateX);
  EXPECT_EQ(code_of([] { lift({{"0", "0"}, {"1/2", "1"}}); }), ErrorCode::PeriodViolation);
  EXPECT_EQ(code_of([] { lift({{"1", "1"}}); }), ErrorCode::XOutOfRange);
  EXPECT_EQ(code_of([] { lift({{"-1/2", "0"}}); }), ErrorCode::XOutOfRange);
  EXPECT_EQ(code_of([] { PLLift::from_samples({}); }), ErrorCode::EmptyLift);
}

TEST(Evaluate, Examples) {
  EXPECT_EQ(evaluate(shift_by("1/3"), q("5")), q("16/3"));
  const PLLift f = lift({{"0", "0"}, {"1/2", "3/4"}});
  EXPECT_EQ(evaluate(f, q("1/4")), q("3/8"));
  EXPECT_EQ(evaluate(f, q("5/4")), q("11/8"));
  EXPECT_EQ(evaluate(f, q("-3/4")), q("3/8") - 1);
}

TEST(Compose, Examples) {
  EXPECT_EQ(compose(shift_by("1/2"), shift_by("1/3")), shift_by("5/6"));
  const PLLift f = lift({{"0", "0"}, {"1/2", "3/4"}});
  EXPECT_TRUE(compose(f, invert(f)).is_identity());
  const PLLift g = shift_by("1/2");
  const PLLift fg = compose(f, g);
  for (const auto& x : seeded_rationals(11, 20)) EXPECT_EQ(fg(x), f(g(x))) << to_string(x);
}

TEST(Compose, ResourceLimit) {
  const PLLift f = lift({{"0", "0"}, {"1/3", "1/2"}, {"2/3", "3/4"}});
  const PLLift g = lift({{"1/5", "1/7"}, {"3/5", "4/5"}});
  Limits tight;
  tight.max_breakpoints = 2;
  EXPECT_EQ(code_of([&] { compose(f, g, tight); }), ErrorCode::ResourceLimit);
  Limits bits;
  bits.max_denominator_bits = 2;
  EXPECT_EQ(code_of([&] { power(f, 8, bits); }), ErrorCode::ResourceLimit);
}

TEST(Invert, Examples) {
  EXPECT_EQ(invert(shift_by("2/7")), shift_by("-2/7"));
  const PLLift f = lift({{"0", "0"}, {"1/2", "3/4"}});
  EXPECT_EQ(invert(f), lift({{"0", "0"}, {"3/4", "1/2"}}));
  EXPECT_TRUE(compose(f, invert(f)).is_identity());
  EXPECT_TRUE(invert(PLLift::identity()).is_identity());
}

TEST(Translate, Examples) {
  EXPECT_EQ(translate(PLLift::identity(), 3), shift_by("3"));
  const PLLift f = lift({{"0", "1/4"}, {"1/2", "1/2"}});
  EXPECT_EQ(translate(f, 0), f);
  EXPECT_EQ(displacement_extrema(translate(f, 2)).min_disp, 2);
  EXPECT_EQ(displacement_extrema(f).min_disp, 0);
}

TEST(Power, Examples) {
  const PLLift f = lift({{"0", "0"}, {"1/2", "3/4"}});
  EXPECT_TRUE(power(f, 0).is_identity());
  EXPECT_EQ(power(shift_by("1/3"), 3), shift_by("1"));
  const PLLift half = lift({{"0", "1/2"}, {"1/2", "1"}});
  EXPECT_EQ(power(half, 2)(q("0")), 1);
  EXPECT_EQ(power(f, -2), compose(invert(f), invert(f)));
  EXPECT_EQ(power(f, 5), compose(f, compose(f, compose(f, compose(f, f)))));
}

TEST(DisplacementExtrema, Examples) {
  const auto t = displacement_extrema(shift_by("-2/3"));
  EXPECT_EQ(t.min_disp, q("-2/3"));
  EXPECT_EQ(t.max_disp, q("-2/3"));
  EXPECT_EQ(t.min_abs_disp, q("2/3"));

  const auto d = displacement_extrema(lift({{"0", "1/4"}, {"1/2", "1/2"}}));
  EXPECT_EQ(d.min_disp, 0);
  EXPECT_EQ(d.argmin, q("1/2"));
  EXPECT_EQ(d.max_disp, q("1/4"));
  EXPECT_EQ(d.argmax, 0);
  EXPECT_EQ(d.min_abs_disp, 0);

  const auto id = displacement_extrema(PLLift::identity());
  EXPECT_EQ(id.min_disp, 0);
  EXPECT_EQ(id.max_disp, 0);
  EXPECT_EQ(id.min_abs_disp, 0);
}

TEST(DisplacementExtrema, LeftmostTieBreak) {
  // displacement 1/8 at x = 1/4 and at x = 3/4, 1/4 at x = 0 and x = 1/2
  const PLLift f = lift({{"0", "1/4"}, {"1/4", "3/8"}, {"1/2", "3/4"}, {"3/4", "7/8"}});
  const auto d = displacement_extrema(f);
  EXPECT_EQ(d.min_disp, q("1/8"));
  EXPECT_EQ(d.argmin, q("1/4"));
  EXPECT_EQ(d.argmax, 0);
}

TEST(FixesInterval, Examples) {
  const auto id = fixes_interval(PLLift::identity());
  ASSERT_TRUE(id);
  EXPECT_TRUE(id->whole_line);
  EXPECT_FALSE(fixes_interval(shift_by("1/2")));

  const PLLift bump = lift({{"0", "0"}, {"1/4", "1/4"}, {"1/2", "3/4"}});
  const auto iv = fixes_interval(bump);
  ASSERT_TRUE(iv);
  EXPECT_EQ(iv->a, 0);
  EXPECT_EQ(iv->b, q("1/4"));
  EXPECT_FALSE(iv->whole_line);
}

TEST(FixesInterval, RunAcrossThePeriodBoundary) {
  // identity on [3/4, 1 + 1/8]
  const PLLift f = lift({{"1/8", "1/8"}, {"1/2", "5/8"}, {"3/4", "3/4"}});
  const auto iv = fixes_interval(f);
  ASSERT_TRUE(iv);
  EXPECT_EQ(iv->a, q("3/4"));
  EXPECT_EQ(iv->b, q("9/8"));
  EXPECT_EQ(f(iv->midpoint()), iv->midpoint());
}

TEST(ReflectConjugate, Examples) {
  EXPECT_EQ(reflect_conjugate(shift_by("2/5")), shift_by("-2/5"));
  const PLLift f = lift({{"0", "1/4"}, {"1/2", "1/2"}});
  EXPECT_EQ(reflect_conjugate(reflect_conjugate(f)), f);
  const auto d = displacement_extrema(reflect_conjugate(f));
  EXPECT_EQ(d.min_disp, q("-1/4"));
  EXPECT_EQ(d.max_disp, 0);
}

// --- properties over seeded lifts ------------------------------------------

TEST(LiftProperties, Equivariance) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const PLLift f = seeded_lift(100 + s);
    for (const auto& smp : f.samples()) EXPECT_EQ(f(smp.x + 1), f(smp.x) + 1);
    for (const auto& x : seeded_rationals(s, 100)) ASSERT_EQ(f(x + 1), f(x) + 1) << to_string(x);
  }
}

TEST(LiftProperties, GroupLaws) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const PLLift f = seeded_lift(200 + 3 * s);
    const PLLift g = seeded_lift(201 + 3 * s);
    const PLLift h = seeded_lift(202 + 3 * s);
    EXPECT_EQ(compose(compose(f, g), h), compose(f, compose(g, h)));
    EXPECT_EQ(compose(f, PLLift::identity()), f);
    EXPECT_EQ(compose(PLLift::identity(), f), f);
    EXPECT_TRUE(compose(f, invert(f)).is_identity());
    EXPECT_TRUE(compose(invert(f), f).is_identity());
    const PLLift fg = compose(f, g);
    for (const auto& x : seeded_rationals(s, 10)) EXPECT_EQ(fg(x), f(g(x)));
  }
}

TEST(LiftProperties, CanonicalFormIsUnique) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const PLLift f = seeded_lift(300 + s);
    std::vector<Sample> padded = f.samples();
    for (const auto& x : seeded_rationals(s, 7, 1)) {
      const Rational t = frac(x);
      if (std::none_of(padded.begin(), padded.end(), [&](const Sample& p) { return p.x == t; })) {
        padded.push_back({t, f(t)});
      }
    }
    EXPECT_EQ(PLLift::from_samples(padded), f);
  }
}

TEST(LiftProperties, DisplacementSpreadBelowOne) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const PLLift f = seeded_lift(400 + s);
    const auto d = displacement_extrema(f);
    EXPECT_LE(d.min_disp, d.max_disp);
    EXPECT_LT(d.max_disp - d.min_disp, 1);
    const PLLift f8 = power(f, 8);
    const auto d8 = displacement_extrema(f8);
    EXPECT_LT(d8.max_disp - d8.min_disp, 1);
  }
}

TEST(LiftProperties, ExtremaBeatBruteForceScan) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const PLLift f = seeded_lift(500 + s);
    const auto d = displacement_extrema(f);
    EXPECT_EQ(f(d.argmin) - d.argmin, d.min_disp);
    EXPECT_EQ(f(d.argmax) - d.argmax, d.max_disp);
    for (const auto& x : seeded_rationals(s, 1000)) {
      const Rational disp = f(x) - x;
      ASSERT_GE(disp, d.min_disp);
      ASSERT_LE(disp, d.max_disp);
    }
    const bool zero_in_range = d.min_disp <= 0 && d.max_disp >= 0;
    EXPECT_EQ(d.min_abs_disp == 0, zero_in_range);
  }
}

TEST(LiftProperties, FixedIntervalWitness) {
  for (std::uint64_t s = 0; s < 40; ++s) {
    const PLLift g = seeded_lift(600 + s, 0);
    // paste an identity run onto g by composing with a bump fixing [0, 1/2]
    const PLLift bump = lift({{"0", "0"}, {"1/2", "1/2"}, {"3/4", "7/8"}});
    for (const PLLift& f : {g, bump, compose(bump, bump)}) {
      if (const auto iv = fixes_interval(f)) {
        EXPECT_LT(iv->a, iv->b);
        EXPECT_EQ(f(iv->midpoint()), iv->midpoint());
      } else {
        // no pair of consecutive samples with y = x
        const auto& sm = f.samples();
        for (std::size_t i = 0; i < sm.size(); ++i) {
          const auto& a = sm[i];
          const auto& b = sm[(i + 1) % sm.size()];
          EXPECT_FALSE(a.x == a.y && b.x == b.y && sm.size() > 1);
        }
      }
    }
  }
}

TEST(LiftProperties, ReflectionFlipsDisplacement) {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const PLLift f = seeded_lift(700 + s);
    const PLLift r = reflect_conjugate(f);
    EXPECT_EQ(reflect_conjugate(r), f);
    EXPECT_EQ(displacement_extrema(r).min_disp, -displacement_extrema(f).max_disp);
    for (const auto& x : seeded_rationals(s, 10)) EXPECT_EQ(r(x), -f(-x));
  }
}

}  // namespace
}  // namespace annuluslab

#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"

using namespace starmetric;
using starmetric::testing::at;
using starmetric::testing::q;

using L = LinearFn<Rational>;
using I = Interval<Rational>;

namespace {

I interval(long lo_num, long lo_den, long hi_num, long hi_den) { return I(at(lo_num, lo_den), at(hi_num, hi_den)); }

Rational value(const PiecewiseLinearFn<Rational>& f, const Ratio<Rational>& x) {
  auto v = eval(f, x);
  EXPECT_TRUE(v.has_value());
  return v ? to_rational(*v) : Rational(0);
}

PiecewiseLinearFn<Rational> two_line() { return lower_envelope(std::vector<L>{L(2, 0), L(1, 1)}, interval(0, 1, 3, 1)); }

}  // namespace

TEST(Add, Examples) {
  EXPECT_EQ(L(1, 0) + L(0, -1), L(1, -1));
  EXPECT_TRUE((L(1, 0) + L::plus_infinity()).is_infinite());
  EXPECT_TRUE((L::plus_infinity() + L(1, 0)).is_infinite());
  EXPECT_EQ(add(L(2, 3), L(1, -5)), L(3, -2));
}

TEST(Add, AssociativeCommutative) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> c(-20, 20);
  std::uniform_int_distribution<long> d(1, 9);
  for (int i = 0; i < 200; ++i) {
    L f(q(c(rng), d(rng)), q(c(rng), d(rng)));
    L g(q(c(rng), d(rng)), q(c(rng), d(rng)));
    L h(q(c(rng), d(rng)), q(c(rng), d(rng)));
    EXPECT_EQ((f + g) + h, f + (g + h));
    EXPECT_EQ(f + g, g + f);
  }
}

TEST(Interval, RejectsInverted) { EXPECT_THROW(interval(2, 1, 1, 1), DomainError); }

TEST(LowerEnvelope, TwoLines) {
  const auto f = two_line();
  ASSERT_EQ(f.pieces().size(), 2u);
  EXPECT_EQ(f.pieces()[0].line, L(2, 0));
  EXPECT_EQ(to_rational(f.pieces()[0].right_end), q(1));
  EXPECT_EQ(f.pieces()[1].line, L(1, 1));
  EXPECT_EQ(value(f, at(1)), q(2));
}

TEST(LowerEnvelope, SingleLine) {
  const auto f = lower_envelope(std::vector<L>{L(1, 0)}, interval(0, 1, 5, 1));
  ASSERT_EQ(f.pieces().size(), 1u);
  EXPECT_EQ(f.front_line(), L(1, 0));
  EXPECT_TRUE(breakpoints(f).empty());
}

TEST(LowerEnvelope, ThreeLinesOneHidden) {
  const std::vector<L> lines{L(3, -1), L(1, 0), L(1, 1)};
  const auto f = lower_envelope(lines, interval(0, 1, 2, 1));
  ASSERT_EQ(f.pieces().size(), 2u);
  EXPECT_EQ(f.pieces()[0].line, L(3, -1));
  EXPECT_EQ(f.pieces()[1].line, L(1, 0));
  ASSERT_EQ(breakpoints(f).size(), 1u);
  EXPECT_EQ(to_rational(breakpoints(f)[0]), q(1, 2));
  for (int i = 0; i <= 100; ++i) {
    const Rational x = q(2 * i, 100);
    Rational direct = lines[0].slope() * x + lines[0].intercept();
    for (const auto& l : lines) direct = std::min(direct, Rational(l.slope() * x + l.intercept()));
    EXPECT_EQ(value(f, Ratio<Rational>(x)), direct);
  }
}

TEST(LowerEnvelope, AllInfinite) {
  const auto f = lower_envelope(std::vector<L>{L::plus_infinity(), L::plus_infinity()}, interval(0, 1, 1, 1));
  EXPECT_FALSE(eval(f, at(1, 2)).has_value());
  EXPECT_TRUE(breakpoints(f).empty());
}

TEST(LowerEnvelope, InfiniteEntriesIgnored) {
  const auto f = lower_envelope(std::vector<L>{L::plus_infinity(), L(0, 4)}, interval(0, 1, 1, 1));
  EXPECT_EQ(value(f, at(1, 2)), q(4));
}

TEST(LowerEnvelope, DegenerateDomain) {
  const auto f = lower_envelope(std::vector<L>{L(2, 0), L(1, 1)}, interval(1, 1, 1, 1));
  EXPECT_EQ(f.pieces().size(), 1u);
  EXPECT_EQ(value(f, at(1)), q(2));
}

TEST(LowerEnvelope, BreakpointAtDomainEndIsDropped) {
  // Crossing at λ = 1 = domain.lo: only the flatter line is minimal inside.
  const auto f = lower_envelope(std::vector<L>{L(2, 0), L(1, 1)}, interval(1, 1, 3, 1));
  ASSERT_EQ(f.pieces().size(), 1u);
  EXPECT_EQ(f.front_line(), L(1, 1));
}

TEST(Eval, Examples) {
  const auto f = two_line();
  EXPECT_EQ(value(f, at(1)), q(2));
  EXPECT_EQ(value(f, at(0)), q(0));
  EXPECT_EQ(value(f, at(3)), q(4));
  EXPECT_THROW(eval(f, at(4)), DomainError);
  EXPECT_THROW(eval(f, at(-1)), DomainError);
}

TEST(RestrictToLine, Examples) {
  const auto f = two_line();
  EXPECT_EQ(restrict_to_line(f, interval(2, 1, 3, 1)), L(1, 1));
  EXPECT_EQ(restrict_to_line(f, interval(0, 1, 1, 1)), L(2, 0));
  EXPECT_EQ(restrict_to_line(f, interval(1, 1, 3, 1)), L(1, 1));
  EXPECT_THROW(restrict_to_line(f, interval(1, 2, 3, 2)), BreakpointInside);
  EXPECT_THROW(restrict_to_line(f, interval(2, 1, 4, 1)), DomainError);
}

TEST(Breakpoints, Examples) {
  ASSERT_EQ(breakpoints(two_line()).size(), 1u);
  EXPECT_EQ(to_rational(breakpoints(two_line())[0]), q(1));
  EXPECT_TRUE(breakpoints(lower_envelope(std::vector<L>{L(1, 0)}, interval(0, 1, 5, 1))).empty());
}

TEST(PiecewiseLinearFn, ConstructorChecksContinuity) {
  const I r = interval(0, 1, 2, 1);
  EXPECT_NO_THROW(PiecewiseLinearFn<Rational>(r, {{L(1, 0), at(1)}, {L(0, 1), at(2)}}));
  EXPECT_THROW(PiecewiseLinearFn<Rational>(r, {{L(1, 0), at(1)}, {L(0, 2), at(2)}}), DomainError);
  EXPECT_THROW(PiecewiseLinearFn<Rational>(r, {{L(1, 0), at(1)}}), DomainError);
  EXPECT_THROW(PiecewiseLinearFn<Rational>(r, {}), DomainError);
}

// Envelope soundness, breakpoint bound and continuity on random line sets.
TEST(LowerEnvelope, RandomSoundness) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<long> count(1, 16);
  std::uniform_int_distribution<long> coef(-12, 12);
  std::uniform_int_distribution<long> den(1, 5);
  std::uniform_int_distribution<long> steps(0, 1000);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<L> lines;
    const long k = count(rng);
    // Few distinct slopes and coefficients, so ties and duplicates occur.
    for (long i = 0; i < k; ++i) lines.emplace_back(q(coef(rng), den(rng)), q(coef(rng), den(rng)));
    const Rational lo = q(coef(rng), den(rng));
    const Rational hi = lo + q(steps(rng) % 20 + (trial % 10 == 0 ? 0 : 1), den(rng));
    const I r{Ratio<Rational>(lo), Ratio<Rational>(hi)};
    const auto f = lower_envelope(lines, r);

    ASSERT_LE(f.breakpoint_count() + 1, static_cast<std::size_t>(k));
    const auto& pieces = f.pieces();
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
      ASSERT_EQ(to_rational(pieces[i].line.at(pieces[i].right_end)),
                to_rational(pieces[i + 1].line.at(pieces[i].right_end)));
    }
    for (int s = 0; s < 50; ++s) {
      const Rational x = lo + (hi - lo) * q(steps(rng), 1000);
      Rational direct = lines[0].slope() * x + lines[0].intercept();
      for (const auto& l : lines) direct = std::min(direct, Rational(l.slope() * x + l.intercept()));
      ASSERT_EQ(value(f, Ratio<Rational>(x)), direct) << "trial " << trial;
    }
  }
}

// Many pieces force the builder past its marching fast path.
TEST(LowerEnvelope, ManyPieces) {
  std::vector<L> lines;
  // Tangents to -x² at x = 0..29: every one appears on [0, 29].
  for (long t = 0; t < 30; ++t) lines.emplace_back(q(-2 * t), q(t * t));
  std::shuffle(lines.begin(), lines.end(), std::mt19937_64(5));
  const auto f = lower_envelope(lines, interval(0, 1, 29, 1));
  EXPECT_EQ(f.pieces().size(), 30u);
  EXPECT_EQ(f.front_line(), L(0, 0));
  for (long x2 = 0; x2 <= 58; ++x2) {
    const Rational x = q(x2, 2);
    Rational direct = lines[0].slope() * x + lines[0].intercept();
    for (const auto& l : lines) direct = std::min(direct, Rational(l.slope() * x + l.intercept()));
    EXPECT_EQ(value(f, Ratio<Rational>(x)), direct);
  }
}

TEST(LowerEnvelope, IntegerKernelMatchesRational) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<long> coef(-50, 50);
  EnvelopeBuilder<std::int64_t> builder;
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<LinearFn<std::int64_t>> small;
    std::vector<L> big;
    for (int i = 0; i < 12; ++i) {
      const long m = coef(rng), b = coef(rng);
      small.emplace_back(m, b);
      big.emplace_back(q(m), q(b));
    }
    const Interval<std::int64_t> r(Ratio<std::int64_t>(-3, 2), Ratio<std::int64_t>(7, 3));
    const auto fs = builder.build(small, r);
    const auto fb = lower_envelope(big, I(at(-3, 2), at(7, 3)));
    ASSERT_EQ(fs.pieces().size(), fb.pieces().size());
    for (std::size_t i = 0; i < fs.pieces().size(); ++i) {
      EXPECT_EQ(to_rational(fs.pieces()[i].right_end), to_rational(fb.pieces()[i].right_end));
    }
  }
}

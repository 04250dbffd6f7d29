#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "test_support.hpp"

using namespace starmetric;
using starmetric::testing::four_cycle;
using starmetric::testing::q;
using starmetric::testing::two_point;

TEST(ParseRational, Decimals) {
  EXPECT_EQ(parse_rational("1.5"), q(3, 2));
  EXPECT_EQ(parse_rational("0.1"), q(1, 10));
  EXPECT_EQ(parse_rational("-2.25"), q(-9, 4));
  EXPECT_EQ(parse_rational("1e3"), q(1000));
  EXPECT_EQ(parse_rational("2.5E-2"), q(1, 40));
  EXPECT_EQ(parse_rational("6/4"), q(3, 2));
  EXPECT_EQ(parse_rational(" 7 "), q(7));
}

TEST(ParseRational, Rejects) {
  for (const char* bad : {"", "x", "1/0", "1.2.3", "1/", "/2", "1e", "--1", "nan"}) {
    EXPECT_THROW(parse_rational(bad), ParseError) << bad;
  }
}

TEST(DecimalString, TwentyDigits) {
  EXPECT_EQ(to_decimal_string(q(1)), "1.0000000000000000000");
  EXPECT_EQ(to_decimal_string(q(0)), "0");
  EXPECT_EQ(to_decimal_string(q(8, 5)), "1.6000000000000000000");
  EXPECT_EQ(to_decimal_string(q(2, 3)), "0.66666666666666666667");
  EXPECT_EQ(to_decimal_string(q(-1, 3)), "-0.33333333333333333333");
}

TEST(ParseMetric, TwoPoint) {
  const MetricSpace m = parse_metric("0 1\n1 0\n", MetricFormat::matrix);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m(0, 1), q(1));
  EXPECT_EQ(m.labels(), (std::vector<std::string>{"0", "1"}));
}

TEST(ParseMetric, TriangleViolationNamesTriple) {
  try {
    parse_metric("0 1 3\n1 0 1\n3 1 0\n", MetricFormat::matrix);
    FAIL() << "expected MetricViolation";
  } catch (const MetricViolation& e) {
    EXPECT_EQ(e.where(), (std::vector<std::size_t>{0, 1, 2}));
    EXPECT_NE(std::string(e.what()).find("(0,1,2)"), std::string::npos);
  }
}

TEST(ParseMetric, FourCycleValidAndTriplesHold) {
  const MetricSpace m = parse_metric("0 1 2 1\n1 0 1 2\n2 1 0 1\n1 2 1 0\n", MetricFormat::matrix);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t k = 0; k < 4; ++k) EXPECT_LE(m(i, k), m(i, j) + m(j, k));
}

TEST(ParseMetric, DecimalsAreExact) {
  const MetricSpace m = parse_metric("labels: a b\n0 0.1\n0.1 0\n", MetricFormat::matrix);
  EXPECT_EQ(m(0, 1), q(1, 10));
  EXPECT_EQ(m.labels(), (std::vector<std::string>{"a", "b"}));
}

TEST(ParseMetric, Json) {
  const MetricSpace m =
      parse_metric(R"({"points": ["x", "y"], "distances": [[0, "3/2"], [1.5, 0]]})", MetricFormat::json);
  EXPECT_EQ(m(1, 0), q(3, 2));
  EXPECT_EQ(m.labels(), (std::vector<std::string>{"x", "y"}));
}

TEST(ParseMetric, JsonDecimalLiteralIsExact) {
  const MetricSpace m = parse_metric(R"({"distances": [[0, 0.1], [0.1, 0]]})", MetricFormat::json);
  EXPECT_EQ(m(0, 1), q(1, 10));
}

TEST(ParseMetric, Malformed) {
  EXPECT_THROW(parse_metric("0 1\n1 x\n", MetricFormat::matrix), ParseError);
  EXPECT_THROW(parse_metric("0 1\n1\n", MetricFormat::matrix), ParseError);
  EXPECT_THROW(parse_metric("", MetricFormat::matrix), ParseError);
  EXPECT_THROW(parse_metric("{", MetricFormat::json), ParseError);
  EXPECT_THROW(parse_metric(R"({"points": ["a"]})", MetricFormat::json), ParseError);
}

TEST(ParseMetric, MetricConditions) {
  EXPECT_THROW(parse_metric("0 1\n2 0\n", MetricFormat::matrix), MetricViolation);   // asymmetric
  EXPECT_THROW(parse_metric("0 0\n0 0\n", MetricFormat::matrix), MetricViolation);   // zero off-diagonal
  EXPECT_THROW(parse_metric("0 -1\n-1 0\n", MetricFormat::matrix), MetricViolation); // negative
  EXPECT_THROW(parse_metric("1 1\n1 0\n", MetricFormat::matrix), MetricViolation);   // diagonal
}

TEST(ParseMetric, WriteRoundTrip) {
  const MetricSpace m = MetricSpace::from_rows({{0, q(1, 3), q(1, 2)}, {q(1, 3), 0, q(1, 2)}, {q(1, 2), q(1, 2), 0}},
                                               {"p", "q", "r"});
  for (auto fmt : {MetricFormat::matrix, MetricFormat::json}) {
    EXPECT_EQ(parse_metric(write_metric(m, fmt), fmt), m);
  }
}

TEST(StarDilation, Examples) {
  EXPECT_EQ(star_dilation(two_point(), {q(1, 2), q(1, 2)}), q(1));
  EXPECT_EQ(star_dilation(two_point(), {q(1), q(1)}), q(2));
  EXPECT_EQ(star_dilation(four_cycle(), {q(1), q(1), q(1), q(1)}), q(2));
}

TEST(StarDilation, Errors) {
  EXPECT_THROW(star_dilation(two_point(), {q(-1), q(2)}), DomainError);
  EXPECT_THROW(star_dilation(two_point(), {q(1)}), DomainError);
  const MetricSpace one({"a"}, {q(0)});
  EXPECT_THROW(star_dilation(one, {q(0)}), DomainError);
}

TEST(VerifyStar, Examples) {
  const MetricSpace m = two_point();
  EXPECT_TRUE(verify_star(m, {m.labels(), {q(1, 2), q(1, 2)}, q(1)}).feasible());

  const auto report = verify_star(m, {m.labels(), {q(0), q(0)}, q(1)});
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].constraint, Constraint::dominating);
  EXPECT_EQ(report.violations[0].v, 0u);
  EXPECT_EQ(report.violations[0].w, 1u);
  EXPECT_NE(describe(report.violations[0], m.labels()).find("(2)"), std::string::npos);

  const MetricSpace c4 = four_cycle();
  EXPECT_TRUE(verify_star(c4, {c4.labels(), {q(1), q(1), q(1), q(1)}, q(2)}).feasible());
}

TEST(VerifyStar, AllThreeConstraints) {
  const MetricSpace m = two_point();
  const auto neg = verify_star(m, {m.labels(), {q(-1), q(3)}, q(2)});
  ASSERT_FALSE(neg.feasible());
  EXPECT_EQ(neg.violations[0].constraint, Constraint::nonnegative);

  const auto dil = verify_star(m, {m.labels(), {q(1), q(1)}, q(3, 2)});
  ASSERT_EQ(dil.violations.size(), 1u);
  EXPECT_EQ(dil.violations[0].constraint, Constraint::dilation);
}

TEST(VerifyStar, LabelMismatch) {
  const MetricSpace m = two_point();
  EXPECT_THROW(verify_star(m, {{"a", "b"}, {q(1), q(1)}, q(2)}), DomainError);
}

// Agreement between verify_star and the three constraint families, plus
// "dilation of a dominating star is at least 1".
TEST(VerifyStar, AgreesWithConstraintsOnRandomVectors) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(-1, 12);
  for (int trial = 0; trial < 200; ++trial) {
    const MetricSpace m = gen_random_metric(4, trial, MetricModel::shortest_path);
    std::vector<Rational> c;
    for (int v = 0; v < 4; ++v) c.push_back(q(num(rng), 2));
    const Rational lam = q(num(rng) + 2, 2);
    bool ok = true;
    bool dominating = true;
    for (std::size_t v = 0; v < 4; ++v) {
      ok = ok && c[v] >= 0;
      for (std::size_t w = v + 1; w < 4; ++w) {
        dominating = dominating && c[v] + c[w] >= m(v, w);
        ok = ok && c[v] + c[w] >= m(v, w) && c[v] + c[w] <= lam * m(v, w);
      }
    }
    ok = ok && dominating;
    EXPECT_EQ(verify_star(m, {m.labels(), c, lam}).feasible(), ok);
    if (dominating && std::all_of(c.begin(), c.end(), [](const Rational& x) { return x >= 0; })) {
      const Rational dil = star_dilation(m, c);
      EXPECT_GE(dil, 1);
      EXPECT_TRUE(verify_star(m, {m.labels(), c, dil}).feasible());
    }
  }
}

TEST(Generator, Deterministic) {
  for (auto model : {MetricModel::shortest_path, MetricModel::rounded_euclidean}) {
    EXPECT_EQ(gen_random_metric(9, 3, model), gen_random_metric(9, 3, model));
    EXPECT_FALSE(gen_random_metric(9, 3, model) == gen_random_metric(9, 4, model));
  }
}

TEST(Generator, ValidOutputs) {
  for (auto model : {MetricModel::shortest_path, MetricModel::rounded_euclidean}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      EXPECT_EQ(gen_random_metric(2, seed, model).size(), 2u);
    }
    const MetricSpace m = gen_random_metric(5, 7, model);
    EXPECT_EQ(parse_metric(write_metric(m, MetricFormat::matrix), MetricFormat::matrix), m);
  }
  EXPECT_THROW(gen_random_metric(1, 0, MetricModel::shortest_path), DomainError);
}

TEST(Generator, TriangleInequalityExhaustive) {
  for (auto model : {MetricModel::shortest_path, MetricModel::rounded_euclidean}) {
    const MetricSpace m = gen_random_metric(40, 5, model);
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j) {
          ASSERT_GT(m(i, j), 0);
        }
        ASSERT_EQ(m(i, j), m(j, i));
        for (std::size_t k = 0; k < n; ++k) ASSERT_LE(m(i, k), m(i, j) + m(j, k));
      }
  }
}

TEST(MetricSpace, ScaledBy) {
  const MetricSpace m = four_cycle().scaled_by(q(7, 5));
  EXPECT_EQ(m(0, 2), q(14, 5));
  EXPECT_THROW(four_cycle().scaled_by(q(0)), DomainError);
}

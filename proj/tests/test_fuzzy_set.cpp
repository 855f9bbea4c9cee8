#include <gtest/gtest.h>

#include <random>

#include "plfc/error.hpp"
#include "plfc/fuzzy_set.hpp"

namespace plfc {
namespace {

Rational q(long n, long d = 1) { return Rational(n, d); }

DomainPtr temperatures() { return Domain::real_interval(-50, 50); }
DomainPtr prices() { return Domain::real_interval(0, 100); }
DomainPtr small() { return Domain::finite({"1", "2", "3"}); }

TEST(Domain, RejectsDegenerateShapes) {
  EXPECT_THROW(Domain::real_interval(1, 1), DomainError);
  EXPECT_THROW(Domain::finite({}), DomainError);
  EXPECT_THROW(Domain::finite({"a", "a"}), DomainError);
}

TEST(Membership, Trapezoid) {
  auto a35 = FuzzySet::trapezoid(prices(), 25, 35, 35, 45);
  EXPECT_EQ(a35.membership(q(40)), Degree(1, 2));
  auto mu1 = FuzzySet::trapezoid(temperatures(), 20, 24, 26, 30);
  EXPECT_EQ(mu1.membership(q(25)), Degree::one());
  EXPECT_EQ(mu1.membership(q(19)), Degree::zero());
  EXPECT_EQ(mu1.membership(q(21)), Degree(1, 4));
  EXPECT_THROW(mu1.membership(q(51)), DomainError);
  EXPECT_THROW(mu1.membership(std::string("x")), DomainError);
}

TEST(Membership, SingletonIsIndicator) {
  auto s = FuzzySet::singleton(prices(), q(40));
  EXPECT_EQ(s.membership(q(40)), Degree::one());
  EXPECT_EQ(s.membership(q(81, 2)), Degree::zero());
  EXPECT_TRUE(s.is_crisp());
}

TEST(Trapezoid, RejectsUnorderedOrOutOfDomain) {
  EXPECT_THROW(FuzzySet::trapezoid(temperatures(), 3, 2, 4, 5), DomainError);
  EXPECT_THROW(FuzzySet::trapezoid(temperatures(), 40, 45, 50, 60), DomainError);
  EXPECT_THROW(FuzzySet::trapezoid(small(), 1, 2, 3, 4), DomainError);
}

TEST(AlphaCut, TrapezoidIsClosedInterval) {
  auto mu1 = FuzzySet::trapezoid(temperatures(), 20, 24, 26, 30);
  EXPECT_EQ(alpha_cut(mu1, Degree(1, 2)), FuzzySet::crisp_interval(temperatures(), 22, 28, false, false));
  EXPECT_EQ(alpha_cut(mu1, Degree::one()), FuzzySet::crisp_interval(temperatures(), 24, 26, false, false));
  EXPECT_EQ(alpha_cut(mu1, Degree::zero()), FuzzySet::constant(temperatures(), Degree::one()));
}

TEST(AlphaCut, DiscreteThreshold) {
  auto d = Domain::finite({"1", "2"});
  auto a = FuzzySet::discrete(d, {{"1", Degree::one()}, {"2", Degree(1, 2)}});
  EXPECT_EQ(alpha_cut(a, Degree(3, 4)), FuzzySet::crisp_finite(d, {"1"}));
}

TEST(Support, OpenIntervalForStrictSlopes) {
  auto mu1 = FuzzySet::trapezoid(temperatures(), 20, 24, 26, 30);
  auto s = support(mu1);
  EXPECT_EQ(s, FuzzySet::crisp_interval(temperatures(), 20, 30, true, true));
  EXPECT_EQ(s.membership(q(20)), Degree::zero());
  EXPECT_EQ(s.membership(q(201, 10)), Degree::one());
}

TEST(Support, CrispAndEmpty) {
  auto c = FuzzySet::crisp_finite(small(), {"1", "2"});
  EXPECT_EQ(support(c), c);
  EXPECT_TRUE(support(FuzzySet::constant(small(), Degree::zero())).is_empty());
  EXPECT_TRUE(support(FuzzySet::constant(temperatures(), Degree::zero())).is_empty());
}

TEST(Necessity, CounterexamplePair) {
  auto mu1 = FuzzySet::trapezoid(temperatures(), 20, 24, 26, 30);
  auto mu2 = FuzzySet::trapezoid(temperatures(), 20, 25, 25, 30);
  EXPECT_EQ(necessity(mu2, mu1), Degree(4, 9));
  EXPECT_EQ(goedel_reciprocal_necessity(mu2, mu1), Degree::zero());
  EXPECT_EQ(necessity(mu2, alpha_cut(mu1, Degree::one())), Degree(4, 5));
}

TEST(Necessity, CrispSelfAndSingleton) {
  auto c = FuzzySet::crisp_interval(temperatures(), 0, 10, false, true);
  EXPECT_EQ(necessity(c, c), Degree::one());
  auto d = FuzzySet::trapezoid(temperatures(), 20, 24, 26, 30);
  EXPECT_EQ(necessity(d, FuzzySet::singleton(temperatures(), q(23))), d.membership(q(23)));
}

TEST(Possibility, Basics) {
  auto a = FuzzySet::trapezoid(temperatures(), 20, 25, 25, 30);
  EXPECT_EQ(possibility(a, a), Degree::one());
  auto far = FuzzySet::trapezoid(temperatures(), 40, 42, 44, 46);
  EXPECT_EQ(possibility(a, far), Degree::zero());
  auto c = FuzzySet::trapezoid(temperatures(), 28, 32, 32, 36);
  EXPECT_EQ(possibility(a, c), Degree(2, 9));
}

TEST(Goedel, DominatedAndCrispPoint) {
  auto big = FuzzySet::trapezoid(temperatures(), 10, 20, 30, 40);
  auto inner = FuzzySet::trapezoid(temperatures(), 20, 24, 26, 30);
  EXPECT_EQ(goedel_reciprocal_necessity(big, inner), Degree::one());
  EXPECT_EQ(goedel_reciprocal_necessity(inner, FuzzySet::singleton(temperatures(), q(0))), Degree::zero());
}

TEST(SetOps, MaxOfDiscreteSets) {
  auto a = FuzzySet::discrete(small(), {{"1", Degree::one()}, {"2", Degree::one()}, {"3", Degree::zero()}});
  auto b = FuzzySet::discrete(small(), {{"1", Degree::zero()}, {"2", Degree::one()}, {"3", Degree::one()}});
  EXPECT_EQ(max_fs(a, b), FuzzySet::constant(small(), Degree::one()));
  EXPECT_EQ(min_fs(a, FuzzySet::constant(small(), Degree::one())), a);
  EXPECT_EQ(height(FuzzySet::trapezoid(temperatures(), 20, 24, 26, 30)), Degree::one());
  EXPECT_THROW(max_fs(a, FuzzySet::constant(temperatures(), Degree::one())), DomainError);
}

TEST(SetOps, ComplementAndSubset) {
  auto t = FuzzySet::trapezoid(temperatures(), 20, 24, 26, 30);
  EXPECT_EQ(complement(complement(t)), t);
  EXPECT_EQ(complement(t).membership(q(22)), Degree(1, 2));
  EXPECT_TRUE(subset_of(t, FuzzySet::trapezoid(temperatures(), 10, 20, 30, 40)));
  EXPECT_FALSE(subset_of(FuzzySet::trapezoid(temperatures(), 10, 20, 30, 40), t));
}

TEST(Describe, ShapesPrintInDeclarationSyntax) {
  EXPECT_EQ(FuzzySet::trapezoid(temperatures(), 20, 24, 26, 30).describe(), "trap(20, 24, 26, 30)");
  EXPECT_EQ(FuzzySet::crisp_interval(temperatures(), 1, 2, true, false).describe(), "interval(1, 2]");
  EXPECT_EQ(FuzzySet::constant(small(), Degree(4, 9)).describe(), "const(4/9)");
}

// Randomized checks against grid evaluation.

struct Rng {
  std::mt19937 gen{20260714};
  long range(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(gen); }
  FuzzySet trapezoid(const DomainPtr& d) {
    std::vector<long> t{range(-10, 10), range(-10, 10), range(-10, 10), range(-10, 10)};
    std::sort(t.begin(), t.end());
    return FuzzySet::trapezoid(d, t[0], t[1], t[2], t[3]);
  }
  FuzzySet table(const DomainPtr& d) {
    std::vector<Rational> v;
    for (std::size_t i = 0; i < d->size(); ++i) v.push_back(Rational(range(0, 4), 4));
    return FuzzySet::from_table(d, v);
  }
};

Rational grid_necessity(const FuzzySet& a, const FuzzySet& b, const Rational& lo, const Rational& hi, long steps) {
  Rational best = 1;
  for (long i = 0; i <= steps; ++i) {
    Rational x = lo + (hi - lo) * Rational(i, steps);
    Rational v = std::max<Rational>(Rational(1) - b.membership(x).value(), a.membership(x).value());
    best = std::min(best, v);
  }
  return best;
}

TEST(Property, AnalyticNecessityMatchesGrid) {
  auto d = Domain::real_interval(-12, 12);
  Rng rng;
  for (int i = 0; i < 150; ++i) {
    auto a = rng.trapezoid(d);
    auto b = rng.trapezoid(d);
    Rational analytic = necessity(a, b).value();
    Rational grid = grid_necessity(a, b, -12, 12, 24 * 60);
    EXPECT_LE(analytic, grid);
    EXPECT_LE(grid - analytic, Rational(1, 10)) << a.describe() << " | " << b.describe();
    Rational pos = possibility(a, b).value();
    EXPECT_GE(pos, min_fs(a, b).membership(Rational(0)).value());
  }
}

TEST(Property, AlphaCutNesting) {
  auto d = Domain::real_interval(-12, 12);
  Rng rng;
  for (int i = 0; i < 100; ++i) {
    auto a = rng.trapezoid(d);
    Degree lo(rng.range(0, 8), 8), hi(rng.range(0, 8), 8);
    if (hi < lo) std::swap(lo, hi);
    EXPECT_TRUE(subset_of(alpha_cut(a, hi), alpha_cut(a, lo)));
  }
}

TEST(Property, CrispNecessityIsInclusion) {
  auto d = Domain::finite({"a", "b", "c", "d"});
  Rng rng;
  const std::vector<std::string> syms{"a", "b", "c", "d"};
  for (int i = 0; i < 200; ++i) {
    std::vector<std::string> ma, mb;
    for (const auto& s : syms) {
      if (rng.range(0, 1)) ma.push_back(s);
      if (rng.range(0, 1)) mb.push_back(s);
    }
    auto a = FuzzySet::crisp_finite(d, ma);
    auto b = FuzzySet::crisp_finite(d, mb);
    bool included = subset_of(support(b), core(a));
    EXPECT_EQ(necessity(a, b).is_one(), included);
    EXPECT_TRUE(necessity(a, b).is_zero() || necessity(a, b).is_one());
    bool meet = !min_fs(a, b).is_empty();
    EXPECT_EQ(possibility(a, b).is_one(), meet);
  }
}

TEST(Property, NecessityThresholdMatchesCutInequality) {
  auto d = Domain::finite({"a", "b", "c", "d"});
  Rng rng;
  for (int i = 0; i < 300; ++i) {
    auto a = rng.table(d);
    auto pi = rng.table(d);
    Degree alpha(rng.range(1, 4), 4);
    bool lhs = necessity(a, pi) >= alpha;
    auto cut = alpha_cut(a, alpha);
    bool rhs = true;
    for (const auto& s : d->symbols()) {
      Rational bound = std::max<Rational>(Rational(1) - alpha.value(), cut.membership(s).value());
      rhs = rhs && pi.membership(s).value() <= bound;
    }
    EXPECT_EQ(lhs, rhs);
  }
}

TEST(Property, GoedelNeverExceedsOneAndDominatedGivesOne) {
  auto d = Domain::finite({"a", "b", "c"});
  Rng rng;
  for (int i = 0; i < 200; ++i) {
    auto a = rng.table(d);
    auto b = rng.table(d);
    Degree g = goedel_reciprocal_necessity(a, b);
    EXPECT_EQ(g.is_one(), subset_of(b, a));
  }
}

}  // namespace
}  // namespace plfc

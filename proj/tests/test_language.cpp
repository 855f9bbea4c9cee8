#include <gtest/gtest.h>

#include "plfc/calculus.hpp"
#include "plfc/error.hpp"
#include "plfc/language.hpp"
#include "support.hpp"

namespace plfc {
namespace {

using testing::clause;

const char* kPrices = R"(
sort product = {potatoes, apples, salad}
sort price = real[0, 100]
const prod1 : product = potatoes
fuzzy about_35 : price = trap(25, 35, 35, 45)
pred price(product, price~)
(price(prod1, about_35), 1)
)";

const char* kGround = R"(
sort s = {c, d}
sort t = {c2, d2}
fuzzy A : s = discrete{c: 1, d: 1/2}
fuzzy B : s = discrete{c: 1/4, d: 1}
fuzzy C : t = discrete{c2: 1/3, d2: 1}
pred p(s~, s)
pred q(t)
)";

TEST(WellFormed, MatchingTypesGiveNoDiagnostics) {
  KnowledgeBase kb = parse_kb(kPrices);
  EXPECT_TRUE(well_formed(kb).empty());
}

TEST(WellFormed, FuzzyConstantAtBasicPosition) {
  KnowledgeBase kb = parse_kb(kPrices);
  Clause c;
  c.literals.push_back(Literal{true, "price", {Term::fuzzy("about_35", "price"), Term::fuzzy("about_35", "price")}});
  c.weight = WeightExpr::constant(Degree::one());
  kb.clauses.push_back(c);
  auto d = well_formed(kb);
  ASSERT_FALSE(d.empty());
  EXPECT_EQ(d.front().clause, 1u);
  bool sort_or_position = false;
  for (const auto& x : d)
    if (x.message.find("sort") != std::string::npos || x.message.find("basic") != std::string::npos)
      sort_or_position = true;
  EXPECT_TRUE(sort_or_position);
}

TEST(WellFormed, SubnormalFuzzyConstant) {
  KnowledgeBase kb = parse_kb(R"(
sort s = {a, b}
fuzzy low : s = discrete{a: 1/2, b: 1/4}
pred p(s~)
)");
  kb.clauses.push_back(Clause{{Literal{true, "p", {Term::fuzzy("low", "s")}}}, WeightExpr::constant(Degree::one())});
  auto d = well_formed(kb);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_NE(d.front().message.find("normalized"), std::string::npos);
}

TEST(WellFormed, SubnormalSetInWeightIsFine) {
  EXPECT_NO_THROW(parse_kb(R"(
sort s = {a, b}
fuzzy low : s = discrete{a: 1/2, b: 1/4}
pred p(s)
(p(x), low(x))
)"));
}

TEST(GroundInstances, FourInstancesOverTwoConstantsPerSort) {
  KnowledgeBase kb = parse_kb(kGround);
  Clause c = clause(kb, "(p(A, x) | q(y), min(3/4, B(x), C(y)))");
  auto inst = ground_instances(c, kb.signature);
  ASSERT_EQ(inst.size(), 4u);
  Clause expected = clause(kb, "(p(A, c) | q(d2), min(3/4, B(c), C(d2)))");
  EXPECT_NE(std::find(inst.begin(), inst.end(), expected), inst.end());
  for (const auto& g : inst) EXPECT_TRUE(vars(g).empty());
}

TEST(GroundInstances, GroundClauseIsItsOwnInstance) {
  KnowledgeBase kb = parse_kb(kGround);
  Clause c = clause(kb, "(q(c2), 1/2)");
  auto inst = ground_instances(c, kb.signature);
  ASSERT_EQ(inst.size(), 1u);
  EXPECT_EQ(inst.front(), c);
}

TEST(GroundInstances, RealSortWithoutPoolThrows) {
  KnowledgeBase kb = parse_kb(R"(
sort r = real[0, 1]
pred p(r)
)");
  Clause c = clause(kb, "(p(x), 1)");
  EXPECT_THROW(ground_instances(c, kb.signature), EnumerationError);
  auto inst = ground_instances(c, kb.signature, {{"r", {DomainValue{Rational(0)}, DomainValue{Rational(1, 2)}}}});
  EXPECT_EQ(inst.size(), 2u);
  EXPECT_THROW(ground_instances(c, kb.signature, {{"r", {}}}), Error);
}

TEST(GroundInstances, CommuteWithEvaluation) {
  KnowledgeBase kb = parse_kb(kGround);
  const auto& sig = kb.signature;
  Clause c = clause(kb, "(p(A, x), min(3/4, B(x)))");
  for (const auto& g : ground_instances(c, sig)) {
    const Term& arg = g.literals[0].args[1];
    Degree expected = min(Degree(3, 4), sig.fuzzy_set("B").membership(arg.value));
    EXPECT_EQ(evaluate(g.weight, sig), expected);
  }
}

TEST(ConstantWeights, ConstantMembershipBehavesLikeAConstant) {
  KnowledgeBase kb = parse_kb(R"(
sort s = {a, b}
fuzzy half : s = const(1/2)
pred p(s)
)");
  const auto& sig = kb.signature;
  Clause as_const = clause(kb, "(p(x), 1/2)");
  Clause as_set = clause(kb, "(p(x), half(x))");
  auto a = ground_instances(as_const, sig);
  auto b = ground_instances(as_set, sig);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(evaluate(a[i].weight, sig), evaluate(b[i].weight, sig));
  EXPECT_EQ(weight_sup(as_set.weight, sig), weight_sup(as_const.weight, sig));
}

TEST(Vars, BaseWeightAndCutLevels) {
  KnowledgeBase kb = parse_kb(kGround);
  Clause c = clause(kb, "(p([A @ B(z)], x), min(B(x), B(w)))");
  EXPECT_EQ(base_vars(c), (std::set<std::string>{"x", "z"}));
  EXPECT_EQ(weight_vars(c), (std::set<std::string>{"w", "x"}));
  EXPECT_EQ(vars(c), (std::set<std::string>{"w", "x", "z"}));
}

TEST(Printing, ClauseForms) {
  KnowledgeBase kb = parse_kb(kGround);
  EXPECT_EQ(to_string(clause(kb, "(~p([A>0], c) | q(x), min(1/2, C(x)))")), "(~p([A>0], c) | q(x), min(1/2, C(x)))");
  EXPECT_EQ(to_string(Clause{{}, WeightExpr::constant(Degree(4, 9))}), "(bot, 4/9)");
}

}  // namespace
}  // namespace plfc

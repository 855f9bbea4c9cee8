#include <gtest/gtest.h>

#include <random>

#include "json.hpp"
#include "plfc/calculus.hpp"
#include "plfc/error.hpp"
#include "plfc/query.hpp"
#include "plfc/semantics_oracle.hpp"
#include "support.hpp"

namespace plfc {
namespace {

using testing::clause;
using Tuples = std::vector<std::vector<DomainValue>>;

DomainValue num(long n) { return DomainValue(Rational(n)); }
DomainValue sym(const char* s) { return DomainValue(std::string(s)); }

class PricesTest : public ::testing::Test {
 protected:
  Document doc = testing::fixture("prices.plfc");
  FiniteContext ctx = FiniteContext::build(doc.kb.signature, doc.kb.clauses, doc.oracle->grids);
  Clause atom = clause(doc.kb, "(price(prod1, about_35), 1)");
  Clause negated = clause(doc.kb, "(~price(prod1, about_35), 1)");

  World world(long potatoes, long apples, long salad) {
    return make_world(ctx, {{"price",
                             Tuples{{sym("potatoes"), num(potatoes)}, {sym("apples"), num(apples)},
                                    {sym("salad"), num(salad)}}}});
  }
};

TEST_F(PricesTest, TruthValuesOfExampleWorld) {
  World w0 = world(40, 50, 25);
  EXPECT_EQ(truth_eval(ctx, w0, atom), Degree(1, 2));
  EXPECT_EQ(truth_eval(ctx, w0, negated), Degree(1));
}

TEST_F(PricesTest, EmptyExtension) {
  World empty = make_world(ctx, {});
  EXPECT_EQ(truth_eval(ctx, empty, atom), Degree(0));
  EXPECT_EQ(truth_eval(ctx, empty, clause(doc.kb, "(~price(prod2, 30), 1)")), Degree(1));
  EXPECT_EQ(truth_eval(ctx, world(40, 30, 25), clause(doc.kb, "(~price(prod2, 30), 1)")), Degree(0));
  EXPECT_THROW(make_world(ctx, {{"price", Tuples{{sym("potatoes"), num(41)}}}}), DomainError);
}

TEST_F(PricesTest, NecessityOfExampleDistribution) {
  PossDist pi{{world(40, 50, 25), Degree(3, 5)}, {world(35, 45, 20), Degree(1)}, {world(45, 50, 30), Degree(1, 5)}};
  EXPECT_EQ(clause_necessity(ctx, pi, atom), Degree(1, 2));
  EXPECT_TRUE(satisfies(ctx, pi, clause(doc.kb, "(price(prod1, about_35), 1/2)")));
  EXPECT_FALSE(satisfies(ctx, pi, clause(doc.kb, "(price(prod1, about_35), 3/5)")));
  EXPECT_TRUE(satisfies(ctx, pi, clause(doc.kb, "(price(prod1, about_35), 0)")));
}

TEST_F(PricesTest, DegenerateDistributions) {
  World w0 = world(40, 50, 25);
  EXPECT_EQ(clause_necessity(ctx, {{w0, Degree(1)}}, atom), truth_eval(ctx, w0, atom));
  EXPECT_EQ(clause_necessity(ctx, {}, atom), Degree(1));
  EXPECT_EQ(clause_necessity(ctx, {{w0, Degree(0)}}, atom), Degree(1));
}

TEST_F(PricesTest, CarrierHoldsGridAndBreakpoints) {
  const auto& c = ctx.carrier("price");
  for (long v : {0, 20, 25, 35, 45, 50, 100}) EXPECT_NE(std::find(c.begin(), c.end(), num(v)), c.end()) << v;
  EXPECT_EQ(ctx.carrier("product").size(), 3u);
}

// Hand-built sups over the atoms in and out of the extension, as in the definition.
TEST(TruthEval, MatchesDefinitionOnRandomWorlds) {
  KnowledgeBase kb = parse_kb(R"(
sort s = {1, 2, 3}
fuzzy A : s = discrete{1: 1/4, 2: 1, 3: 1/2}
fuzzy B : s = discrete{1: 1, 2: 1/3}
pred p(s~, s~)
)");
  FiniteContext ctx(kb.signature, {}, {"p"});
  ASSERT_EQ(ctx.atoms().size(), 9u);
  const auto& a = kb.signature.fuzzy_set("A");
  const auto& b = kb.signature.fuzzy_set("B");
  std::mt19937 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    World w(9);
    for (std::size_t k = 0; k < 9; ++k) w[k] = rng() % 2;
    Degree pos = Degree::zero(), neg = Degree::zero();
    for (std::size_t k = 0; k < 9; ++k) {
      const auto& at = ctx.atoms()[k];
      Degree m = min(a.membership(at.args[0]), b.membership(at.args[1]));
      if (w[k]) pos = max(pos, m);
      else neg = max(neg, m);
    }
    EXPECT_EQ(truth_eval(ctx, w, clause(kb, "(p(A, B), 1)")), pos);
    EXPECT_EQ(truth_eval(ctx, w, clause(kb, "(~p(A, B), 1)")), neg);
    EXPECT_EQ(truth_eval(ctx, w, clause(kb, "(p(A, B) | ~p(A, B), 1)")), max(pos, neg));
  }
}

TEST(Enumeration, CountsEveryInterpretation) {
  KnowledgeBase kb = parse_kb("sort s = {1, 2, 3}\npred p(s)\npred q(s)\n(p(1), 1)\n");
  auto ctx = FiniteContext::build(kb.signature, kb.clauses);
  EXPECT_EQ(ctx.atoms().size(), 3u);
  auto rep = oracle_entails(ctx, kb.clauses, clause(kb, "(p(1), 1)"));
  EXPECT_EQ(rep.worlds, 8u);
  EXPECT_TRUE(rep.entailed);
  auto both = FiniteContext::build(kb.signature, {clause(kb, "(p(1) | q(2), 1)")});
  EXPECT_EQ(oracle_entails(both, kb.clauses, clause(kb, "(p(1) | q(2), 1)")).worlds, 64u);
  OracleOptions small;
  small.limit = 32;
  EXPECT_THROW(oracle_entails(both, kb.clauses, clause(kb, "(q(1), 1)"), small), EnumerationError);
}

TEST(LeastSpecificModel, Shapes) {
  KnowledgeBase kb = parse_kb("sort s = {1, 2}\npred p(s)\n");
  FiniteContext ctx(kb.signature, {}, {"p"});
  PossDist none = least_specific_model(ctx, {});
  ASSERT_EQ(none.size(), 4u);
  for (const auto& [w, d] : none) EXPECT_EQ(d, Degree(1));
  Clause phi = clause(kb, "(p(1), 1)");
  PossDist one = least_specific_model(ctx, {{phi, Degree(1)}});
  for (const auto& [w, d] : one) EXPECT_EQ(d, truth_eval(ctx, w, phi).is_one() ? Degree(1) : Degree(0));
}

TEST(LeastSpecificModel, CharacterizesModels) {
  KnowledgeBase kb = parse_kb(R"(
sort s = {1, 2}
fuzzy A : s = discrete{1: 1, 2: 1/2}
pred p(s~)
pred q(s~)
)");
  FiniteContext ctx(kb.signature, {}, {"p", "q"});
  std::mt19937 rng(15);
  const char* lits[] = {"p(1)", "~p(2)", "q(A)", "~q(A)", "p(A) | q(2)", "~p(1) | ~q(1)"};
  const char* ws[] = {"1/4", "1/2", "3/4", "1"};
  int inside = 0, outside = 0;
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<std::pair<Clause, Degree>> k;
    for (int i = 0, n = 1 + rng() % 3; i < n; ++i) {
      Clause c = clause(kb, std::string("(") + lits[rng() % 6] + ", " + ws[rng() % 4] + ")");
      k.emplace_back(c, evaluate(c.weight, kb.signature));
    }
    PossDist top = least_specific_model(ctx, k);
    for (int s = 0; s < 40; ++s) {
      PossDist pi;
      bool le = true;
      for (const auto& [w, d] : top) {
        Degree v(static_cast<long>(rng() % 5), 4);
        if (s % 2 == 0) v = min(v, d);
        le = le && v <= d;
        pi[w] = v;
      }
      bool sat = true;
      for (const auto& [c, d] : k) sat = sat && clause_necessity(ctx, pi, c) >= d;
      EXPECT_EQ(sat, le);
      (le ? inside : outside)++;
    }
  }
  EXPECT_GT(inside, 1000);
  EXPECT_GT(outside, 500);
}

TEST(Entailment, TemperaturePair) {
  Document doc = testing::fixture("temperature.plfc");
  Query q = classify_query(doc.queries.at(0), doc.kb.signature);
  auto run = [&](const Degree& beta, Semantics sem) {
    Clause goal = with_beta(q, beta);
    std::vector<Clause> all = doc.kb.clauses;
    all.push_back(goal);
    auto ctx = FiniteContext::build(doc.kb.signature, all, {}, {beta});
    OracleOptions opt;
    opt.semantics = sem;
    return oracle_entails(ctx, doc.kb.clauses, goal, opt);
  };
  auto at = run(Degree(4, 9), Semantics::Necessity);
  EXPECT_TRUE(at.entailed);
  EXPECT_EQ(at.degree, Degree(4, 5));
  EXPECT_TRUE(run(Degree(4, 5), Semantics::Necessity).entailed);
  EXPECT_FALSE(run(Degree(5, 6), Semantics::Necessity).entailed);
  auto goedel = run(Degree(4, 9), Semantics::ReciprocalGoedel);
  EXPECT_FALSE(goedel.entailed);
  EXPECT_EQ(goedel.degree, Degree(0));
}

TEST(Entailment, MergingFixture) {
  Document doc = testing::fixture("merging.plfc");
  std::vector<Clause> all = doc.kb.clauses;
  all.push_back(doc.queries.at(0));
  auto ctx = FiniteContext::build(doc.kb.signature, all);
  auto rep = oracle_entails(ctx, doc.kb.clauses, doc.queries.at(0));
  EXPECT_TRUE(rep.entailed);
  EXPECT_EQ(rep.degree, Degree(1));
}

TEST(Entailment, ReflexiveOnRandomKbs) {
  std::mt19937 rng(21);
  const char* lits[] = {"p(1)", "~p(x)", "q(A)", "p(A) | ~q(2)", "~q(x) | p(x)"};
  const char* ws[] = {"1/4", "1/2", "3/4", "1", "A(x)"};
  for (int trial = 0; trial < 40; ++trial) {
    std::string text = "sort s = {1, 2}\nfuzzy A : s = discrete{1: 1, 2: 1/2}\npred p(s~)\npred q(s~)\n";
    for (int i = 0, n = 1 + rng() % 3; i < n; ++i) {
      std::string lit = lits[rng() % 5];
      std::string w = ws[rng() % (lit.find('x') == std::string::npos ? 4 : 5)];
      text += "(" + lit + ", " + w + ")\n";
    }
    KnowledgeBase kb = parse_kb(text);
    auto ctx = FiniteContext::build(kb.signature, kb.clauses);
    for (const auto& c : kb.clauses) EXPECT_TRUE(oracle_entails(ctx, kb.clauses, c).entailed) << text;
  }
}

TEST(Entailment, NormalizedModeIgnoresSubnormalModels) {
  KnowledgeBase kb = parse_kb("sort s = {1, 2}\npred p(s)\npred q(s)\n(p(1), 1/2)\n(~p(1), 1/2)\n");
  Clause goal = clause(kb, "(q(1), 3/4)");
  std::vector<Clause> all = kb.clauses;
  all.push_back(goal);
  auto ctx = FiniteContext::build(kb.signature, all);
  auto plain = oracle_entails(ctx, kb.clauses, goal);
  EXPECT_FALSE(plain.entailed);
  EXPECT_EQ(plain.degree, Degree(1, 2));
  EXPECT_EQ(plain.height, Degree(1, 2));
  OracleOptions norm;
  norm.normalized = true;
  auto n = oracle_entails(ctx, kb.clauses, goal, norm);
  EXPECT_TRUE(n.entailed);
  auto j = nlohmann::json::parse(to_json(ctx, plain));
  EXPECT_EQ(j["verdict"], "not-entailed");
  EXPECT_EQ(j["degree"], "1/2");
  EXPECT_EQ(j["subnormalized"], true);
}

// The analytic necessity of two continuous trapezoids equals the grid value on the closure carrier.
// A vertical edge leaves the infimum unattained, so edges are kept strictly sloped.
TEST(GridAdequacy, AnalyticMatchesCarrier) {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<long> a(4), b(4);
    for (auto& v : a) v = rng() % 21;
    for (auto& v : b) v = rng() % 21;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a[0] == a[1] || a[2] == a[3] || b[0] == b[1] || b[2] == b[3]) continue;
    auto trap = [](const std::vector<long>& v) {
      return "trap(" + std::to_string(v[0]) + ", " + std::to_string(v[1]) + ", " + std::to_string(v[2]) + ", " +
             std::to_string(v[3]) + ")";
    };
    KnowledgeBase kb = parse_kb("sort r = real[0, 20]\nfuzzy A : r = " + trap(a) + "\nfuzzy B : r = " + trap(b) +
                                "\npred p(r~)\n(p(B), 1)\n");
    auto ctx = FiniteContext::build(kb.signature, {clause(kb, "(p(A), 1)"), kb.clauses[0]});
    const auto& fa = kb.signature.fuzzy_set("A");
    const auto& fb = kb.signature.fuzzy_set("B");
    Degree grid = Degree::one(), pos = Degree::zero();
    for (const auto& u : ctx.carrier("r")) {
      grid = min(grid, max(fb.membership(u).complement(), fa.membership(u)));
      pos = max(pos, min(fa.membership(u), fb.membership(u)));
    }
    EXPECT_EQ(necessity(fa, fb), grid) << trap(a) << " " << trap(b);
    EXPECT_EQ(possibility(fa, fb), pos) << trap(a) << " " << trap(b);
  }
}

TEST(Axioms, HoldOnRandomDistributions) {
  std::mt19937 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng() % 4;
    auto deg = [&] { return Degree(static_cast<long>(rng() % 9), 8); };
    std::vector<Degree> pi(n), a(n), b(n), crisp(n);
    for (std::size_t i = 0; i < n; ++i) {
      pi[i] = deg();
      a[i] = deg();
      b[i] = deg();
      crisp[i] = Degree(static_cast<long>(rng() % 2));
    }
    pi[rng() % n] = Degree(1);
    EXPECT_TRUE(check_necessity_axioms(pi, a, b, crisp, deg()).all());
  }
  EXPECT_EQ(necessity_over({Degree(1), Degree(1, 2)}, {Degree(1, 4), Degree(1)}), Degree(1, 4));
}

}  // namespace
}  // namespace plfc

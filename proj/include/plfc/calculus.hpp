#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "plfc/language.hpp"
#include "plfc/substitution.hpp"

namespace plfc {

/// Flattens nested min/max, folds constants, drops duplicates and absorbed arguments, and sorts
/// arguments canonically.
WeightExpr normalize(const WeightExpr& w);

/// Crisp set denoted by a ground imprecise term (declared crisp constant, cut or support).
/// Throws EvaluationError when a cut level still holds variables.
CrispSet term_set(const Term& t, const Signature& sig);

/// Maximal partial evaluation of a weight.
///
/// Leaves on precise constants become memberships; leaves on ground imprecise terms become N(A | S),
/// one leaf at a time. Variables listed in `inf_over` are bound to imprecise terms and are quantified
/// away jointly: every clause of the weight's conjunctive form yields N(max of the sets on x | S_x)
/// per variable, i.e. N(f | min(S_1, ..., S_n)). Cut levels are evaluated the same way.
WeightExpr eval_weight(const WeightExpr& w, const Signature& sig, const std::map<std::string, Term>& inf_over = {});

/// Exact value of a ground weight. Throws EvaluationError if variables remain.
Degree evaluate(const WeightExpr& w, const Signature& sig);

/// Upper bound of the weight over every grounding of its variables.
Degree weight_sup(const WeightExpr& w, const Signature& sig);

/// Evaluates cut levels inside the base, drops repeated literals and evaluates the weight.
Clause canonical(const Clause& c, const Signature& sig);

// Rules ------------------------------------------------------------------------

struct Resolvent {
  Clause clause;
  Substitution theta;
};

/// Resolution of literal `l1` of `c1` against literal `l2` of `c2` (opposite signs, same predicate).
/// The clauses must be standardized apart. Nothing when the literals have no mgs.
std::optional<Resolvent> resolve_gr(const Clause& c1, std::size_t l1, const Clause& c2, std::size_t l2,
                                    const Signature& sig);

/// Variables of the weight that are absent from the base.
std::set<std::string> fusion_vars(const Clause& c);

/// Eliminates weight-only variables by the supremum of the weight over their sorts.
Clause fuse_fr(const Clause& c, const Signature& sig);

/// (base(c2), max(f1 theta, f2)) when c1 is a variant of c2 under theta.
std::optional<Clause> merge_gm(const Clause& c1, const Clause& c2);

/// Rewrites every fuzzy-constant argument A as [A @ w], w the clause weight.
Clause equivalent_transform(const Clause& c);

bool has_fuzzy_terms(const Clause& c);

}  // namespace plfc

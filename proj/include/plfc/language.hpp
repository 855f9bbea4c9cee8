#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "plfc/fuzzy_set.hpp"

namespace plfc {

struct WeightExpr;
using WeightPtr = std::shared_ptr<const WeightExpr>;

struct Term {
  enum class Kind {
    Variable,
    Precise,
    Imprecise,  // declared constant whose meaning is a crisp set
    Fuzzy,      // declared constant whose meaning is a non-crisp fuzzy set
    Cut,        // [A @ level]
    Support,    // [A>0]
  };

  Kind kind = Kind::Variable;
  std::string name;  // variable, constant or fuzzy-constant name; the printed form of a precise value
  std::string sort;
  DomainValue value;  // Precise only
  WeightPtr level;    // Cut only

  static Term variable(std::string name, std::string sort);
  static Term precise(std::string name, std::string sort, DomainValue value);
  static Term imprecise(std::string name, std::string sort);
  static Term fuzzy(std::string name, std::string sort);
  static Term cut(std::string fuzzy_name, std::string sort, WeightPtr level);
  static Term support(std::string fuzzy_name, std::string sort);

  bool is_variable() const { return kind == Kind::Variable; }
  bool is_precise() const { return kind == Kind::Precise; }
  /// Imprecise non-fuzzy constants: declared crisp constants, cuts and supports.
  bool is_crisp_constant() const {
    return kind == Kind::Imprecise || kind == Kind::Cut || kind == Kind::Support;
  }
  bool is_constant() const { return !is_variable(); }
};

/// Precise constants compare by interpreted value; everything else structurally.
bool operator==(const Term& a, const Term& b);

struct WeightExpr {
  enum class Kind { Const, Mem, Min, Max };

  Kind kind = Kind::Const;
  Degree value;                 // Const
  std::string fuzzy;            // Mem: the fuzzy set applied
  Term arg;                     // Mem: its argument
  std::vector<WeightExpr> args; // Min / Max

  static WeightExpr constant(Degree d);
  static WeightExpr mem(std::string fuzzy, Term arg);
  static WeightExpr min(std::vector<WeightExpr> args);
  static WeightExpr max(std::vector<WeightExpr> args);

  bool is_const() const { return kind == Kind::Const; }
};

bool operator==(const WeightExpr& a, const WeightExpr& b);

struct Literal {
  bool positive = true;
  std::string predicate;
  std::vector<Term> args;

  Literal negated() const { return Literal{!positive, predicate, args}; }
  friend bool operator==(const Literal&, const Literal&) = default;
};

/// A weighted base clause (disjunction of literals, weight). Empty `literals` is the empty clause.
struct Clause {
  std::vector<Literal> literals;
  WeightExpr weight;

  bool is_empty() const { return literals.empty(); }
  friend bool operator==(const Clause&, const Clause&) = default;
};

struct SortDecl {
  std::string name;
  DomainPtr domain;
};

struct ConstantDecl {
  std::string name;
  std::string sort;
  DomainValue value;
};

struct FuzzyDecl {
  std::string name;
  std::string sort;
  FuzzySetPtr set;
};

struct PredicateDecl {
  std::string name;
  std::vector<std::string> sorts;
  std::vector<bool> extended;  // position accepts fuzzy / imprecise terms

  std::size_t arity() const { return sorts.size(); }
};

/// Sorts, constants with their meaning, and predicate types: the single context (U, m) of a KB.
class Signature {
 public:
  void add_sort(SortDecl s);
  void add_constant(ConstantDecl c);
  void add_fuzzy(FuzzyDecl f);
  void add_predicate(PredicateDecl p);

  const SortDecl* sort(std::string_view name) const;
  const ConstantDecl* constant(std::string_view name) const;
  const FuzzyDecl* fuzzy(std::string_view name) const;
  const PredicateDecl* predicate(std::string_view name) const;

  const std::vector<SortDecl>& sorts() const { return sorts_; }
  const std::vector<ConstantDecl>& constants() const { return constants_; }
  const std::vector<FuzzyDecl>& fuzzies() const { return fuzzies_; }
  const std::vector<PredicateDecl>& predicates() const { return predicates_; }

  const DomainPtr& domain_of(std::string_view sort) const;
  const FuzzySet& fuzzy_set(std::string_view name) const;

  /// A precise-constant term for `value` of `sort`, using a declared alias name when one exists.
  Term precise_term(const std::string& sort, const DomainValue& value) const;

  /// Declared named constants and every symbol of finite sorts, per sort.
  std::vector<DomainValue> finite_pool(std::string_view sort) const;

  friend bool operator==(const Signature& a, const Signature& b);

 private:
  std::vector<SortDecl> sorts_;
  std::vector<ConstantDecl> constants_;
  std::vector<FuzzyDecl> fuzzies_;
  std::vector<PredicateDecl> predicates_;
};

struct KnowledgeBase {
  Signature signature;
  std::vector<Clause> clauses;
};

struct Diagnostic {
  static constexpr std::size_t kSignature = static_cast<std::size_t>(-1);
  std::size_t clause = kSignature;
  std::string message;
};

std::vector<Diagnostic> well_formed(const KnowledgeBase& kb);
/// `strict` additionally rejects imprecise terms at basic-sort positions; derived clauses may hold
/// them there after substitution.
std::vector<std::string> check_clause(const Clause& c, const Signature& sig, bool strict = true);

// Variables ------------------------------------------------------------------

/// Variables of a term, including those inside a cut level.
void collect_vars(const Term& t, std::set<std::string>& out);
void collect_vars(const WeightExpr& w, std::set<std::string>& out);
void collect_vars(const Literal& l, std::set<std::string>& out);
std::set<std::string> base_vars(const Clause& c);
std::set<std::string> weight_vars(const Clause& c);
std::set<std::string> vars(const Clause& c);
/// Sort of every variable of the clause (read off the stored terms).
std::map<std::string, std::string> variable_sorts(const Clause& c);

bool is_ground(const Term& t);
bool is_ground(const WeightExpr& w);

/// Replaces variables by terms; variables absent from `f`'s answer stay.
using TermMap = std::function<std::optional<Term>(const Term& variable)>;
Term map_vars(const Term& t, const TermMap& f);
WeightExpr map_vars(const WeightExpr& w, const TermMap& f);
Literal map_vars(const Literal& l, const TermMap& f);
Clause map_vars(const Clause& c, const TermMap& f);

/// All instances obtained by replacing every free variable by a precise constant of its sort.
/// `pools` overrides the per-sort constant pool; sorts without a pool must be finite.
std::vector<Clause> ground_instances(const Clause& c, const Signature& sig,
                                     const std::map<std::string, std::vector<DomainValue>>& pools = {});

// Printing -------------------------------------------------------------------

std::string to_string(const Term& t);
std::string to_string(const WeightExpr& w);
std::string to_string(const Literal& l);
std::string to_string(const Clause& c);

}  // namespace plfc

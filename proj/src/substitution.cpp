#include "plfc/substitution.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "plfc/error.hpp"

namespace plfc {

void Substitution::bind(const std::string& var, Term t) {
  if (t.kind == Term::Kind::Fuzzy) throw Error("fuzzy constant '" + t.name + "' is not a substitution term");
  if (t.is_variable() && t.name == var) return;
  if (lookup(var)) throw Error("variable '" + var + "' bound twice");
  bindings_.emplace_back(var, std::move(t));
}

const Term* Substitution::lookup(const std::string& var) const {
  for (const auto& [v, t] : bindings_)
    if (v == var) return &t;
  return nullptr;
}

namespace {

TermMap as_map(const Substitution& s) {
  return [&s](const Term& v) -> std::optional<Term> {
    if (const Term* t = s.lookup(v.name)) return *t;
    return std::nullopt;
  };
}

}  // namespace

Term apply(const Substitution& s, const Term& t) { return map_vars(t, as_map(s)); }
WeightExpr apply(const Substitution& s, const WeightExpr& w) { return map_vars(w, as_map(s)); }
Literal apply(const Substitution& s, const Literal& l) { return map_vars(l, as_map(s)); }
Clause apply(const Substitution& s, const Clause& c) { return map_vars(c, as_map(s)); }

Substitution compose(const Substitution& theta, const Substitution& eta) {
  Substitution out;
  for (const auto& [x, t] : theta.bindings()) {
    Term te = apply(eta, t);
    if (te.is_variable() && te.name == x) continue;
    out.bind(x, std::move(te));
  }
  for (const auto& [y, s] : eta.bindings())
    if (!theta.lookup(y)) out.bind(y, s);
  return out;
}

// ---------------------------------------------------------------------------
// Variants

namespace {

struct Renaming {
  std::map<std::string, std::string> forward;
  std::set<std::string> used;

  bool bind(const std::string& a, const std::string& b) {
    auto it = forward.find(a);
    if (it != forward.end()) return it->second == b;
    if (used.count(b)) return false;
    forward.emplace(a, b);
    used.insert(b);
    return true;
  }
};

bool match(const WeightExpr& a, const WeightExpr& b, Renaming& r);

bool match(const Term& a, const Term& b, Renaming& r) {
  if (a.is_variable() || b.is_variable())
    return a.is_variable() && b.is_variable() && a.sort == b.sort && r.bind(a.name, b.name);
  if (a.kind == Term::Kind::Cut) {
    return b.kind == Term::Kind::Cut && a.name == b.name && a.sort == b.sort && match(*a.level, *b.level, r);
  }
  return a == b;
}

bool match(const WeightExpr& a, const WeightExpr& b, Renaming& r) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case WeightExpr::Kind::Const:
      return a.value == b.value;
    case WeightExpr::Kind::Mem:
      return a.fuzzy == b.fuzzy && match(a.arg, b.arg, r);
    default:
      if (a.args.size() != b.args.size()) return false;
      for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!match(a.args[i], b.args[i], r)) return false;
      return true;
  }
}

bool match(const Literal& a, const Literal& b, Renaming& r) {
  if (a.positive != b.positive || a.predicate != b.predicate || a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!match(a.args[i], b.args[i], r)) return false;
  return true;
}

bool match_literals(const std::vector<Literal>& a, const std::vector<Literal>& b, std::size_t i,
                    std::vector<bool>& taken, Renaming& r) {
  if (i == a.size()) return true;
  for (std::size_t j = 0; j < b.size(); ++j) {
    if (taken[j]) continue;
    Renaming attempt = r;
    if (!match(a[i], b[j], attempt)) continue;
    taken[j] = true;
    if (match_literals(a, b, i + 1, taken, attempt)) {
      r = std::move(attempt);
      return true;
    }
    taken[j] = false;
  }
  return false;
}

}  // namespace

std::optional<Substitution> variant_renaming(const Clause& c1, const Clause& c2) {
  if (c1.literals.size() != c2.literals.size()) return std::nullopt;
  Renaming r;
  std::vector<bool> taken(c2.literals.size(), false);
  if (!match_literals(c1.literals, c2.literals, 0, taken, r)) return std::nullopt;
  // A variable of c1 outside the renaming's domain must not appear in its range.
  for (const auto& v : vars(c1))
    if (!r.forward.count(v) && r.used.count(v)) return std::nullopt;
  auto sorts = variable_sorts(c1);
  Substitution out;
  for (const auto& [a, b] : r.forward) out.bind(a, Term::variable(b, sorts.at(a)));
  return out;
}

// ---------------------------------------------------------------------------
// Most general substitution

namespace {

bool occurs(const std::string& var, const Term& t) {
  std::set<std::string> v;
  collect_vars(t, v);
  return v.count(var) > 0;
}

}  // namespace

std::optional<Substitution> mgs(const Literal& l1, const Literal& l2) {
  if (l1.predicate != l2.predicate || l1.positive == l2.positive || l1.args.size() != l2.args.size())
    return std::nullopt;
  std::vector<std::pair<Term, Term>> set;
  for (std::size_t i = 0; i < l1.args.size(); ++i) {
    if (l1.args[i].kind == Term::Kind::Fuzzy || l2.args[i].kind == Term::Kind::Fuzzy) return std::nullopt;
    set.emplace_back(l1.args[i], l2.args[i]);
  }

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < set.size() && !changed; ++i) {
      auto& [s, t] = set[i];
      if (s.is_constant() && t.is_constant()) {
        if (!(s.is_precise() && t.is_precise() && s.value == t.value)) return std::nullopt;
        set.erase(set.begin() + static_cast<long>(i));
        changed = true;
      } else if (s.is_constant()) {
        std::swap(s, t);
        changed = true;
      } else if (t.is_variable() && s.name == t.name) {
        set.erase(set.begin() + static_cast<long>(i));
        changed = true;
      } else {
        bool elsewhere = occurs(s.name, t);
        for (std::size_t j = 0; j < set.size() && !elsewhere; ++j)
          if (j != i) elsewhere = occurs(s.name, set[j].first) || occurs(s.name, set[j].second);
        if (!elsewhere) continue;
        if (occurs(s.name, t)) return std::nullopt;
        Substitution step;
        step.bind(s.name, t);
        for (std::size_t j = 0; j < set.size(); ++j) {
          if (j == i) continue;
          set[j].first = apply(step, set[j].first);
          set[j].second = apply(step, set[j].second);
        }
        changed = true;
      }
    }
  }

  Substitution out;
  for (auto& [s, t] : set) out.bind(s.name, std::move(t));

  // Imprecise arguments may only come from one literal and only bind variables of the other.
  auto imprecise = [](const Term& t) { return t.is_constant() && !t.is_precise(); };
  auto owns_imprecise = [&](const Literal& l) {
    return std::any_of(l.args.begin(), l.args.end(), imprecise);
  };
  bool left = owns_imprecise(l1), right = owns_imprecise(l2);
  if (left && right) return std::nullopt;
  if (left || right) {
    const Literal& owner = left ? l1 : l2;
    for (const auto& a : owner.args) {
      if (!a.is_variable()) continue;
      const Term* b = out.lookup(a.name);
      if (b && imprecise(*b)) return std::nullopt;
    }
  }
  return out;
}

std::string to_string(const Substitution& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& [v, t] : s.bindings()) {
    out += (first ? "" : ", ") + v + "/" + to_string(t);
    first = false;
  }
  return out + "}";
}

}  // namespace plfc

#include "plfc/language.hpp"

#include <algorithm>

#include "plfc/error.hpp"

namespace plfc {

// ---------------------------------------------------------------------------
// Terms and weights

Term Term::variable(std::string name, std::string sort) {
  Term t;
  t.kind = Kind::Variable;
  t.name = std::move(name);
  t.sort = std::move(sort);
  return t;
}

Term Term::precise(std::string name, std::string sort, DomainValue value) {
  Term t;
  t.kind = Kind::Precise;
  t.name = std::move(name);
  t.sort = std::move(sort);
  t.value = std::move(value);
  return t;
}

Term Term::imprecise(std::string name, std::string sort) {
  Term t;
  t.kind = Kind::Imprecise;
  t.name = std::move(name);
  t.sort = std::move(sort);
  return t;
}

Term Term::fuzzy(std::string name, std::string sort) {
  Term t;
  t.kind = Kind::Fuzzy;
  t.name = std::move(name);
  t.sort = std::move(sort);
  return t;
}

Term Term::cut(std::string fuzzy_name, std::string sort, WeightPtr level) {
  Term t;
  t.kind = Kind::Cut;
  t.name = std::move(fuzzy_name);
  t.sort = std::move(sort);
  t.level = std::move(level);
  return t;
}

Term Term::support(std::string fuzzy_name, std::string sort) {
  Term t;
  t.kind = Kind::Support;
  t.name = std::move(fuzzy_name);
  t.sort = std::move(sort);
  return t;
}

bool operator==(const Term& a, const Term& b) {
  if (a.kind != b.kind || a.sort != b.sort) return false;
  switch (a.kind) {
    case Term::Kind::Precise:
      return a.value == b.value;
    case Term::Kind::Cut:
      return a.name == b.name && *a.level == *b.level;
    default:
      return a.name == b.name;
  }
}

WeightExpr WeightExpr::constant(Degree d) {
  WeightExpr w;
  w.kind = Kind::Const;
  w.value = d;
  return w;
}

WeightExpr WeightExpr::mem(std::string fuzzy, Term arg) {
  WeightExpr w;
  w.kind = Kind::Mem;
  w.fuzzy = std::move(fuzzy);
  w.arg = std::move(arg);
  return w;
}

WeightExpr WeightExpr::min(std::vector<WeightExpr> args) {
  WeightExpr w;
  w.kind = Kind::Min;
  w.args = std::move(args);
  return w;
}

WeightExpr WeightExpr::max(std::vector<WeightExpr> args) {
  WeightExpr w;
  w.kind = Kind::Max;
  w.args = std::move(args);
  return w;
}

bool operator==(const WeightExpr& a, const WeightExpr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case WeightExpr::Kind::Const:
      return a.value == b.value;
    case WeightExpr::Kind::Mem:
      return a.fuzzy == b.fuzzy && a.arg == b.arg;
    default:
      return a.args == b.args;
  }
}

// ---------------------------------------------------------------------------
// Signature

void Signature::add_sort(SortDecl s) { sorts_.push_back(std::move(s)); }
void Signature::add_constant(ConstantDecl c) { constants_.push_back(std::move(c)); }
void Signature::add_fuzzy(FuzzyDecl f) { fuzzies_.push_back(std::move(f)); }
void Signature::add_predicate(PredicateDecl p) { predicates_.push_back(std::move(p)); }

namespace {

template <typename T>
const T* find_named(const std::vector<T>& v, std::string_view name) {
  for (const auto& x : v)
    if (x.name == name) return &x;
  return nullptr;
}

}  // namespace

const SortDecl* Signature::sort(std::string_view name) const { return find_named(sorts_, name); }
const ConstantDecl* Signature::constant(std::string_view name) const { return find_named(constants_, name); }
const FuzzyDecl* Signature::fuzzy(std::string_view name) const { return find_named(fuzzies_, name); }
const PredicateDecl* Signature::predicate(std::string_view name) const { return find_named(predicates_, name); }

const DomainPtr& Signature::domain_of(std::string_view sort_name) const {
  const auto* s = sort(sort_name);
  if (!s) throw DomainError("unknown sort '" + std::string(sort_name) + "'");
  return s->domain;
}

const FuzzySet& Signature::fuzzy_set(std::string_view name) const {
  const auto* f = fuzzy(name);
  if (!f) throw DomainError("unknown fuzzy constant '" + std::string(name) + "'");
  return *f->set;
}

Term Signature::precise_term(const std::string& sort_name, const DomainValue& value) const {
  for (const auto& c : constants_)
    if (c.sort == sort_name && c.value == value) return Term::precise(c.name, sort_name, value);
  return Term::precise(to_string(value), sort_name, value);
}

std::vector<DomainValue> Signature::finite_pool(std::string_view sort_name) const {
  const auto& d = domain_of(sort_name);
  if (!d->is_finite())
    throw EnumerationError("sort '" + std::string(sort_name) + "' is a real interval and has no finite constant pool");
  std::vector<DomainValue> pool;
  for (const auto& s : d->symbols()) pool.emplace_back(s);
  return pool;
}

bool operator==(const Signature& a, const Signature& b) {
  if (a.sorts_.size() != b.sorts_.size() || a.constants_.size() != b.constants_.size() ||
      a.fuzzies_.size() != b.fuzzies_.size() || a.predicates_.size() != b.predicates_.size())
    return false;
  for (std::size_t i = 0; i < a.sorts_.size(); ++i)
    if (a.sorts_[i].name != b.sorts_[i].name || !(*a.sorts_[i].domain == *b.sorts_[i].domain)) return false;
  for (std::size_t i = 0; i < a.constants_.size(); ++i) {
    const auto &x = a.constants_[i], &y = b.constants_[i];
    if (x.name != y.name || x.sort != y.sort || x.value != y.value) return false;
  }
  for (std::size_t i = 0; i < a.fuzzies_.size(); ++i) {
    const auto &x = a.fuzzies_[i], &y = b.fuzzies_[i];
    if (x.name != y.name || x.sort != y.sort || !(*x.set == *y.set)) return false;
  }
  for (std::size_t i = 0; i < a.predicates_.size(); ++i) {
    const auto &x = a.predicates_[i], &y = b.predicates_[i];
    if (x.name != y.name || x.sorts != y.sorts || x.extended != y.extended) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Well-formedness

namespace {

struct ClauseChecker {
  const Signature& sig;
  std::vector<std::string>& out;
  bool strict = true;
  std::map<std::string, std::string> var_sorts;

  void note_var(const Term& t) {
    auto [it, fresh] = var_sorts.emplace(t.name, t.sort);
    if (!fresh && it->second != t.sort)
      out.push_back("variable '" + t.name + "' used with sorts '" + it->second + "' and '" + t.sort + "'");
  }

  const FuzzyDecl* fuzzy_named(const std::string& name, const std::string& sort) {
    const auto* f = sig.fuzzy(name);
    if (!f) {
      out.push_back("unknown fuzzy constant '" + name + "'");
      return nullptr;
    }
    if (f->sort != sort) out.push_back("fuzzy constant '" + name + "' has sort '" + f->sort + "', not '" + sort + "'");
    return f;
  }

  void term(const Term& t, bool extended_position) {
    if (!sig.sort(t.sort)) {
      out.push_back("term '" + to_string(t) + "' has unknown sort '" + t.sort + "'");
      return;
    }
    switch (t.kind) {
      case Term::Kind::Variable:
        note_var(t);
        return;
      case Term::Kind::Precise:
        if (!sig.domain_of(t.sort)->contains(t.value))
          out.push_back("value " + to_string(t.value) + " outside sort '" + t.sort + "'");
        return;
      default:
        break;
    }
    if (strict && !extended_position)
      out.push_back("imprecise term '" + to_string(t) + "' at a basic-sort position");
    const auto* f = fuzzy_named(t.name, t.sort);
    if (!f) return;
    if (t.kind == Term::Kind::Fuzzy || t.kind == Term::Kind::Imprecise) {
      if (!f->set->is_normalized()) out.push_back("fuzzy constant '" + t.name + "' is not normalized");
      if ((t.kind == Term::Kind::Imprecise) != f->set->is_crisp())
        out.push_back("constant '" + t.name + "' used with the wrong crispness");
    }
    if (t.kind == Term::Kind::Cut) weight(*t.level);
  }

  void weight(const WeightExpr& w) {
    switch (w.kind) {
      case WeightExpr::Kind::Const:
        return;
      case WeightExpr::Kind::Mem: {
        if (!sig.fuzzy(w.fuzzy)) {
          out.push_back("unknown fuzzy set '" + w.fuzzy + "' in weight");
          return;
        }
        const auto& f = *sig.fuzzy(w.fuzzy);
        if (f.sort != w.arg.sort)
          out.push_back("weight '" + to_string(w) + "' applies a set of sort '" + f.sort + "' to a term of sort '" +
                        w.arg.sort + "'");
        if (w.arg.kind == Term::Kind::Fuzzy) out.push_back("weight argument cannot be a fuzzy constant");
        term(w.arg, true);
        return;
      }
      default:
        if (w.args.empty()) out.push_back("empty min/max in weight");
        for (const auto& a : w.args) weight(a);
    }
  }

  void literal(const Literal& l) {
    const auto* p = sig.predicate(l.predicate);
    if (!p) {
      out.push_back("unknown predicate '" + l.predicate + "'");
      return;
    }
    if (p->arity() != l.args.size()) {
      out.push_back("predicate '" + l.predicate + "' expects " + std::to_string(p->arity()) + " arguments, got " +
                    std::to_string(l.args.size()));
      return;
    }
    for (std::size_t i = 0; i < l.args.size(); ++i) {
      if (l.args[i].sort != p->sorts[i])
        out.push_back("argument " + std::to_string(i + 1) + " of '" + l.predicate + "' must have sort '" +
                      p->sorts[i] + "', got '" + l.args[i].sort + "'");
      term(l.args[i], p->extended[i]);
    }
  }
};

}  // namespace

std::vector<std::string> check_clause(const Clause& c, const Signature& sig, bool strict) {
  std::vector<std::string> out;
  ClauseChecker ck{sig, out, strict, {}};
  for (const auto& l : c.literals) ck.literal(l);
  ck.weight(c.weight);
  return out;
}

std::vector<Diagnostic> well_formed(const KnowledgeBase& kb) {
  std::vector<Diagnostic> out;
  const auto& sig = kb.signature;
  auto report = [&](std::string msg) { out.push_back({Diagnostic::kSignature, std::move(msg)}); };

  std::set<std::string> names;
  auto unique = [&](const std::string& n) {
    if (!names.insert(n).second) report("name '" + n + "' declared twice");
  };
  std::set<std::string> sort_names;
  for (const auto& s : sig.sorts())
    if (!sort_names.insert(s.name).second) report("sort '" + s.name + "' declared twice");
  for (const auto& c : sig.constants()) {
    unique(c.name);
    if (!sig.sort(c.sort)) {
      report("constant '" + c.name + "' has unknown sort '" + c.sort + "'");
      continue;
    }
    if (!sig.domain_of(c.sort)->contains(c.value))
      report("constant '" + c.name + "' value outside sort '" + c.sort + "'");
  }
  for (std::size_t i = 0; i < sig.constants().size(); ++i)
    for (std::size_t j = i + 1; j < sig.constants().size(); ++j) {
      const auto &a = sig.constants()[i], &b = sig.constants()[j];
      if (a.sort == b.sort && a.value == b.value)
        report("constants '" + a.name + "' and '" + b.name + "' denote the same element");
    }
  for (const auto& f : sig.fuzzies()) {
    unique(f.name);
    const auto* s = sig.sort(f.sort);
    if (!s)
      report("fuzzy constant '" + f.name + "' has unknown sort '" + f.sort + "'");
    else if (!(*s->domain == *f.set->domain()))
      report("fuzzy constant '" + f.name + "' is not defined on sort '" + f.sort + "'");
  }
  std::set<std::string> preds;
  for (const auto& p : sig.predicates()) {
    if (!preds.insert(p.name).second) report("predicate '" + p.name + "' declared twice");
    for (const auto& s : p.sorts)
      if (!sig.sort(s)) report("predicate '" + p.name + "' uses unknown sort '" + s + "'");
  }
  for (std::size_t i = 0; i < kb.clauses.size(); ++i)
    for (auto& m : check_clause(kb.clauses[i], sig)) out.push_back({i, std::move(m)});
  return out;
}

// ---------------------------------------------------------------------------
// Variables

void collect_vars(const Term& t, std::set<std::string>& out) {
  if (t.is_variable()) out.insert(t.name);
  if (t.kind == Term::Kind::Cut) collect_vars(*t.level, out);
}

void collect_vars(const WeightExpr& w, std::set<std::string>& out) {
  if (w.kind == WeightExpr::Kind::Mem) collect_vars(w.arg, out);
  for (const auto& a : w.args) collect_vars(a, out);
}

void collect_vars(const Literal& l, std::set<std::string>& out) {
  for (const auto& t : l.args) collect_vars(t, out);
}

std::set<std::string> base_vars(const Clause& c) {
  std::set<std::string> out;
  for (const auto& l : c.literals) collect_vars(l, out);
  return out;
}

std::set<std::string> weight_vars(const Clause& c) {
  std::set<std::string> out;
  collect_vars(c.weight, out);
  return out;
}

std::set<std::string> vars(const Clause& c) {
  auto out = base_vars(c);
  collect_vars(c.weight, out);
  return out;
}

namespace {

void sorts_of(const Term& t, std::map<std::string, std::string>& out);

void sorts_of(const WeightExpr& w, std::map<std::string, std::string>& out) {
  if (w.kind == WeightExpr::Kind::Mem) sorts_of(w.arg, out);
  for (const auto& a : w.args) sorts_of(a, out);
}

void sorts_of(const Term& t, std::map<std::string, std::string>& out) {
  if (t.is_variable()) out.emplace(t.name, t.sort);
  if (t.kind == Term::Kind::Cut) sorts_of(*t.level, out);
}

}  // namespace

std::map<std::string, std::string> variable_sorts(const Clause& c) {
  std::map<std::string, std::string> out;
  for (const auto& l : c.literals)
    for (const auto& t : l.args) sorts_of(t, out);
  sorts_of(c.weight, out);
  return out;
}

bool is_ground(const Term& t) {
  std::set<std::string> v;
  collect_vars(t, v);
  return v.empty();
}

bool is_ground(const WeightExpr& w) {
  std::set<std::string> v;
  collect_vars(w, v);
  return v.empty();
}

Term map_vars(const Term& t, const TermMap& f) {
  if (t.is_variable()) {
    if (auto r = f(t)) return *r;
    return t;
  }
  if (t.kind == Term::Kind::Cut) {
    Term out = t;
    out.level = std::make_shared<const WeightExpr>(map_vars(*t.level, f));
    return out;
  }
  return t;
}

WeightExpr map_vars(const WeightExpr& w, const TermMap& f) {
  switch (w.kind) {
    case WeightExpr::Kind::Const:
      return w;
    case WeightExpr::Kind::Mem:
      return WeightExpr::mem(w.fuzzy, map_vars(w.arg, f));
    default: {
      WeightExpr out = w;
      for (auto& a : out.args) a = map_vars(a, f);
      return out;
    }
  }
}

Literal map_vars(const Literal& l, const TermMap& f) {
  Literal out = l;
  for (auto& t : out.args) t = map_vars(t, f);
  return out;
}

Clause map_vars(const Clause& c, const TermMap& f) {
  Clause out;
  for (const auto& l : c.literals) out.literals.push_back(map_vars(l, f));
  out.weight = map_vars(c.weight, f);
  return out;
}

std::vector<Clause> ground_instances(const Clause& c, const Signature& sig,
                                     const std::map<std::string, std::vector<DomainValue>>& pools) {
  auto sorts = variable_sorts(c);
  std::vector<std::string> names;
  std::vector<std::vector<DomainValue>> choices;
  for (const auto& [v, s] : sorts) {
    names.push_back(v);
    auto it = pools.find(s);
    choices.push_back(it != pools.end() ? it->second : sig.finite_pool(s));
    if (choices.back().empty())
      throw EnumerationError("variable '" + v + "' ranges over an empty constant pool of sort '" + s + "'");
  }
  std::vector<Clause> out;
  std::vector<std::size_t> idx(names.size(), 0);
  while (true) {
    std::map<std::string, Term> binding;
    for (std::size_t i = 0; i < names.size(); ++i)
      binding.emplace(names[i], sig.precise_term(sorts.at(names[i]), choices[i][idx[i]]));
    out.push_back(map_vars(c, [&](const Term& v) -> std::optional<Term> {
      auto it = binding.find(v.name);
      if (it == binding.end()) return std::nullopt;
      return it->second;
    }));
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == choices[k].size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Printing

std::string to_string(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Cut:
      return "[" + t.name + " @ " + to_string(*t.level) + "]";
    case Term::Kind::Support:
      return "[" + t.name + ">0]";
    default:
      return t.name;
  }
}

std::string to_string(const WeightExpr& w) {
  switch (w.kind) {
    case WeightExpr::Kind::Const:
      return to_string(w.value);
    case WeightExpr::Kind::Mem:
      return w.fuzzy + "(" + to_string(w.arg) + ")";
    default: {
      std::string out = w.kind == WeightExpr::Kind::Min ? "min(" : "max(";
      for (std::size_t i = 0; i < w.args.size(); ++i) out += (i ? ", " : "") + to_string(w.args[i]);
      return out + ")";
    }
  }
}

std::string to_string(const Literal& l) {
  std::string out = (l.positive ? "" : "~") + l.predicate;
  if (l.args.empty()) return out;
  out += "(";
  for (std::size_t i = 0; i < l.args.size(); ++i) out += (i ? ", " : "") + to_string(l.args[i]);
  return out + ")";
}

std::string to_string(const Clause& c) {
  std::string out = "(";
  if (c.literals.empty()) out += "bot";
  for (std::size_t i = 0; i < c.literals.size(); ++i) out += (i ? " | " : "") + to_string(c.literals[i]);
  return out + ", " + to_string(c.weight) + ")";
}

}  // namespace plfc

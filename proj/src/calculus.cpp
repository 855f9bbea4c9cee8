#include "plfc/calculus.hpp"

#include <algorithm>

#include "plfc/error.hpp"

namespace plfc {

namespace {

// Conjunctive / disjunctive forms larger than this fall back to one-leaf-at-a-time bounds.
constexpr std::size_t kFormCap = 4096;

using Form = std::vector<std::vector<WeightExpr>>;

/// Syntactic lattice order: true only when a <= b under every valuation.
bool leq(const WeightExpr& a, const WeightExpr& b) {
  if (a.is_const() && b.is_const()) return a.value <= b.value;
  if ((a.is_const() && a.value.is_zero()) || (b.is_const() && b.value.is_one())) return true;
  if (b.kind == WeightExpr::Kind::Min)
    return std::all_of(b.args.begin(), b.args.end(), [&](const WeightExpr& e) { return leq(a, e); });
  if (a.kind == WeightExpr::Kind::Max)
    return std::all_of(a.args.begin(), a.args.end(), [&](const WeightExpr& e) { return leq(e, b); });
  if (a.kind == WeightExpr::Kind::Min &&
      std::any_of(a.args.begin(), a.args.end(), [&](const WeightExpr& e) { return leq(e, b); }))
    return true;
  if (b.kind == WeightExpr::Kind::Max &&
      std::any_of(b.args.begin(), b.args.end(), [&](const WeightExpr& e) { return leq(a, e); }))
    return true;
  return a == b;
}

}  // namespace

// ---------------------------------------------------------------------------
// Normal form

WeightExpr normalize(const WeightExpr& w) {
  switch (w.kind) {
    case WeightExpr::Kind::Const:
      return w;
    case WeightExpr::Kind::Mem: {
      if (w.arg.kind != Term::Kind::Cut) return w;
      Term arg = w.arg;
      arg.level = std::make_shared<const WeightExpr>(normalize(*arg.level));
      return WeightExpr::mem(w.fuzzy, std::move(arg));
    }
    default:
      break;
  }
  const bool is_min = w.kind == WeightExpr::Kind::Min;
  std::vector<WeightExpr> flat;
  std::optional<Degree> folded;
  auto absorb = [&](const WeightExpr& e) {
    if (e.is_const()) {
      folded = folded ? (is_min ? min(*folded, e.value) : max(*folded, e.value)) : e.value;
    } else {
      flat.push_back(e);
    }
  };
  for (const auto& a : w.args) {
    WeightExpr n = normalize(a);
    if (n.kind == w.kind) {
      for (const auto& b : n.args) absorb(b);
    } else {
      absorb(n);
    }
  }
  if (folded) {
    if (is_min && folded->is_zero()) return WeightExpr::constant(Degree::zero());
    if (!is_min && folded->is_one()) return WeightExpr::constant(Degree::one());
    bool neutral = is_min ? folded->is_one() : folded->is_zero();
    if (!neutral || flat.empty()) flat.push_back(WeightExpr::constant(*folded));
  }
  if (flat.empty()) return WeightExpr::constant(is_min ? Degree::one() : Degree::zero());
  std::vector<std::pair<std::string, WeightExpr>> keyed;
  for (auto& e : flat) keyed.emplace_back(to_string(e), std::move(e));
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  keyed.erase(std::unique(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first == b.first; }),
              keyed.end());
  // Absorption: in a min drop arguments above another one, in a max those below another one.
  std::vector<WeightExpr> args;
  for (std::size_t i = 0; i < keyed.size(); ++i) {
    const WeightExpr& e = keyed[i].second;
    bool redundant = false;
    for (std::size_t j = 0; j < keyed.size() && !redundant; ++j) {
      if (j == i) continue;
      const WeightExpr& o = keyed[j].second;
      bool dominated = is_min ? leq(o, e) : leq(e, o);
      bool mutual = is_min ? leq(e, o) : leq(o, e);
      redundant = dominated && (!mutual || j < i);
    }
    if (!redundant) args.push_back(e);
  }
  if (args.size() == 1) return args.front();
  return is_min ? WeightExpr::min(std::move(args)) : WeightExpr::max(std::move(args));
}

// ---------------------------------------------------------------------------
// Evaluation

CrispSet term_set(const Term& t, const Signature& sig) {
  switch (t.kind) {
    case Term::Kind::Imprecise:
      return sig.fuzzy_set(t.name);
    case Term::Kind::Support:
      return support(sig.fuzzy_set(t.name));
    case Term::Kind::Cut:
      return alpha_cut(sig.fuzzy_set(t.name), evaluate(*t.level, sig));
    case Term::Kind::Precise:
      return FuzzySet::singleton(sig.domain_of(t.sort), t.value);
    default:
      throw EvaluationError("term '" + to_string(t) + "' does not denote a crisp set");
  }
}

namespace {

bool bound_leaf(const WeightExpr& e, const std::map<std::string, Term>& inf_over) {
  return e.kind == WeightExpr::Kind::Mem && e.arg.is_variable() && inf_over.count(e.arg.name);
}

bool mentions_bound(const WeightExpr& w, const std::map<std::string, Term>& inf_over) {
  if (bound_leaf(w, inf_over)) return true;
  for (const auto& a : w.args)
    if (mentions_bound(a, inf_over)) return true;
  return false;
}

std::optional<Form> conjunctive(const WeightExpr& e) {
  switch (e.kind) {
    case WeightExpr::Kind::Min: {
      Form out;
      for (const auto& a : e.args) {
        auto f = conjunctive(a);
        if (!f) return std::nullopt;
        out.insert(out.end(), f->begin(), f->end());
        if (out.size() > kFormCap) return std::nullopt;
      }
      return out;
    }
    case WeightExpr::Kind::Max: {
      Form out{{}};
      for (const auto& a : e.args) {
        auto f = conjunctive(a);
        if (!f || out.size() * f->size() > kFormCap) return std::nullopt;
        Form next;
        for (const auto& x : out)
          for (const auto& y : *f) {
            auto z = x;
            z.insert(z.end(), y.begin(), y.end());
            next.push_back(std::move(z));
          }
        out = std::move(next);
      }
      return out;
    }
    default:
      return Form{{e}};
  }
}

WeightExpr flip(const WeightExpr& x) {
  if (x.kind != WeightExpr::Kind::Min && x.kind != WeightExpr::Kind::Max) return x;
  WeightExpr y = x;
  y.kind = x.kind == WeightExpr::Kind::Min ? WeightExpr::Kind::Max : WeightExpr::Kind::Min;
  for (auto& c : y.args) c = flip(c);
  return y;
}

// Max of mins: the conjunctive form of the dual expression.
std::optional<Form> disjunctive(const WeightExpr& e) { return conjunctive(flip(e)); }

class Evaluator {
 public:
  Evaluator(const Signature& sig, const std::map<std::string, Term>& inf_over) : sig_(sig), inf_over_(inf_over) {}

  WeightExpr run(const WeightExpr& w) {
    WeightExpr e = normalize(leaves(w));
    if (inf_over_.empty() || !mentions_bound(e, inf_over_)) return e;
    if (auto cnf = conjunctive(e)) return normalize(quantify(*cnf));
    return normalize(per_leaf(e));
  }

 private:
  const Signature& sig_;
  const std::map<std::string, Term>& inf_over_;

  // Evaluates a cut level, reading bound variables inside it as their imprecise terms.
  WeightExpr level(const WeightExpr& lv) {
    WeightExpr substituted = map_vars(lv, [&](const Term& v) -> std::optional<Term> {
      auto it = inf_over_.find(v.name);
      if (it == inf_over_.end()) return std::nullopt;
      return it->second;
    });
    static const std::map<std::string, Term> none;
    return Evaluator(sig_, none).run(substituted);
  }

  WeightExpr leaves(const WeightExpr& w) {
    switch (w.kind) {
      case WeightExpr::Kind::Const:
        return w;
      case WeightExpr::Kind::Mem:
        return leaf(w);
      default: {
        WeightExpr out = w;
        for (auto& a : out.args) a = leaves(a);
        return out;
      }
    }
  }

  WeightExpr leaf(const WeightExpr& w) {
    const FuzzySet& a = sig_.fuzzy_set(w.fuzzy);
    const Term& t = w.arg;
    switch (t.kind) {
      case Term::Kind::Variable:
        return w;
      case Term::Kind::Precise:
        return WeightExpr::constant(a.membership(t.value));
      case Term::Kind::Imprecise:
      case Term::Kind::Support:
        return WeightExpr::constant(necessity(a, term_set(t, sig_)));
      case Term::Kind::Cut: {
        Term cut = t;
        cut.level = std::make_shared<const WeightExpr>(level(*t.level));
        if (cut.level->is_const()) return WeightExpr::constant(necessity(a, term_set(cut, sig_)));
        return WeightExpr::mem(w.fuzzy, std::move(cut));
      }
      case Term::Kind::Fuzzy:
        break;
    }
    throw EvaluationError("fuzzy constant '" + t.name + "' cannot be a weight argument");
  }

  const CrispSet& set_of(const std::string& var) {
    auto it = sets_.find(var);
    if (it == sets_.end()) it = sets_.emplace(var, term_set(inf_over_.at(var), sig_)).first;
    return it->second;
  }
  std::map<std::string, CrispSet> sets_;

  WeightExpr quantify(const Form& cnf) {
    std::vector<WeightExpr> clauses;
    for (const auto& disjuncts : cnf) {
      std::map<std::string, std::vector<std::string>> groups;
      std::vector<WeightExpr> rest;
      for (const auto& atom : disjuncts) {
        if (bound_leaf(atom, inf_over_)) {
          groups[atom.arg.name].push_back(atom.fuzzy);
        } else {
          rest.push_back(atom);
        }
      }
      for (const auto& [var, names] : groups) {
        FuzzySet f = sig_.fuzzy_set(names.front());
        for (std::size_t i = 1; i < names.size(); ++i) f = max_fs(f, sig_.fuzzy_set(names[i]));
        rest.push_back(WeightExpr::constant(necessity(f, set_of(var))));
      }
      clauses.push_back(WeightExpr::max(std::move(rest)));
    }
    return WeightExpr::min(std::move(clauses));
  }

  // inf max(f, g) >= max(inf f, inf g): quantifying each leaf separately gives a lower bound.
  WeightExpr per_leaf(const WeightExpr& w) {
    if (bound_leaf(w, inf_over_))
      return WeightExpr::constant(necessity(sig_.fuzzy_set(w.fuzzy), set_of(w.arg.name)));
    WeightExpr out = w;
    for (auto& a : out.args) a = per_leaf(a);
    return out;
  }
};

// Replaces leaves on the given variables by their infimum over the sort (a pointwise lower bound),
// inside cut levels as well.
WeightExpr lower_vars(const WeightExpr& w, const std::set<std::string>& vs, const Signature& sig, bool top) {
  switch (w.kind) {
    case WeightExpr::Kind::Const:
      return w;
    case WeightExpr::Kind::Mem: {
      if (top && w.arg.is_variable() && vs.count(w.arg.name))
        return WeightExpr::constant(sig.fuzzy_set(w.fuzzy).infimum());
      if (w.arg.kind == Term::Kind::Cut) {
        Term cut = w.arg;
        cut.level = std::make_shared<const WeightExpr>(lower_vars(*w.arg.level, vs, sig, true));
        return WeightExpr::mem(w.fuzzy, std::move(cut));
      }
      return w;
    }
    default: {
      WeightExpr out = w;
      for (auto& a : out.args) a = lower_vars(a, vs, sig, top);
      return out;
    }
  }
}

}  // namespace

WeightExpr eval_weight(const WeightExpr& w, const Signature& sig, const std::map<std::string, Term>& inf_over) {
  return Evaluator(sig, inf_over).run(w);
}

Degree evaluate(const WeightExpr& w, const Signature& sig) {
  WeightExpr e = eval_weight(w, sig);
  if (!e.is_const()) throw EvaluationError("weight '" + to_string(w) + "' is not ground");
  return e.value;
}

Degree weight_sup(const WeightExpr& w, const Signature& sig) {
  switch (w.kind) {
    case WeightExpr::Kind::Const:
      return w.value;
    case WeightExpr::Kind::Mem: {
      const FuzzySet& a = sig.fuzzy_set(w.fuzzy);
      const Term& t = w.arg;
      if (t.is_variable()) return a.height();
      if (t.is_precise()) return a.membership(t.value);
      if (t.kind == Term::Kind::Cut && !is_ground(*t.level)) {
        // N(A | [C]_l) grows with l.
        Term cut = t;
        cut.level = std::make_shared<const WeightExpr>(WeightExpr::constant(weight_sup(*t.level, sig)));
        return necessity(a, term_set(cut, sig));
      }
      return evaluate(w, sig);
    }
    case WeightExpr::Kind::Min: {
      Degree d = Degree::one();
      for (const auto& a : w.args) d = min(d, weight_sup(a, sig));
      return d;
    }
    case WeightExpr::Kind::Max: {
      Degree d = Degree::zero();
      for (const auto& a : w.args) d = max(d, weight_sup(a, sig));
      return d;
    }
  }
  return Degree::one();
}

Clause canonical(const Clause& c, const Signature& sig) {
  Clause out;
  for (const auto& l : c.literals) {
    Literal m = l;
    for (auto& t : m.args)
      if (t.kind == Term::Kind::Cut) t.level = std::make_shared<const WeightExpr>(eval_weight(*t.level, sig));
    if (std::find(out.literals.begin(), out.literals.end(), m) == out.literals.end()) out.literals.push_back(m);
  }
  out.weight = eval_weight(c.weight, sig);
  return out;
}

// ---------------------------------------------------------------------------
// Rules

std::optional<Resolvent> resolve_gr(const Clause& c1, std::size_t l1, const Clause& c2, std::size_t l2,
                                    const Signature& sig) {
  const Literal& a = c1.literals.at(l1);
  const Literal& b = c2.literals.at(l2);
  if (a.positive == b.positive || a.predicate != b.predicate) return std::nullopt;
  auto theta = a.positive ? mgs(b, a) : mgs(a, b);
  if (!theta) return std::nullopt;

  // Variables bound to ground imprecise constants are quantified away in the weight.
  Substitution rest;
  std::map<std::string, Term> inf_over;
  for (const auto& [v, t] : theta->bindings()) {
    if (t.is_crisp_constant() && is_ground(t)) {
      inf_over.emplace(v, t);
    } else {
      rest.bind(v, t);
    }
  }

  Clause pre;
  for (std::size_t i = 0; i < c1.literals.size(); ++i)
    if (i != l1) pre.literals.push_back(apply(*theta, c1.literals[i]));
  for (std::size_t i = 0; i < c2.literals.size(); ++i)
    if (i != l2) pre.literals.push_back(apply(*theta, c2.literals[i]));
  WeightExpr w = apply(rest, WeightExpr::min({c1.weight, c2.weight}));
  pre.weight = eval_weight(w, sig, inf_over);
  return Resolvent{canonical(pre, sig), *theta};
}

std::set<std::string> fusion_vars(const Clause& c) {
  auto base = base_vars(c);
  std::set<std::string> out;
  for (const auto& v : weight_vars(c))
    if (!base.count(v)) out.insert(v);
  return out;
}

Clause fuse_fr(const Clause& c, const Signature& sig) {
  auto elim = fusion_vars(c);
  if (elim.empty()) return c;
  WeightExpr w = eval_weight(lower_vars(eval_weight(c.weight, sig), elim, sig, false), sig);

  WeightExpr result;
  if (auto dnf = disjunctive(w)) {
    std::vector<WeightExpr> terms;
    for (const auto& conj : *dnf) {
      std::map<std::string, std::vector<std::string>> groups;
      std::vector<WeightExpr> rest;
      for (const auto& atom : conj) {
        if (atom.kind == WeightExpr::Kind::Mem && atom.arg.is_variable() && elim.count(atom.arg.name)) {
          groups[atom.arg.name].push_back(atom.fuzzy);
        } else {
          rest.push_back(atom);
        }
      }
      for (const auto& [var, names] : groups) {
        FuzzySet f = sig.fuzzy_set(names.front());
        for (std::size_t i = 1; i < names.size(); ++i) f = min_fs(f, sig.fuzzy_set(names[i]));
        rest.push_back(WeightExpr::constant(f.height()));
      }
      terms.push_back(WeightExpr::min(std::move(rest)));
    }
    result = WeightExpr::max(std::move(terms));
  } else {
    result = lower_vars(w, elim, sig, true);
  }
  return Clause{c.literals, eval_weight(result, sig)};
}

std::optional<Clause> merge_gm(const Clause& c1, const Clause& c2) {
  if (!fusion_vars(c1).empty() || !fusion_vars(c2).empty()) return std::nullopt;
  auto theta = variant_renaming(c1, c2);
  if (!theta) return std::nullopt;
  return Clause{c2.literals, normalize(WeightExpr::max({apply(*theta, c1.weight), c2.weight}))};
}

bool has_fuzzy_terms(const Clause& c) {
  for (const auto& l : c.literals)
    for (const auto& t : l.args)
      if (t.kind == Term::Kind::Fuzzy) return true;
  return false;
}

Clause equivalent_transform(const Clause& c) {
  if (!has_fuzzy_terms(c)) return c;
  auto level = std::make_shared<const WeightExpr>(c.weight);
  Clause out = c;
  for (auto& l : out.literals)
    for (auto& t : l.args)
      if (t.kind == Term::Kind::Fuzzy) t = Term::cut(t.name, t.sort, level);
  return out;
}

}  // namespace plfc

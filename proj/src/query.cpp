#include "plfc/query.hpp"

#include <optional>

#include "plfc/calculus.hpp"
#include "plfc/error.hpp"

namespace plfc {

std::string form_name(Query::Form f) {
  switch (f) {
    case Query::Form::I:
      return "i";
    case Query::Form::II:
      return "ii";
    case Query::Form::III:
      return "iii";
    case Query::Form::IV:
      return "iv";
  }
  return "?";
}

namespace {

[[noreturn]] void unsupported(const std::string& why) { throw Error("unsupported query form: " + why); }

struct ArgShape {
  std::vector<std::size_t> vars;
  std::vector<std::size_t> fuzzy;
};

ArgShape shape_of(const Literal& l) {
  ArgShape s;
  for (std::size_t i = 0; i < l.args.size(); ++i) {
    const Term& t = l.args[i];
    switch (t.kind) {
      case Term::Kind::Variable:
        s.vars.push_back(i);
        break;
      case Term::Kind::Fuzzy:
      case Term::Kind::Imprecise:
        s.fuzzy.push_back(i);
        break;
      case Term::Kind::Precise:
        break;
      default:
        unsupported("cut and support terms are not allowed in queries");
    }
  }
  return s;
}

struct WeightShape {
  Degree beta = Degree::one();
  std::vector<std::pair<std::string, std::string>> mems;  // (set, variable)
};

WeightShape weight_shape(const WeightExpr& w) {
  WeightShape out;
  std::optional<Degree> beta;
  auto leaf = [&](const WeightExpr& e) {
    if (e.kind == WeightExpr::Kind::Const) {
      if (beta) unsupported("more than one constant in the query weight");
      beta = e.value;
    } else if (e.kind == WeightExpr::Kind::Mem && e.arg.is_variable()) {
      out.mems.emplace_back(e.fuzzy, e.arg.name);
    } else {
      unsupported("query weights are min(beta, B(x), ...) over variables");
    }
  };
  if (w.kind == WeightExpr::Kind::Min) {
    for (const auto& a : w.args) leaf(a);
  } else {
    leaf(w);
  }
  if (beta) out.beta = *beta;
  return out;
}

}  // namespace

Query classify_query(const Clause& c, const Signature& sig) {
  if (!check_clause(c, sig).empty()) unsupported("ill-formed clause");
  if (c.literals.empty()) unsupported("the empty clause");
  WeightShape ws = weight_shape(c.weight);
  Query q;
  q.clause = c;
  q.beta = ws.beta;
  if (q.beta.is_zero()) unsupported("query weight must be positive");

  if (c.literals.size() == 1) {
    const Literal& l = c.literals[0];
    if (!l.positive) unsupported("single-literal queries must be positive");
    ArgShape s = shape_of(l);
    if (s.fuzzy.size() > 1) unsupported("at most one fuzzy or imprecise argument");
    q.has_fuzzy = !s.fuzzy.empty();
    if (q.has_fuzzy) q.fuzzy_pos = s.fuzzy[0];
    if (ws.mems.empty()) {
      if (!s.vars.empty()) unsupported("variables need a weight restriction B(x)");
      q.form = Query::Form::I;
      return q;
    }
    if (ws.mems.size() != 1 || s.vars.size() != 1) unsupported("exactly one restricted variable expected");
    if (ws.mems[0].second != l.args[s.vars[0]].name) unsupported("the weight must restrict the literal's variable");
    q.var_pos = s.vars[0];
    q.weight_set = ws.mems[0].first;
    q.form = q.has_fuzzy ? Query::Form::III : Query::Form::II;
    return q;
  }

  if (c.literals.size() != 2) unsupported("at most two literals");
  const Literal* neg = &c.literals[0];
  const Literal* pos = &c.literals[1];
  if (neg->positive == pos->positive) unsupported("two-literal queries need one negative and one positive literal");
  if (neg->positive) unsupported("the negative literal comes first");
  ArgShape sn = shape_of(*neg), sp = shape_of(*pos);
  if (sn.fuzzy.size() != 1 || sn.vars.size() != 1 || sp.fuzzy.size() != 1 || sp.vars.size() != 1)
    unsupported("each literal needs one fuzzy argument and one variable");
  const std::string& x = neg->args[sn.vars[0]].name;
  const std::string& y = pos->args[sp.vars[0]].name;
  if (x == y) unsupported("the two literals must use distinct variables");
  if (ws.mems.size() != 2) unsupported("the weight must restrict both variables");
  std::string cset, dset;
  for (const auto& [set, var] : ws.mems) {
    if (var == x && cset.empty()) cset = set;
    else if (var == y && dset.empty()) dset = set;
    else unsupported("the weight must restrict each variable once");
  }
  q.form = Query::Form::IV;
  q.fuzzy_pos = sn.fuzzy[0];
  q.var_pos = sn.vars[0];
  q.second_var_pos = sp.vars[0];
  q.second_fuzzy_pos = sp.fuzzy[0];
  q.weight_set = cset;
  q.second_weight_set = dset;
  return q;
}

Clause with_beta(const Query& q, const Degree& b) {
  std::vector<WeightExpr> parts{WeightExpr::constant(b)};
  const WeightExpr& w = q.clause.weight;
  if (w.kind == WeightExpr::Kind::Min) {
    for (const auto& a : w.args)
      if (!a.is_const()) parts.push_back(a);
  } else if (!w.is_const()) {
    parts.push_back(w);
  }
  return Clause{q.clause.literals, normalize(WeightExpr::min(std::move(parts)))};
}

}  // namespace plfc

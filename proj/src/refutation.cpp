#include "plfc/refutation.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "plfc/calculus.hpp"
#include "plfc/error.hpp"
#include "plfc/parser.hpp"

namespace plfc {

RefuteOptions RefuteOptions::from_environment() {
  RefuteOptions o;
  auto read = [](const char* name, std::size_t& out) {
    if (const char* v = std::getenv(name)) {
      char* end = nullptr;
      unsigned long long n = std::strtoull(v, &end, 10);
      if (end && *end == '\0' && n > 0) out = static_cast<std::size_t>(n);
    }
  };
  read("PLFC_MAX_STEPS", o.max_steps);
  read("PLFC_MAX_DEPTH", o.max_depth);
  return o;
}

std::string rule_name(Rule r) {
  switch (r) {
    case Rule::Input:
      return "INPUT";
    case Rule::Fusion:
      return "FR";
    case Rule::Threshold:
      return "THRESHOLD";
    case Rule::Merge:
      return "GM";
    case Rule::Equivalent:
      return "EQ";
    case Rule::Resolve:
      return "GR";
  }
  return "?";
}

namespace {

std::optional<Rule> rule_from_name(const std::string& s) {
  for (Rule r : {Rule::Input, Rule::Fusion, Rule::Threshold, Rule::Merge, Rule::Equivalent, Rule::Resolve})
    if (rule_name(r) == s) return r;
  return std::nullopt;
}

}  // namespace

// ---------------------------------------------------------------------------
// Query negation

std::vector<Clause> negate_query(const Query& q, const Signature& sig) {
  (void)sig;
  const Literal& first = q.clause.literals.at(0);
  auto var_like = [](const Term& t) { return Term::variable("x", t.sort); };
  auto support_at = [](const Literal& l, std::size_t pos, const std::string& set) {
    return Term::support(set, l.args[pos].sort);
  };

  switch (q.form) {
    case Query::Form::I: {
      Literal n = first.negated();
      if (!q.has_fuzzy) return {Clause{{n}, WeightExpr::constant(Degree::one())}};
      const Term& a = first.args[q.fuzzy_pos];
      Term x = var_like(a);
      n.args[q.fuzzy_pos] = x;
      return {Clause{{n}, WeightExpr::mem(a.name, x)}};
    }
    case Query::Form::II: {
      Literal n = first.negated();
      n.args[q.var_pos] = support_at(first, q.var_pos, q.weight_set);
      return {Clause{{n}, WeightExpr::constant(Degree::one())}};
    }
    case Query::Form::III: {
      Literal n = first.negated();
      const Term& a = first.args[q.fuzzy_pos];
      Term x = var_like(a);
      n.args[q.fuzzy_pos] = x;
      n.args[q.var_pos] = support_at(first, q.var_pos, q.weight_set);
      return {Clause{{n}, WeightExpr::mem(a.name, x)}};
    }
    case Query::Form::IV: {
      const Literal& second = q.clause.literals.at(1);
      Literal p = first.negated();
      const Term& a = first.args[q.fuzzy_pos];
      Term u = var_like(a);
      p.args[q.fuzzy_pos] = u;
      p.args[q.var_pos] = support_at(first, q.var_pos, q.weight_set);
      Literal n = second.negated();
      const Term& b = second.args[q.second_fuzzy_pos];
      Term v = var_like(b);
      n.args[q.second_fuzzy_pos] = v;
      n.args[q.second_var_pos] = support_at(second, q.second_var_pos, q.second_weight_set);
      return {Clause{{p}, WeightExpr::mem(a.name, u)}, Clause{{n}, WeightExpr::mem(b.name, v)}};
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Preprocessing

namespace {

TraceStep make_step(Rule rule, std::size_t id, std::vector<std::size_t> parents, const Clause* clause,
                    std::size_t depth) {
  TraceStep s;
  s.rule = rule;
  s.id = id;
  s.parents = std::move(parents);
  if (clause) s.clause = *clause;
  s.depth = depth;
  return s;
}

/// Pairwise GM to a fixpoint. The merged clause takes the earlier clause's place.
std::size_t merge_all(std::vector<NumberedClause>& k, std::vector<TraceStep>& steps, std::size_t& next_id,
                      std::size_t depth) {
  std::size_t merged = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < k.size() && !changed; ++i) {
      for (std::size_t j = i + 1; j < k.size() && !changed; ++j) {
        auto m = merge_gm(k[i].clause, k[j].clause);
        if (!m) continue;
        std::size_t id = next_id++;
        steps.push_back(make_step(Rule::Merge, id, {k[i].id, k[j].id}, &*m, depth));
        k[i] = NumberedClause{id, std::move(*m)};
        k.erase(k.begin() + static_cast<std::ptrdiff_t>(j));
        ++merged;
        changed = true;
      }
    }
  }
  return merged;
}

}  // namespace

WorkingSet preprocess(const KnowledgeBase& kb, const std::vector<Clause>& negation, const Degree& alpha,
                      const RefuteOptions& opt) {
  const Signature& sig = kb.signature;
  WorkingSet ws;
  auto input = [&](const Clause& c, const char* origin) {
    std::size_t id = ws.next_id++;
    ws.clauses.push_back(NumberedClause{id, c});
    TraceStep s = make_step(Rule::Input, id, {}, &c, 0);
    s.origin = origin;
    ws.steps.push_back(std::move(s));
  };
  for (const auto& c : kb.clauses) input(c, "kb");
  for (const auto& c : negation) input(c, "negation");

  for (auto& nc : ws.clauses) {
    if (fusion_vars(nc.clause).empty()) continue;
    Clause f = fuse_fr(nc.clause, sig);
    std::size_t id = ws.next_id++;
    ws.steps.push_back(make_step(Rule::Fusion, id, {nc.id}, &f, 0));
    nc = NumberedClause{id, std::move(f)};
    ++ws.summary.fused;
  }

  if (opt.threshold) {
    std::vector<NumberedClause> kept;
    for (auto& nc : ws.clauses) {
      if (weight_sup(nc.clause.weight, sig) < alpha) {
        ws.steps.push_back(make_step(Rule::Threshold, nc.id, {nc.id}, nullptr, 0));
        ++ws.summary.pruned;
      } else {
        kept.push_back(std::move(nc));
      }
    }
    ws.clauses = std::move(kept);
  }

  if (opt.merging) ws.summary.merged = merge_all(ws.clauses, ws.steps, ws.next_id, 0);

  for (auto& nc : ws.clauses) {
    if (!has_fuzzy_terms(nc.clause)) continue;
    Clause e = equivalent_transform(nc.clause);
    std::size_t id = ws.next_id++;
    ws.steps.push_back(make_step(Rule::Equivalent, id, {nc.id}, &e, 0));
    nc = NumberedClause{id, std::move(e)};
    ++ws.summary.rewritten;
  }
  return ws;
}

// ---------------------------------------------------------------------------
// Search

namespace {

std::pair<std::string, long> split_suffix(const std::string& name) {
  auto us = name.rfind('_');
  if (us == std::string::npos || us + 1 == name.size()) return {name, -1};
  for (std::size_t i = us + 1; i < name.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return {name, -1};
  return {name.substr(0, us), std::stol(name.substr(us + 1))};
}

/// Standardizing apart: every variable becomes stem_N with N unused so far.
Clause rename_apart(const Clause& c, std::size_t& counter) {
  Substitution s;
  for (const auto& [v, sort] : variable_sorts(c))
    s.bind(v, Term::variable(split_suffix(v).first + "_" + std::to_string(counter++), sort));
  return apply(s, c);
}

bool same_clauses(const std::vector<NumberedClause>& a, const std::vector<NumberedClause>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i].clause == b[i].clause)) return false;
  return true;
}

bool already_present(const Clause& c, const std::vector<NumberedClause>& k) {
  for (const auto& d : k) {
    if (d.clause.literals.size() != c.literals.size()) continue;
    auto theta = variant_renaming(c, d.clause);
    if (theta && normalize(apply(*theta, c.weight)) == normalize(d.clause.weight)) return true;
  }
  return false;
}

std::optional<Degree> ground_value(const WeightExpr& w, const Signature& sig) {
  if (!is_ground(w)) return std::nullopt;
  try {
    return evaluate(w, sig);
  } catch (const EvaluationError&) {
    return std::nullopt;
  }
}

class Search {
 public:
  Search(const Signature& sig, Degree alpha, const RefuteOptions& opt, std::size_t next_id, std::size_t counter)
      : sig_(sig), alpha_(std::move(alpha)), opt_(opt), next_id_(next_id), counter_(counter) {}

  bool run(const std::vector<NumberedClause>& k, const std::set<std::pair<std::size_t, std::size_t>>& rl,
           std::size_t depth) {
    if (depth >= opt_.max_depth) {
      budget_ = true;
      return false;
    }
    for (const auto& c1 : k) {
      for (std::size_t l1 = 0; l1 < c1.clause.literals.size(); ++l1) {
        if (rl.count({c1.id, l1})) continue;
        const Literal& a = c1.clause.literals[l1];
        for (const auto& c2 : k) {
          for (std::size_t l2 = 0; l2 < c2.clause.literals.size(); ++l2) {
            const Literal& b = c2.clause.literals[l2];
            if (a.positive == b.positive || a.predicate != b.predicate) continue;
            if (steps_ >= opt_.max_steps) {
              budget_ = true;
              stopped_ = true;
              return false;
            }
            Clause renamed = rename_apart(c2.clause, counter_);
            auto res = resolve_gr(c1.clause, l1, renamed, l2, sig_);
            if (!res) continue;
            ++steps_;
            Clause derived = canonical(fuse_fr(res->clause, sig_), sig_);

            TraceStep step = make_step(Rule::Resolve, next_id_++, {c1.id, c2.id}, &derived, depth + 1);
            step.literals = {l1, l2};
            step.renamed = renamed;
            step.theta = res->theta;

            if (derived.is_empty()) {
              auto v = ground_value(derived.weight, sig_);
              if (!v) continue;
              if (!best_ || *best_ < *v) {
                best_ = *v;
                best_branch_ = branch_;
                best_branch_.push_back(step);
              }
              if (*v >= alpha_) {
                beta_ = *v;
                proof_ = branch_;
                proof_.push_back(std::move(step));
                return true;
              }
              continue;
            }
            if (opt_.threshold && weight_sup(derived.weight, sig_) < alpha_) continue;
            if (already_present(derived, k)) continue;

            std::size_t mark = branch_.size();
            std::vector<NumberedClause> next = k;
            next.push_back(NumberedClause{step.id, derived});
            branch_.push_back(std::move(step));
            if (opt_.merging) merge_all(next, branch_, next_id_, depth + 1);
            if (!same_clauses(next, k)) {
              auto rl2 = rl;
              rl2.insert({c1.id, l1});
              if (run(next, rl2, depth + 1)) return true;
              if (stopped_) return false;
            }
            branch_.resize(mark);
          }
        }
      }
    }
    return false;
  }

  bool budget() const { return budget_; }
  std::size_t steps() const { return steps_; }
  const std::optional<Degree>& best() const { return best_; }
  const std::optional<Degree>& beta() const { return beta_; }
  const std::vector<TraceStep>& proof() const { return proof_; }
  const std::vector<TraceStep>& best_branch() const { return best_branch_; }

 private:
  const Signature& sig_;
  Degree alpha_;
  RefuteOptions opt_;
  std::size_t next_id_;
  std::size_t counter_;
  std::size_t steps_ = 0;
  bool budget_ = false;
  bool stopped_ = false;
  std::optional<Degree> best_;
  std::optional<Degree> beta_;
  std::vector<TraceStep> branch_;
  std::vector<TraceStep> best_branch_;
  std::vector<TraceStep> proof_;
};

}  // namespace

RefutationResult refute(const KnowledgeBase& kb, const Query& q, const Degree& alpha, const RefuteOptions& opt) {
  if (alpha.is_zero()) throw Error("refutation threshold must be > 0");
  const Signature& sig = kb.signature;
  WorkingSet ws = preprocess(kb, negate_query(q, sig), alpha, opt);

  RefutationResult r;
  r.alpha = alpha;
  r.summary = ws.summary;
  r.trace = ws.steps;

  const NumberedClause* closing = nullptr;
  for (const auto& nc : ws.clauses) {
    if (!nc.clause.is_empty()) continue;
    auto v = ground_value(nc.clause.weight, sig);
    if (!v) continue;
    if (!r.best_bottom || *r.best_bottom < *v) r.best_bottom = *v;
    if (*v >= alpha && !closing) closing = &nc;
  }
  if (closing) {
    r.proved = true;
    r.beta = ground_value(closing->clause.weight, sig);
    return r;
  }

  long max_suffix = 0;
  for (const auto& nc : ws.clauses)
    for (const auto& v : vars(nc.clause)) max_suffix = std::max(max_suffix, split_suffix(v).second);

  Search search(sig, alpha, opt, ws.next_id, static_cast<std::size_t>(max_suffix) + 1);
  r.proved = search.run(ws.clauses, {}, 0);
  r.steps = search.steps();
  r.budget_exhausted = search.budget();
  if (search.best() && (!r.best_bottom || *r.best_bottom < *search.best())) r.best_bottom = search.best();
  const auto& tail = r.proved ? search.proof() : search.best_branch();
  r.trace.insert(r.trace.end(), tail.begin(), tail.end());
  if (r.proved) r.beta = search.beta();
  return r;
}

// ---------------------------------------------------------------------------
// Trace output

namespace {

std::string join_ids(const std::vector<std::size_t>& ids, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? sep : "") + std::to_string(ids[i]);
  return out;
}

std::string step_line(const TraceStep& s) {
  std::ostringstream o;
  o << std::string(2 * s.depth, ' ') << "[" << s.id << "] " << rule_name(s.rule);
  switch (s.rule) {
    case Rule::Input:
      o << " " << s.origin;
      break;
    case Rule::Resolve:
      o << " " << s.parents[0] << "." << s.literals[0] << " " << s.parents[1] << "." << s.literals[1];
      if (s.theta) o << " " << to_string(*s.theta);
      break;
    case Rule::Threshold:
      o << " removed";
      break;
    default:
      o << " " << join_ids(s.parents, " ");
  }
  if (s.clause) o << "  " << to_string(*s.clause);
  return o.str();
}

std::string result_line(bool proved, const std::optional<Degree>& beta, const std::optional<Degree>& best) {
  std::string out = proved ? "proved" : "not proved";
  if (beta) out += ", beta = " + to_string(*beta);
  if (!proved && best) out += ", best (bot, " + to_string(*best) + ")";
  return out;
}

nlohmann::json step_json(const TraceStep& s) {
  nlohmann::json j;
  j["type"] = "step";
  j["rule"] = rule_name(s.rule);
  j["id"] = s.id;
  j["parents"] = s.parents;
  if (!s.literals.empty()) j["literals"] = s.literals;
  if (s.renamed) j["renamed"] = to_string(*s.renamed);
  if (s.theta) j["theta"] = to_string(*s.theta);
  if (s.clause) j["clause"] = to_string(*s.clause);
  if (!s.origin.empty()) j["origin"] = s.origin;
  j["depth"] = s.depth;
  return j;
}

}  // namespace

std::string trace_text(const RefutationResult& r) {
  std::string out;
  for (const auto& s : r.trace) out += step_line(s) + "\n";
  out += result_line(r.proved, r.beta, r.best_bottom) + "\n";
  return out;
}

std::string trace_jsonl(const RefutationResult& r, const KnowledgeBase& kb, const Query& q, const RefuteOptions& opt) {
  std::string out;
  nlohmann::json h;
  h["type"] = "header";
  h["kb"] = format_kb(kb);
  h["query"] = to_string(q.clause);
  h["alpha"] = to_string(r.alpha);
  h["merging"] = opt.merging;
  h["threshold"] = opt.threshold;
  out += h.dump() + "\n";
  for (const auto& s : r.trace) out += step_json(s).dump() + "\n";
  nlohmann::json res;
  res["type"] = "result";
  res["proved"] = r.proved;
  if (r.beta) res["beta"] = to_string(*r.beta);
  if (r.best_bottom) res["best_bottom"] = to_string(*r.best_bottom);
  res["steps"] = r.steps;
  res["budget_exhausted"] = r.budget_exhausted;
  out += res.dump() + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Replay

ReplayReport replay_trace(std::string_view jsonl) {
  ReplayReport rep;
  auto problem = [&](const std::string& msg) { rep.problems.push_back(msg); };

  std::vector<nlohmann::json> lines;
  std::istringstream in{std::string(jsonl)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      lines.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw Error(std::string("malformed trace line: ") + e.what());
    }
  }
  if (lines.empty() || lines.front().value("type", "") != "header") throw Error("trace has no header line");

  const auto& header = lines.front();
  KnowledgeBase kb = parse_kb(header.at("kb").get<std::string>(), "<trace kb>");
  const Signature& sig = kb.signature;
  Query q = parse_query(header.at("query").get<std::string>(), sig, "<trace query>");
  Degree alpha(parse_rational(header.at("alpha").get<std::string>()));
  std::vector<Clause> negation = negate_query(q, sig);

  std::map<std::size_t, Clause> live;
  std::size_t kb_seen = 0, neg_seen = 0;
  std::optional<Degree> closing;
  bool result_proved = false;
  std::optional<Degree> result_beta;

  auto clause_of = [&](std::size_t id) -> const Clause& {
    auto it = live.find(id);
    if (it == live.end()) throw Error("step refers to unknown clause " + std::to_string(id));
    return it->second;
  };

  for (std::size_t n = 1; n < lines.size(); ++n) {
    const auto& j = lines[n];
    const std::string type = j.value("type", "");
    if (type == "result") {
      result_proved = j.value("proved", false);
      if (j.contains("beta")) result_beta = Degree(parse_rational(j["beta"].get<std::string>()));
      continue;
    }
    if (type != "step") throw Error("unknown trace line type '" + type + "'");
    auto rule = rule_from_name(j.value("rule", ""));
    if (!rule) throw Error("unknown rule '" + j.value("rule", "") + "'");
    ++rep.steps;

    TraceStep s;
    s.rule = *rule;
    s.id = j.at("id").get<std::size_t>();
    s.parents = j.value("parents", std::vector<std::size_t>{});
    s.literals = j.value("literals", std::vector<std::size_t>{});
    s.origin = j.value("origin", "");
    s.depth = j.value("depth", std::size_t{0});
    const std::string recorded = j.value("clause", "");
    const std::string where = "step " + std::to_string(s.id) + " (" + rule_name(s.rule) + "): ";
    if (!recorded.empty()) s.clause = parse_clause(recorded, sig, "<trace>", false);

    std::optional<Clause> expect;
    try {
      switch (s.rule) {
        case Rule::Input:
          if (s.origin == "kb") {
            if (kb_seen < kb.clauses.size()) expect = kb.clauses[kb_seen];
            ++kb_seen;
          } else {
            if (neg_seen < negation.size()) expect = negation[neg_seen];
            ++neg_seen;
          }
          if (!expect) problem(where + "input clause not in the KB or the query negation");
          break;
        case Rule::Fusion:
          expect = fuse_fr(clause_of(s.parents.at(0)), sig);
          live.erase(s.parents.at(0));
          break;
        case Rule::Threshold:
          if (!(weight_sup(clause_of(s.parents.at(0)).weight, sig) < alpha)) problem(where + "clause reaches alpha");
          live.erase(s.parents.at(0));
          break;
        case Rule::Merge: {
          auto m = merge_gm(clause_of(s.parents.at(0)), clause_of(s.parents.at(1)));
          if (!m) problem(where + "parents are not variants");
          expect = m;
          live.erase(s.parents.at(0));
          live.erase(s.parents.at(1));
          break;
        }
        case Rule::Equivalent:
          expect = equivalent_transform(clause_of(s.parents.at(0)));
          live.erase(s.parents.at(0));
          break;
        case Rule::Resolve: {
          const Clause& c1 = clause_of(s.parents.at(0));
          const Clause& c2 = clause_of(s.parents.at(1));
          if (!j.contains("renamed")) throw Error(where + "missing renamed parent");
          Clause renamed = parse_clause(j["renamed"].get<std::string>(), sig, "<trace>", false);
          auto ren = variant_renaming(c2, renamed);
          if (!ren || !(apply(*ren, c2) == renamed)) problem(where + "renamed parent is not a renaming of " +
                                                             std::to_string(s.parents.at(1)));
          auto res = resolve_gr(c1, s.literals.at(0), renamed, s.literals.at(1), sig);
          if (!res) {
            problem(where + "literals do not resolve");
            break;
          }
          s.theta = res->theta;
          if (j.contains("theta") && j["theta"].get<std::string>() != to_string(res->theta))
            problem(where + "substitution differs: recomputed " + to_string(res->theta));
          expect = canonical(fuse_fr(res->clause, sig), sig);
          break;
        }
      }
    } catch (const std::out_of_range&) {
      throw Error(where + "missing parent or literal position");
    }

    if (expect) {
      if (to_string(*expect) != recorded) problem(where + "recorded " + recorded + ", recomputed " + to_string(*expect));
      if (!expect->is_empty()) {
        live[s.id] = *expect;
      } else if (auto v = ground_value(expect->weight, sig); v && (!closing || *closing < *v)) {
        closing = v;
      }
    }
    rep.text += step_line(s) + "\n";
  }

  if (result_proved) {
    if (!closing || *closing < alpha) problem("result claims a proof but the last empty clause does not reach alpha");
    else if (result_beta && !(*result_beta == *closing)) problem("result beta differs from the empty clause weight");
  }
  rep.proved = result_proved;
  rep.beta = result_beta;
  rep.verified = rep.problems.empty();
  rep.text += result_line(result_proved, result_beta, std::nullopt) + "\n";
  return rep;
}

}  // namespace plfc

#include "plfc/semantics_oracle.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "json.hpp"
#include "plfc/calculus.hpp"
#include "plfc/error.hpp"

namespace plfc {

// ---------------------------------------------------------------------------
// Context

FiniteContext::FiniteContext(const Signature& sig, std::map<std::string, std::vector<DomainValue>> carriers,
                             std::vector<std::string> predicates)
    : sig_(sig), carriers_(std::move(carriers)), predicates_(std::move(predicates)) {
  for (const auto& s : sig_.sorts()) {
    auto it = carriers_.find(s.name);
    if (it == carriers_.end()) {
      if (!s.domain->is_finite()) continue;
      it = carriers_.emplace(s.name, sig_.finite_pool(s.name)).first;
    }
    if (it->second.empty()) throw DomainError("empty carrier for sort '" + s.name + "'");
    for (const auto& v : it->second)
      if (!s.domain->contains(v)) throw DomainError("carrier value " + to_string(v) + " outside sort '" + s.name + "'");
  }
  for (const auto& p : predicates_) {
    const auto* decl = sig_.predicate(p);
    if (!decl) throw DomainError("unknown predicate '" + p + "'");
    offset_[p] = atoms_.size();
    std::vector<DomainValue> args(decl->arity());
    auto rec = [&](auto& self, std::size_t i) -> void {
      if (i == args.size()) {
        atoms_.push_back(Atom{p, args});
        return;
      }
      for (const auto& v : carrier(decl->sorts[i])) {
        args[i] = v;
        self(self, i + 1);
      }
    };
    rec(rec, 0);
  }
}

const std::vector<DomainValue>& FiniteContext::carrier(const std::string& sort) const {
  auto it = carriers_.find(sort);
  if (it == carriers_.end()) throw EnumerationError("sort '" + sort + "' has no carrier in the context");
  return it->second;
}

std::optional<std::size_t> FiniteContext::atom_index(const std::string& predicate,
                                                     const std::vector<DomainValue>& args) const {
  auto it = offset_.find(predicate);
  if (it == offset_.end()) return std::nullopt;
  const auto* decl = sig_.predicate(predicate);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto& c = carrier(decl->sorts[i]);
    auto pos = std::find(c.begin(), c.end(), args[i]);
    if (pos == c.end()) return std::nullopt;
    idx = idx * c.size() + static_cast<std::size_t>(pos - c.begin());
  }
  return it->second + idx;
}

namespace {

struct Segment {
  Rational x0, x1, y0, y1;
};

std::vector<Segment> segments_of(const FuzzySet& f, bool complemented) {
  std::vector<Segment> out;
  const auto& pl = f.piecewise();
  for (std::size_t i = 0; i + 1 < pl.xs.size(); ++i) {
    Segment s{pl.xs[i], pl.xs[i + 1], pl.left[i], pl.right[i]};
    if (complemented) {
      s.y0 = 1 - s.y0;
      s.y1 = 1 - s.y1;
    }
    out.push_back(s);
  }
  return out;
}

Rational at(const Segment& s, const Rational& x) { return s.y0 + (s.y1 - s.y0) * (x - s.x0) / (s.x1 - s.x0); }

void crossings(const Segment& a, const Segment& b, std::set<Rational>& out) {
  Rational lo = std::max(a.x0, b.x0), hi = std::min(a.x1, b.x1);
  if (!(lo < hi)) return;
  Rational dl = at(a, lo) - at(b, lo), dh = at(a, hi) - at(b, hi);
  if (sgn(dl) * sgn(dh) < 0) out.insert(Rational(lo + (hi - lo) * dl / (dl - dh)));
}

void precise_values(const Term& t, std::map<std::string, std::set<Rational>>& out) {
  if (t.is_precise() && std::holds_alternative<Rational>(t.value)) out[t.sort].insert(std::get<Rational>(t.value));
}

void precise_values(const WeightExpr& w, std::map<std::string, std::set<Rational>>& out) {
  if (w.kind == WeightExpr::Kind::Mem) precise_values(w.arg, out);
  for (const auto& a : w.args) precise_values(a, out);
}

void constant_levels(const WeightExpr& w, std::set<Rational>& out) {
  if (w.kind == WeightExpr::Kind::Const) out.insert(w.value.value());
  for (const auto& a : w.args) constant_levels(a, out);
  if (w.kind == WeightExpr::Kind::Mem && w.arg.kind == Term::Kind::Cut) constant_levels(*w.arg.level, out);
}

}  // namespace

FiniteContext FiniteContext::build(const Signature& sig, const std::vector<Clause>& clauses,
                                   const std::map<std::string, std::vector<Rational>>& grids,
                                   const std::vector<Degree>& levels) {
  std::map<std::string, std::set<Rational>> values;
  std::set<Rational> level_set;
  for (const auto& d : levels) level_set.insert(d.value());
  std::set<std::string> preds;
  std::vector<FuzzySet> extra_sets;
  for (const auto& c : clauses) {
    for (const auto& l : c.literals) {
      preds.insert(l.predicate);
      for (const auto& t : l.args) {
        precise_values(t, values);
        if (t.kind == Term::Kind::Cut) constant_levels(*t.level, level_set);
        if (t.is_crisp_constant() && is_ground(t)) extra_sets.push_back(term_set(t, sig));
      }
    }
    precise_values(c.weight, values);
    constant_levels(c.weight, level_set);
  }
  for (const auto& k : sig.constants())
    if (std::holds_alternative<Rational>(k.value)) values[k.sort].insert(std::get<Rational>(k.value));

  std::map<std::string, std::vector<DomainValue>> carriers;
  for (const auto& s : sig.sorts()) {
    if (s.domain->is_finite()) {
      carriers[s.name] = sig.finite_pool(s.name);
      continue;
    }
    std::set<Rational> pts = values[s.name];
    pts.insert(s.domain->lo());
    pts.insert(s.domain->hi());
    if (auto g = grids.find(s.name); g != grids.end()) pts.insert(g->second.begin(), g->second.end());
    std::vector<Segment> segs;
    auto add_set = [&](const FuzzySet& f) {
      for (const auto& x : f.piecewise().xs) pts.insert(x);
      for (bool comp : {false, true}) {
        auto more = segments_of(f, comp);
        segs.insert(segs.end(), more.begin(), more.end());
      }
    };
    for (const auto& f : sig.fuzzies())
      if (f.sort == s.name) add_set(*f.set);
    for (const auto& f : extra_sets)
      if (f.domain() == s.domain) add_set(f);
    for (const auto& lv : level_set) segs.push_back(Segment{s.domain->lo(), s.domain->hi(), lv, lv});
    for (std::size_t i = 0; i < segs.size(); ++i)
      for (std::size_t j = i + 1; j < segs.size(); ++j) crossings(segs[i], segs[j], pts);
    auto& out = carriers[s.name];
    for (const auto& p : pts)
      if (s.domain->contains(p)) out.emplace_back(p);
  }
  return FiniteContext(sig, std::move(carriers), std::vector<std::string>(preds.begin(), preds.end()));
}

World make_world(const FiniteContext& ctx,
                 const std::map<std::string, std::vector<std::vector<DomainValue>>>& extensions) {
  World w(ctx.atoms().size(), false);
  for (const auto& [p, tuples] : extensions) {
    for (const auto& t : tuples) {
      auto idx = ctx.atom_index(p, t);
      if (!idx) throw DomainError("atom of '" + p + "' outside the context");
      w[*idx] = true;
    }
  }
  return w;
}

std::map<std::string, std::vector<std::vector<DomainValue>>> describe_world(const FiniteContext& ctx, const World& w) {
  std::map<std::string, std::vector<std::vector<DomainValue>>> out;
  for (const auto& p : ctx.predicates()) out[p];
  for (std::size_t k = 0; k < w.size(); ++k)
    if (w[k]) out[ctx.atoms()[k].predicate].push_back(ctx.atoms()[k].args);
  return out;
}

// ---------------------------------------------------------------------------
// Truth and necessity

namespace {

Degree term_membership(const Term& t, const DomainValue& u, const Signature& sig) {
  switch (t.kind) {
    case Term::Kind::Variable:
      throw EvaluationError("truth of a non-ground literal");
    case Term::Kind::Precise:
      return t.value == u ? Degree::one() : Degree::zero();
    case Term::Kind::Imprecise:
    case Term::Kind::Fuzzy:
      return sig.fuzzy_set(t.name).membership(u);
    case Term::Kind::Cut:
    case Term::Kind::Support:
      return term_set(t, sig).membership(u);
  }
  return Degree::zero();
}

/// Degree of every atom of the literal's predicate: min_k mu_{t_k}(u_k).
std::vector<Degree> atom_degrees(const FiniteContext& ctx, const Literal& l) {
  const Signature& sig = ctx.signature();
  const auto* decl = sig.predicate(l.predicate);
  if (!decl) throw DomainError("unknown predicate '" + l.predicate + "'");
  std::vector<std::vector<Degree>> per_pos;
  for (std::size_t i = 0; i < l.args.size(); ++i) {
    std::vector<Degree> v;
    for (const auto& u : ctx.carrier(decl->sorts[i])) v.push_back(term_membership(l.args[i], u, sig));
    per_pos.push_back(std::move(v));
  }
  std::vector<Degree> out;
  std::vector<std::size_t> idx(per_pos.size(), 0);
  while (true) {
    Degree d = Degree::one();
    for (std::size_t i = 0; i < idx.size(); ++i) d = min(d, per_pos[i][idx[i]]);
    out.push_back(d);
    std::size_t i = idx.size();
    while (i > 0) {
      --i;
      if (++idx[i] < per_pos[i].size()) break;
      idx[i] = 0;
      if (i == 0) return out;
    }
    if (idx.empty()) return out;
  }
}

std::size_t offset_of(const FiniteContext& ctx, const std::string& predicate) {
  const auto* decl = ctx.signature().predicate(predicate);
  std::vector<DomainValue> first;
  for (const auto& s : decl->sorts) first.push_back(ctx.carrier(s).front());
  auto idx = ctx.atom_index(predicate, first);
  if (!idx) throw DomainError("predicate '" + predicate + "' is not part of the context");
  return *idx;
}

}  // namespace

Degree truth_eval(const FiniteContext& ctx, const World& w, const Clause& ground) {
  Degree best = Degree::zero();
  for (const auto& l : ground.literals) {
    auto degs = atom_degrees(ctx, l);
    std::size_t off = offset_of(ctx, l.predicate);
    for (std::size_t k = 0; k < degs.size(); ++k)
      if (w.at(off + k) == l.positive) best = max(best, degs[k]);
  }
  return best;
}

Degree clause_necessity(const FiniteContext& ctx, const PossDist& pi, const Clause& ground) {
  Degree n = Degree::one();
  for (const auto& [w, p] : pi)
    if (!p.is_zero()) n = min(n, max(p.complement(), truth_eval(ctx, w, ground)));
  return n;
}

std::vector<std::pair<Clause, Degree>> ground_over(const FiniteContext& ctx, const Clause& c) {
  std::vector<std::pair<Clause, Degree>> out;
  for (auto& g : ground_instances(c, ctx.signature(), ctx.carriers())) {
    Clause inst = canonical(g, ctx.signature());
    Degree d = evaluate(inst.weight, ctx.signature());
    out.emplace_back(std::move(inst), d);
  }
  return out;
}

bool satisfies(const FiniteContext& ctx, const PossDist& pi, const Clause& c) {
  for (const auto& [g, d] : ground_over(ctx, c))
    if (clause_necessity(ctx, pi, g) < d) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

/// Degrees ranked once so the inner loop compares small integers.
class Ranks {
 public:
  void add(const Degree& d) {
    values_.push_back(d);
    values_.push_back(d.complement());
  }
  void seal() {
    add(Degree::zero());
    std::sort(values_.begin(), values_.end());
    values_.erase(std::unique(values_.begin(), values_.end()), values_.end());
    comp_.resize(values_.size());
    for (std::size_t i = 0; i < values_.size(); ++i) comp_[i] = rank(values_[i].complement());
  }
  std::uint32_t rank(const Degree& d) const {
    return static_cast<std::uint32_t>(std::lower_bound(values_.begin(), values_.end(), d) - values_.begin());
  }
  std::uint32_t comp(std::uint32_t r) const { return comp_[r]; }
  std::uint32_t top() const { return static_cast<std::uint32_t>(values_.size() - 1); }
  const Degree& value(std::uint32_t r) const { return values_[r]; }

 private:
  std::vector<Degree> values_;
  std::vector<std::uint32_t> comp_;
};

struct FastLiteral {
  bool positive = true;
  std::size_t offset = 0;
  std::vector<Degree> degrees;
  std::vector<std::uint32_t> ranks;
  std::uint64_t range = 0;
};

struct FastClause {
  std::vector<FastLiteral> literals;
  Degree weight;
  std::uint32_t weight_rank = 0;
  std::uint32_t slack_rank = 0;  // 1 - weight
  std::vector<std::uint64_t> pass;  // per literal: atoms whose degree reaches the weight
};

FastClause compile(const FiniteContext& ctx, const Clause& c, const Degree& weight, Ranks& ranks) {
  FastClause fc;
  fc.weight = weight;
  ranks.add(weight);
  for (const auto& l : c.literals) {
    FastLiteral fl;
    fl.positive = l.positive;
    fl.offset = offset_of(ctx, l.predicate);
    fl.degrees = atom_degrees(ctx, l);
    for (const auto& d : fl.degrees) ranks.add(d);
    fl.range = fl.degrees.size() >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << fl.degrees.size()) - 1);
    fl.range <<= fl.offset;
    fc.literals.push_back(std::move(fl));
  }
  return fc;
}

void finish(FastClause& fc, const Ranks& ranks) {
  fc.weight_rank = ranks.rank(fc.weight);
  fc.slack_rank = ranks.comp(fc.weight_rank);
  for (auto& fl : fc.literals) {
    std::uint64_t m = 0;
    for (std::size_t k = 0; k < fl.degrees.size(); ++k) {
      fl.ranks.push_back(ranks.rank(fl.degrees[k]));
      if (fl.degrees[k] >= fc.weight) m |= std::uint64_t{1} << (fl.offset + k);
    }
    fc.pass.push_back(m);
  }
}

std::uint32_t truth_rank(const FastClause& fc, std::uint64_t w) {
  std::uint32_t best = 0;
  for (const auto& fl : fc.literals) {
    std::uint64_t m = (fl.positive ? w : ~w) & fl.range;
    while (m) {
      int k = std::countr_zero(m);
      best = std::max(best, fl.ranks[static_cast<std::size_t>(k) - fl.offset]);
      m &= m - 1;
    }
  }
  return best;
}

bool reaches_weight(const FastClause& fc, std::uint64_t w) {
  for (std::size_t i = 0; i < fc.literals.size(); ++i) {
    const auto& fl = fc.literals[i];
    std::uint64_t m = (fl.positive ? w : ~w) & fc.pass[i];
    if (m) return true;
  }
  return false;
}

World to_world(std::uint64_t bits, std::size_t n) {
  World w(n, false);
  for (std::size_t k = 0; k < n; ++k) w[k] = (bits >> k) & 1U;
  return w;
}

std::uint64_t world_count(const FiniteContext& ctx, std::uint64_t limit) {
  std::size_t n = ctx.atoms().size();
  if (n >= 63 || (std::uint64_t{1} << n) > limit)
    throw EnumerationError("context has " + std::to_string(n) + " atoms; enumerating 2^" + std::to_string(n) +
                           " interpretations exceeds the limit of " + std::to_string(limit));
  return std::uint64_t{1} << n;
}

}  // namespace

PossDist least_specific_model(const FiniteContext& ctx, const std::vector<std::pair<Clause, Degree>>& ground_kb,
                              std::uint64_t limit) {
  std::uint64_t count = world_count(ctx, limit);
  Ranks ranks;
  std::vector<FastClause> kb;
  for (const auto& [c, d] : ground_kb) kb.push_back(compile(ctx, c, d, ranks));
  ranks.seal();
  for (auto& fc : kb) finish(fc, ranks);
  PossDist pi;
  for (std::uint64_t w = 0; w < count; ++w) {
    std::uint32_t p = ranks.top();
    for (const auto& fc : kb)
      if (!reaches_weight(fc, w)) p = std::min(p, fc.slack_rank);
    if (!ranks.value(p).is_zero()) pi.emplace(to_world(w, ctx.atoms().size()), ranks.value(p));
  }
  return pi;
}

EntailmentReport oracle_entails(const FiniteContext& ctx, const std::vector<Clause>& kb, const Clause& query,
                                const OracleOptions& opt) {
  EntailmentReport rep;
  rep.worlds = world_count(ctx, opt.limit);
  Ranks ranks;
  std::vector<FastClause> constraints;
  for (const auto& c : kb)
    for (const auto& [g, d] : ground_over(ctx, c)) {
      if (d.is_zero()) continue;
      constraints.push_back(compile(ctx, g, d, ranks));
    }
  rep.ground_clauses = constraints.size();
  auto instances = ground_over(ctx, query);
  std::vector<FastClause> goals;
  for (const auto& [g, d] : instances) goals.push_back(compile(ctx, g, d, ranks));
  ranks.seal();
  for (auto& fc : constraints) finish(fc, ranks);
  for (auto& fc : goals) finish(fc, ranks);

  const bool goedel = opt.semantics == Semantics::ReciprocalGoedel;
  std::vector<std::uint32_t> degree(goals.size(), ranks.top());
  std::vector<std::uint64_t> witness(goals.size(), 0);
  std::uint32_t height = 0;
  for (std::uint64_t w = 0; w < rep.worlds; ++w) {
    std::uint32_t p = ranks.top();
    for (const auto& fc : constraints) {
      if (goedel) {
        p = std::min(p, std::max(truth_rank(fc, w), fc.slack_rank));
      } else if (!reaches_weight(fc, w)) {
        p = std::min(p, fc.slack_rank);
      }
    }
    height = std::max(height, p);
    if (ranks.value(p).is_zero()) continue;
    for (std::size_t j = 0; j < goals.size(); ++j) {
      std::uint32_t v = truth_rank(goals[j], w);
      std::uint32_t val = goedel ? (p <= v ? ranks.top() : ranks.comp(p)) : std::max(ranks.comp(p), v);
      if (val < degree[j]) {
        degree[j] = val;
        witness[j] = w;
      }
    }
  }
  rep.height = ranks.value(height);

  if (opt.normalized && !rep.height.is_one()) {
    // No normalized distribution satisfies the KB.
    rep.entailed = true;
    rep.degree = Degree::one();
    if (!instances.empty()) {
      rep.instance = instances.front().first;
      rep.required = instances.front().second;
    }
    return rep;
  }

  std::optional<std::size_t> pick;
  for (std::size_t j = 0; j < goals.size(); ++j)
    if (degree[j] < goals[j].weight_rank) {
      pick = j;
      break;
    }
  rep.entailed = !pick;
  if (!pick && !goals.empty())
    pick = static_cast<std::size_t>(std::min_element(degree.begin(), degree.end()) - degree.begin());
  if (pick) {
    rep.degree = ranks.value(degree[*pick]);
    rep.required = instances[*pick].second;
    rep.instance = instances[*pick].first;
    rep.witness = to_world(witness[*pick], ctx.atoms().size());
  } else {
    rep.degree = Degree::one();
  }
  return rep;
}

std::string to_json(const FiniteContext& ctx, const EntailmentReport& r) {
  nlohmann::json j;
  j["verdict"] = r.entailed ? "entailed" : "not-entailed";
  j["degree"] = to_string(r.degree);
  j["required"] = to_string(r.required);
  j["instance"] = to_string(r.instance);
  j["height"] = to_string(r.height);
  j["subnormalized"] = !r.height.is_one();
  j["worlds"] = r.worlds;
  j["ground_clauses"] = r.ground_clauses;
  nlohmann::json witness = nlohmann::json::object();
  if (!r.witness.empty()) {
    for (const auto& [p, tuples] : describe_world(ctx, r.witness)) {
      nlohmann::json ext = nlohmann::json::array();
      for (const auto& t : tuples) {
        nlohmann::json tup = nlohmann::json::array();
        for (const auto& v : t) tup.push_back(to_string(v));
        ext.push_back(tup);
      }
      witness[p] = ext;
    }
  }
  j["witness"] = witness;
  nlohmann::json carriers = nlohmann::json::object();
  for (const auto& [s, vals] : ctx.carriers()) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& v : vals) a.push_back(to_string(v));
    carriers[s] = a;
  }
  j["carriers"] = carriers;
  return j.dump();
}

// ---------------------------------------------------------------------------
// Necessity postulates

Degree necessity_over(const std::vector<Degree>& pi, const std::vector<Degree>& a) {
  Degree n = Degree::one();
  for (std::size_t i = 0; i < pi.size(); ++i) n = min(n, max(pi[i].complement(), a.at(i)));
  return n;
}

AxiomCheck check_necessity_axioms(const std::vector<Degree>& pi, const std::vector<Degree>& a,
                                  const std::vector<Degree>& b, const std::vector<Degree>& crisp,
                                  const Degree& alpha) {
  const std::size_t n = pi.size();
  AxiomCheck out;
  out.n1 = necessity_over(pi, std::vector<Degree>(n, Degree::one())).is_one();
  out.n2 = necessity_over(pi, std::vector<Degree>(n, Degree::zero())).is_zero();
  std::vector<Degree> ab(n), ca(n);
  for (std::size_t i = 0; i < n; ++i) {
    ab[i] = min(a[i], b[i]);
    ca[i] = max(alpha, crisp[i]);
  }
  out.n3 = necessity_over(pi, ab) == min(necessity_over(pi, a), necessity_over(pi, b));
  out.n4 = necessity_over(pi, ca) == max(alpha, necessity_over(pi, crisp));
  return out;
}

}  // namespace plfc

#include "plfc/fuzzy_set.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "plfc/error.hpp"

namespace plfc {

std::string to_string(const DomainValue& v) {
  if (const auto* r = std::get_if<Rational>(&v)) return to_string(*r);
  return std::get<std::string>(v);
}

// ---------------------------------------------------------------------------
// Domain

std::shared_ptr<const Domain> Domain::real_interval(Rational lo, Rational hi) {
  if (!(lo < hi)) throw DomainError("real interval domain requires lo < hi");
  auto d = std::shared_ptr<Domain>(new Domain());
  d->kind_ = Kind::RealInterval;
  d->lo_ = std::move(lo);
  d->hi_ = std::move(hi);
  return d;
}

std::shared_ptr<const Domain> Domain::finite(std::vector<std::string> symbols) {
  if (symbols.empty()) throw DomainError("finite domain requires at least one symbol");
  std::set<std::string> seen(symbols.begin(), symbols.end());
  if (seen.size() != symbols.size()) throw DomainError("finite domain symbols must be distinct");
  auto d = std::shared_ptr<Domain>(new Domain());
  d->kind_ = Kind::Finite;
  d->symbols_ = std::move(symbols);
  return d;
}

std::optional<std::size_t> Domain::index_of(std::string_view symbol) const {
  for (std::size_t i = 0; i < symbols_.size(); ++i)
    if (symbols_[i] == symbol) return i;
  return std::nullopt;
}

bool Domain::contains(const DomainValue& v) const {
  if (is_real()) {
    const auto* r = std::get_if<Rational>(&v);
    return r && lo_ <= *r && *r <= hi_;
  }
  const auto* s = std::get_if<std::string>(&v);
  return s && index_of(*s).has_value();
}

std::string Domain::to_string() const {
  if (is_real()) return "real[" + plfc::to_string(lo_) + ", " + plfc::to_string(hi_) + "]";
  std::string out = "{";
  for (std::size_t i = 0; i < symbols_.size(); ++i) out += (i ? ", " : "") + symbols_[i];
  return out + "}";
}

bool operator==(const Domain& a, const Domain& b) {
  if (a.kind_ != b.kind_) return false;
  if (a.is_real()) return a.lo_ == b.lo_ && a.hi_ == b.hi_;
  return a.symbols_ == b.symbols_;
}

// ---------------------------------------------------------------------------
// Piecewise

namespace detail {

namespace {

std::size_t segment_containing(const Piecewise& f, const Rational& a, const Rational& b) {
  // (a, b) lies inside one segment of f; find it by the midpoint.
  Rational m = (a + b) / 2;
  auto it = std::upper_bound(f.xs.begin(), f.xs.end(), m);
  return static_cast<std::size_t>(std::distance(f.xs.begin(), it)) - 1;
}

Rational interpolate(const Piecewise& f, std::size_t seg, const Rational& u) {
  const Rational& x0 = f.xs[seg];
  const Rational& x1 = f.xs[seg + 1];
  return f.left[seg] + (f.right[seg] - f.left[seg]) * (u - x0) / (x1 - x0);
}

}  // namespace

Rational Piecewise::eval(const Rational& u) const {
  auto it = std::lower_bound(xs.begin(), xs.end(), u);
  if (it != xs.end() && *it == u) return at[static_cast<std::size_t>(it - xs.begin())];
  auto seg = static_cast<std::size_t>(it - xs.begin()) - 1;
  return interpolate(*this, seg, u);
}

void Piecewise::simplify() {
  std::size_t i = 1;
  while (i + 1 < xs.size()) {
    const Rational& x0 = xs[i - 1];
    const Rational& x1 = xs[i];
    const Rational& x2 = xs[i + 1];
    bool continuous = at[i] == right[i - 1] && at[i] == left[i];
    bool collinear = (right[i - 1] - left[i - 1]) * (x2 - x1) == (right[i] - left[i]) * (x1 - x0);
    if (continuous && collinear) {
      right[i - 1] = right[i];
      xs.erase(xs.begin() + static_cast<long>(i));
      at.erase(at.begin() + static_cast<long>(i));
      left.erase(left.begin() + static_cast<long>(i));
      right.erase(right.begin() + static_cast<long>(i));
    } else {
      ++i;
    }
  }
}

// Common refinement of f and g: every breakpoint of either, plus every interior crossing.
std::vector<Rational> refine(const Piecewise& f, const Piecewise& g) {
  std::vector<Rational> xs;
  std::merge(f.xs.begin(), f.xs.end(), g.xs.begin(), g.xs.end(), std::back_inserter(xs));
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<Rational> out;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const Rational& a = xs[i];
    const Rational& b = xs[i + 1];
    out.push_back(a);
    std::size_t fs = segment_containing(f, a, b);
    std::size_t gs = segment_containing(g, a, b);
    Rational da = interpolate(f, fs, a) - interpolate(g, gs, a);
    Rational db = interpolate(f, fs, b) - interpolate(g, gs, b);
    if (sgn(da) * sgn(db) < 0) out.push_back(a + (b - a) * da / (da - db));
  }
  out.push_back(xs.back());
  return out;
}

using PointOp = std::function<Rational(const Rational&, const Rational&)>;
// Maps (f limits, g limits) on a segment without interior crossings to result limits.
using SegmentOp = std::function<std::pair<Rational, Rational>(const Rational& fa, const Rational& fb,
                                                               const Rational& ga, const Rational& gb)>;

Piecewise zip(const Piecewise& f, const Piecewise& g, const PointOp& point, const SegmentOp& segment) {
  Piecewise r;
  r.xs = refine(f, g);
  for (const auto& x : r.xs) r.at.push_back(point(f.eval(x), g.eval(x)));
  for (std::size_t i = 0; i + 1 < r.xs.size(); ++i) {
    const Rational& a = r.xs[i];
    const Rational& b = r.xs[i + 1];
    std::size_t fs = segment_containing(f, a, b);
    std::size_t gs = segment_containing(g, a, b);
    auto [ra, rb] = segment(interpolate(f, fs, a), interpolate(f, fs, b), interpolate(g, gs, a),
                            interpolate(g, gs, b));
    r.left.push_back(std::move(ra));
    r.right.push_back(std::move(rb));
  }
  r.simplify();
  return r;
}

Piecewise constant_piecewise(const Rational& lo, const Rational& hi, const Rational& v) {
  return Piecewise{{lo, hi}, {v, v}, {v}, {v}};
}

Rational inf_of(const Piecewise& f) {
  Rational m = f.at.front();
  for (const auto& v : f.at) m = std::min(m, v);
  for (const auto& v : f.left) m = std::min(m, v);
  for (const auto& v : f.right) m = std::min(m, v);
  return m;
}

Rational sup_of(const Piecewise& f) {
  Rational m = f.at.front();
  for (const auto& v : f.at) m = std::max(m, v);
  for (const auto& v : f.left) m = std::max(m, v);
  for (const auto& v : f.right) m = std::max(m, v);
  return m;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// FuzzySet construction

namespace {

using detail::Piecewise;

void require_real(const DomainPtr& d, const char* what) {
  if (!d || !d->is_real()) throw DomainError(std::string(what) + " requires a real-interval domain");
}

void require_finite(const DomainPtr& d, const char* what) {
  if (!d || !d->is_finite()) throw DomainError(std::string(what) + " requires a finite domain");
}

void require_same_domain(const FuzzySet& a, const FuzzySet& b) {
  if (!(*a.domain() == *b.domain())) throw DomainError("fuzzy sets live on different domains");
}

std::vector<Rational> sorted_points(const Domain& d, std::initializer_list<Rational> inner) {
  std::vector<Rational> xs{d.lo(), d.hi()};
  for (const auto& r : inner) {
    if (r < d.lo() || r > d.hi())
      throw DomainError("breakpoint " + to_string(r) + " outside domain " + d.to_string());
    xs.push_back(r);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

// Builds a piecewise function from a point formula and an open-interval formula.
// `open_value(u, m)` evaluates at u the linear formula valid on the open segment containing m.
Piecewise tabulate(std::vector<Rational> xs, const std::function<Rational(const Rational&)>& point,
                   const std::function<Rational(const Rational&, const Rational&)>& open_value) {
  Piecewise p;
  p.xs = std::move(xs);
  for (const auto& x : p.xs) p.at.push_back(point(x));
  for (std::size_t i = 0; i + 1 < p.xs.size(); ++i) {
    Rational m = (p.xs[i] + p.xs[i + 1]) / 2;
    p.left.push_back(open_value(p.xs[i], m));
    p.right.push_back(open_value(p.xs[i + 1], m));
  }
  p.simplify();
  return p;
}

std::string describe_piecewise(const Piecewise& p) {
  std::ostringstream os;
  os << "pwl{";
  for (std::size_t i = 0; i < p.xs.size(); ++i) {
    os << to_string(p.xs[i]) << ":" << to_string(p.at[i]);
    if (i + 1 < p.xs.size()) os << " (" << to_string(p.left[i]) << ".." << to_string(p.right[i]) << ") ";
  }
  os << "}";
  return os.str();
}

}  // namespace

FuzzySet FuzzySet::from_table(DomainPtr domain, std::vector<Rational> table) {
  require_finite(domain, "tabulated fuzzy set");
  if (table.size() != domain->size()) throw DomainError("table size does not match domain");
  FuzzySet s;
  s.domain_ = std::move(domain);
  s.table_ = std::move(table);
  return s;
}

FuzzySet FuzzySet::from_piecewise(DomainPtr domain, Piecewise pl) {
  require_real(domain, "piecewise fuzzy set");
  pl.simplify();
  FuzzySet s;
  s.domain_ = std::move(domain);
  s.pl_ = std::move(pl);
  return s;
}

FuzzySet FuzzySet::trapezoid(DomainPtr domain, Rational t1, Rational t2, Rational t3, Rational t4) {
  require_real(domain, "trapezoid");
  if (!(t1 <= t2 && t2 <= t3 && t3 <= t4)) throw DomainError("trapezoid requires t1 <= t2 <= t3 <= t4");
  auto xs = sorted_points(*domain, {t1, t2, t3, t4});
  auto point = [&](const Rational& x) -> Rational {
    if (t2 <= x && x <= t3) return 1;
    if (t1 < x && x < t2) return (x - t1) / (t2 - t1);
    if (t3 < x && x < t4) return (t4 - x) / (t4 - t3);
    return 0;
  };
  auto open_value = [&](const Rational& u, const Rational& m) -> Rational {
    if (t1 < m && m < t2) return (u - t1) / (t2 - t1);
    if (t2 <= m && m <= t3) return 1;
    if (t3 < m && m < t4) return (t4 - u) / (t4 - t3);
    return 0;
  };
  FuzzySet s = from_piecewise(domain, tabulate(std::move(xs), point, open_value));
  s.shape_ = Trapezoid{t1, t2, t3, t4};
  return s;
}

FuzzySet FuzzySet::discrete(DomainPtr domain, std::vector<std::pair<std::string, Degree>> entries) {
  require_finite(domain, "discrete fuzzy set");
  std::vector<Rational> table(domain->size(), Rational(0));
  std::set<std::string> seen;
  for (const auto& [sym, deg] : entries) {
    auto idx = domain->index_of(sym);
    if (!idx) throw DomainError("symbol '" + sym + "' not in domain " + domain->to_string());
    if (!seen.insert(sym).second) throw DomainError("symbol '" + sym + "' listed twice");
    table[*idx] = deg.value();
  }
  FuzzySet s = from_table(domain, std::move(table));
  s.shape_ = Discrete{std::move(entries)};
  return s;
}

FuzzySet FuzzySet::constant(DomainPtr domain, Degree level) {
  FuzzySet s;
  if (domain->is_real()) {
    s = from_piecewise(domain, detail::constant_piecewise(domain->lo(), domain->hi(), level.value()));
  } else {
    s = from_table(domain, std::vector<Rational>(domain->size(), level.value()));
  }
  s.shape_ = Constant{level};
  return s;
}

FuzzySet FuzzySet::crisp_interval(DomainPtr domain, Rational lo, Rational hi, bool lo_open, bool hi_open) {
  require_real(domain, "crisp interval");
  if (hi < lo) throw DomainError("crisp interval requires lo <= hi");
  auto xs = sorted_points(*domain, {lo, hi});
  auto point = [&](const Rational& x) -> Rational {
    if (x == lo) return lo_open ? 0 : 1;
    if (x == hi) return hi_open ? 0 : 1;
    return (lo < x && x < hi) ? 1 : 0;
  };
  auto open_value = [&](const Rational&, const Rational& m) -> Rational { return (lo < m && m < hi) ? 1 : 0; };
  FuzzySet s = from_piecewise(domain, tabulate(std::move(xs), point, open_value));
  s.shape_ = CrispInterval{lo, hi, lo_open, hi_open};
  return s;
}

FuzzySet FuzzySet::crisp_finite(DomainPtr domain, std::vector<std::string> members) {
  require_finite(domain, "crisp finite set");
  std::vector<Rational> table(domain->size(), Rational(0));
  for (const auto& m : members) {
    auto idx = domain->index_of(m);
    if (!idx) throw DomainError("symbol '" + m + "' not in domain " + domain->to_string());
    table[*idx] = 1;
  }
  FuzzySet s = from_table(domain, std::move(table));
  s.shape_ = CrispFinite{std::move(members)};
  return s;
}

FuzzySet FuzzySet::singleton(DomainPtr domain, const DomainValue& v) {
  if (!domain->contains(v)) throw DomainError("value " + to_string(v) + " outside domain " + domain->to_string());
  if (domain->is_finite()) return crisp_finite(domain, {std::get<std::string>(v)});
  const auto& r = std::get<Rational>(v);
  return crisp_interval(domain, r, r, false, false);
}

// ---------------------------------------------------------------------------
// Queries

Degree FuzzySet::membership(const DomainValue& u) const {
  if (!domain_->contains(u))
    throw DomainError("value " + to_string(u) + " outside domain " + domain_->to_string());
  if (domain_->is_finite()) return Degree(table_[*domain_->index_of(std::get<std::string>(u))]);
  return Degree(pl_.eval(std::get<Rational>(u)));
}

Degree FuzzySet::height() const {
  if (domain_->is_finite()) return Degree(*std::max_element(table_.begin(), table_.end()));
  return Degree(detail::sup_of(pl_));
}

Degree FuzzySet::infimum() const {
  if (domain_->is_finite()) return Degree(*std::min_element(table_.begin(), table_.end()));
  return Degree(detail::inf_of(pl_));
}

bool FuzzySet::is_crisp() const {
  auto crisp = [](const Rational& v) { return sgn(v) == 0 || v == 1; };
  if (domain_->is_finite()) return std::all_of(table_.begin(), table_.end(), crisp);
  if (!std::all_of(pl_.at.begin(), pl_.at.end(), crisp)) return false;
  for (std::size_t i = 0; i < pl_.left.size(); ++i)
    if (pl_.left[i] != pl_.right[i] || !crisp(pl_.left[i])) return false;
  return true;
}

std::string FuzzySet::describe() const {
  struct Visitor {
    const FuzzySet& self;
    std::string operator()(const Trapezoid& t) const {
      return "trap(" + to_string(t.t1) + ", " + to_string(t.t2) + ", " + to_string(t.t3) + ", " +
             to_string(t.t4) + ")";
    }
    std::string operator()(const Discrete& d) const {
      std::string out = "discrete{";
      for (std::size_t i = 0; i < d.entries.size(); ++i)
        out += (i ? ", " : "") + d.entries[i].first + ": " + to_string(d.entries[i].second);
      return out + "}";
    }
    std::string operator()(const Constant& c) const { return "const(" + to_string(c.level) + ")"; }
    std::string operator()(const CrispInterval& c) const {
      return std::string("interval") + (c.lo_open ? "(" : "[") + to_string(c.lo) + ", " + to_string(c.hi) +
             (c.hi_open ? ")" : "]");
    }
    std::string operator()(const CrispFinite& c) const {
      std::string out = "set{";
      for (std::size_t i = 0; i < c.members.size(); ++i) out += (i ? ", " : "") + c.members[i];
      return out + "}";
    }
    std::string operator()(const Derived&) const {
      if (self.domain_->is_real()) return describe_piecewise(self.pl_);
      std::string out = "discrete{";
      bool first = true;
      for (std::size_t i = 0; i < self.table_.size(); ++i) {
        if (sgn(self.table_[i]) == 0) continue;
        out += (first ? "" : ", ") + self.domain_->symbols()[i] + ": " + to_string(self.table_[i]);
        first = false;
      }
      return out + "}";
    }
  };
  return std::visit(Visitor{*this}, shape_);
}

bool operator==(const FuzzySet& a, const FuzzySet& b) {
  if (!(*a.domain_ == *b.domain_)) return false;
  if (a.domain_->is_finite()) return a.table_ == b.table_;
  return a.pl_ == b.pl_;
}

// ---------------------------------------------------------------------------
// Operations

namespace {

FuzzySet pointwise(const FuzzySet& a, const FuzzySet& b, const detail::PointOp& point,
                   const detail::SegmentOp& segment) {
  require_same_domain(a, b);
  if (a.domain()->is_finite()) {
    std::vector<Rational> t(a.table().size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = point(a.table()[i], b.table()[i]);
    return FuzzySet::from_table(a.domain(), std::move(t));
  }
  return FuzzySet::from_piecewise(a.domain(), detail::zip(a.piecewise(), b.piecewise(), point, segment));
}

Rational rmin(const Rational& x, const Rational& y) { return y < x ? y : x; }
Rational rmax(const Rational& x, const Rational& y) { return x < y ? y : x; }

// {x : mu(x) >= alpha} (or > alpha when strict).
CrispSet threshold(const FuzzySet& a, const Rational& alpha, bool strict) {
  auto passes = [&](const Rational& v) { return strict ? v > alpha : v >= alpha; };
  FuzzySet level = FuzzySet::constant(a.domain(), Degree(alpha));
  return pointwise(
      a, level, [&](const Rational& v, const Rational&) -> Rational { return passes(v) ? 1 : 0; },
      [&](const Rational& fa, const Rational& fb, const Rational&, const Rational&) {
        Rational v = passes((fa + fb) / 2) ? 1 : 0;
        return std::pair{v, v};
      });
}

}  // namespace

CrispSet alpha_cut(const FuzzySet& a, const Degree& alpha) {
  if (alpha.is_zero()) return FuzzySet::constant(a.domain(), Degree::one());
  return threshold(a, alpha.value(), false);
}

CrispSet support(const FuzzySet& a) { return threshold(a, Rational(0), true); }

CrispSet core(const FuzzySet& a) { return threshold(a, Rational(1), false); }

FuzzySet min_fs(const FuzzySet& a, const FuzzySet& b) {
  return pointwise(a, b, rmin, [](const Rational& fa, const Rational& fb, const Rational& ga, const Rational& gb) {
    return std::pair{rmin(fa, ga), rmin(fb, gb)};
  });
}

FuzzySet max_fs(const FuzzySet& a, const FuzzySet& b) {
  return pointwise(a, b, rmax, [](const Rational& fa, const Rational& fb, const Rational& ga, const Rational& gb) {
    return std::pair{rmax(fa, ga), rmax(fb, gb)};
  });
}

FuzzySet complement(const FuzzySet& a) {
  if (a.domain()->is_finite()) {
    std::vector<Rational> t;
    for (const auto& v : a.table()) t.push_back(Rational(1) - v);
    return FuzzySet::from_table(a.domain(), std::move(t));
  }
  detail::Piecewise p = a.piecewise();
  for (auto* vec : {&p.at, &p.left, &p.right})
    for (auto& v : *vec) v = Rational(1) - v;
  return FuzzySet::from_piecewise(a.domain(), std::move(p));
}

Degree necessity(const FuzzySet& a, const FuzzySet& b) { return max_fs(complement(b), a).infimum(); }

Degree possibility(const FuzzySet& a, const FuzzySet& c) { return min_fs(a, c).height(); }

Degree goedel_reciprocal_necessity(const FuzzySet& a, const FuzzySet& b) {
  // Pointwise mu_B => mu_A; the relation mu_B <= mu_A is constant inside each refined segment.
  auto implies = [](const Rational& x, const Rational& y) -> Rational { return x <= y ? Rational(1) : Rational(1) - x; };
  FuzzySet r = pointwise(b, a, implies, [](const Rational& ba, const Rational& bb, const Rational& aa, const Rational& ab) {
    if ((ba + bb) <= (aa + ab)) return std::pair{Rational(1), Rational(1)};
    return std::pair<Rational, Rational>{Rational(1) - ba, Rational(1) - bb};
  });
  return r.infimum();
}

bool subset_of(const FuzzySet& a, const FuzzySet& b) { return max_fs(a, b) == b; }

}  // namespace plfc

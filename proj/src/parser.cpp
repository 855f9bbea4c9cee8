#include "plfc/parser.hpp"

#include <cctype>
#include "json.hpp"

namespace plfc {

ParseError::ParseError(std::string message, SourceSpan span)
    : Error(span.file + ":" + std::to_string(span.line) + ":" + std::to_string(span.column) + ": " + message),
      message_(std::move(message)),
      span_(std::move(span)) {}

std::string ParseError::to_json() const {
  nlohmann::json j = {{"severity", "error"},       {"file", span_.file},         {"line", span_.line},
                      {"column", span_.column},    {"end_line", span_.end_line}, {"end_column", span_.end_column},
                      {"message", message_}};
  return j.dump();
}

namespace {

struct Token {
  enum class Kind { Ident, Number, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 1;
  int column = 1;
  int end_column = 1;
};

class Lexer {
 public:
  Lexer(std::string_view text, std::string file) : text_(text), file_(std::move(file)) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token t;
      t.line = line_;
      t.column = col_;
      if (pos_ >= text_.size()) {
        t.kind = Token::Kind::End;
        t.end_column = col_;
        out.push_back(t);
        return out;
      }
      char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Token::Kind::Ident;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
          t.text += advance();
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 (c == '-' && pos_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
        t.kind = Token::Kind::Number;
        if (c == '-') t.text += advance();
        digits(t.text);
        if (pos_ + 1 < text_.size() && (text_[pos_] == '/' || text_[pos_] == '.') &&
            std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
          t.text += advance();
          digits(t.text);
        }
      } else if (auto sym = utf8_symbol()) {
        t.kind = *sym == "bot" ? Token::Kind::Ident : Token::Kind::Punct;
        t.text = *sym;
      } else if (std::string_view("()[]{},|~@>:=&").find(c) != std::string_view::npos) {
        t.kind = Token::Kind::Punct;
        t.text = std::string(1, advance());
      } else {
        throw ParseError(std::string("unexpected character '") + c + "'", {file_, line_, col_, line_, col_ + 1});
      }
      t.end_column = col_;
      out.push_back(t);
    }
  }

 private:
  std::string_view text_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void digits(std::string& out) {
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) out += advance();
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  // Non-ASCII spellings of connectives.
  std::optional<std::string> utf8_symbol() {
    static const std::pair<std::string_view, std::string_view> table[] = {
        {"\xC2\xAC", "~"}, {"\xE2\x88\xA8", "|"}, {"\xE2\x88\xA7", "&"}, {"\xE2\x8A\xA5", "bot"}};
    for (const auto& [utf8, ascii] : table) {
      if (text_.substr(pos_, utf8.size()) == utf8) {
        pos_ += utf8.size();
        ++col_;
        return std::string(ascii);
      }
    }
    return std::nullopt;
  }
};

const std::set<std::string>& reserved_words() {
  static const std::set<std::string> words{"min", "max", "bot", "query"};
  return words;
}

class Parser {
 public:
  Parser(std::string_view text, std::string file, Signature& sig, bool strict = true)
      : file_(std::move(file)), toks_(Lexer(text, file_).run()), sig_(sig), strict_(strict) {}

  Document document() {
    Document doc;
    while (!at_end()) {
      const Token& t = peek();
      if (is_word("sort")) {
        sort_decl();
      } else if (is_word("const")) {
        const_decl();
      } else if (is_word("fuzzy")) {
        fuzzy_decl();
      } else if (is_word("pred")) {
        pred_decl();
      } else if (is_word("oracle")) {
        if (doc.oracle) fail("duplicate oracle block", t);
        doc.oracle = oracle_block();
      } else if (is_word("query")) {
        next();
        doc.queries.push_back(clause());
      } else if (is_punct("(")) {
        doc.kb.clauses.push_back(clause());
      } else {
        fail("expected a declaration, clause, query or oracle block", t);
      }
    }
    doc.kb.signature = sig_;
    return doc;
  }

  Clause single_clause(bool allow_query_keyword) {
    if (allow_query_keyword && is_word("query")) next();
    Clause c = clause();
    if (!at_end()) fail("unexpected trailing input", peek());
    return c;
  }

 private:
  std::string file_;
  std::vector<Token> toks_;
  std::size_t i_ = 0;
  Signature& sig_;
  bool strict_ = true;

  // Token helpers -------------------------------------------------------------

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(i_ + k, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == Token::Kind::End; }
  const Token& next() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }
  bool is_word(std::string_view w, std::size_t k = 0) const {
    return peek(k).kind == Token::Kind::Ident && peek(k).text == w;
  }
  bool is_punct(std::string_view p, std::size_t k = 0) const {
    return peek(k).kind == Token::Kind::Punct && peek(k).text == p;
  }

  SourceSpan span(const Token& t) const { return {file_, t.line, t.column, t.line, std::max(t.end_column, t.column + 1)}; }

  [[noreturn]] void fail(const std::string& msg, const Token& t) const { throw ParseError(msg, span(t)); }

  std::string describe(const Token& t) const {
    if (t.kind == Token::Kind::End) return "end of input";
    return "'" + t.text + "'";
  }

  const Token& expect_punct(std::string_view p) {
    if (!is_punct(p)) fail("expected '" + std::string(p) + "', found " + describe(peek()), peek());
    return next();
  }

  const Token& expect_word(std::string_view w) {
    if (!is_word(w)) fail("expected '" + std::string(w) + "', found " + describe(peek()), peek());
    return next();
  }

  const Token& expect_ident(const char* what) {
    if (peek().kind != Token::Kind::Ident) fail(std::string("expected ") + what + ", found " + describe(peek()), peek());
    return next();
  }

  Rational number() {
    const Token& t = peek();
    if (t.kind != Token::Kind::Number) fail("expected a number, found " + describe(t), t);
    next();
    try {
      return parse_rational(t.text);
    } catch (const std::invalid_argument& e) {
      fail(e.what(), t);
    }
  }

  Degree degree() {
    const Token& t = peek();
    Rational r = number();
    if (sgn(r) < 0 || r > 1) fail("degree " + to_string(r) + " outside [0, 1]", t);
    return Degree(r);
  }

  // Symbol of a finite domain: identifier or integer.
  std::string symbol() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Ident || t.kind == Token::Kind::Number) return next().text;
    fail("expected a domain symbol, found " + describe(t), t);
  }

  void declare_fresh(const Token& name) {
    if (sig_.constant(name.text) || sig_.fuzzy(name.text)) fail("name '" + name.text + "' already declared", name);
    if (reserved_words().count(name.text)) fail("'" + name.text + "' is a reserved word", name);
  }

  const SortDecl& known_sort(const Token& t) {
    const auto* s = sig_.sort(t.text);
    if (!s) fail("unknown sort '" + t.text + "'", t);
    return *s;
  }

  // Declarations ----------------------------------------------------------------

  void sort_decl() {
    next();
    const Token& name = expect_ident("sort name");
    if (sig_.sort(name.text)) fail("sort '" + name.text + "' already declared", name);
    expect_punct("=");
    DomainPtr d;
    if (is_word("real")) {
      next();
      const Token& open = expect_punct("[");
      Rational lo = number();
      expect_punct(",");
      Rational hi = number();
      expect_punct("]");
      if (!(lo < hi)) fail("real interval requires lo < hi", open);
      d = Domain::real_interval(lo, hi);
    } else {
      const Token& open = expect_punct("{");
      std::vector<std::string> syms;
      std::set<std::string> seen;
      do {
        const Token& st = peek();
        syms.push_back(symbol());
        if (!seen.insert(syms.back()).second) fail("symbol '" + syms.back() + "' listed twice", st);
      } while (is_punct(",") && (next(), true));
      expect_punct("}");
      if (syms.empty()) fail("finite sort needs at least one symbol", open);
      d = Domain::finite(std::move(syms));
    }
    sig_.add_sort({name.text, d});
  }

  DomainValue domain_value(const SortDecl& s) {
    const Token& t = peek();
    if (s.domain->is_real()) {
      Rational r = number();
      if (!s.domain->contains(r)) fail("value " + to_string(r) + " outside sort '" + s.name + "'", t);
      return r;
    }
    std::string sym = symbol();
    if (!s.domain->index_of(sym)) fail("symbol '" + sym + "' not in sort '" + s.name + "'", t);
    return sym;
  }

  void const_decl() {
    next();
    const Token& name = expect_ident("constant name");
    declare_fresh(name);
    expect_punct(":");
    const SortDecl& s = known_sort(expect_ident("sort name"));
    expect_punct("=");
    DomainValue v = domain_value(s);
    for (const auto& c : sig_.constants())
      if (c.sort == s.name && c.value == v)
        fail("constants '" + c.name + "' and '" + name.text + "' would denote the same element", name);
    sig_.add_constant({name.text, s.name, v});
  }

  void fuzzy_decl() {
    next();
    const Token& name = expect_ident("fuzzy constant name");
    declare_fresh(name);
    expect_punct(":");
    const SortDecl& s = known_sort(expect_ident("sort name"));
    expect_punct("=");
    const Token& shape = expect_ident("shape (trap, discrete, const, interval, set)");
    try {
      FuzzySet set = make_shape(shape, s);
      sig_.add_fuzzy({name.text, s.name, std::make_shared<const FuzzySet>(std::move(set))});
    } catch (const DomainError& e) {
      fail(e.what(), shape);
    }
  }

  FuzzySet make_shape(const Token& shape, const SortDecl& s) {
    const auto& d = s.domain;
    if (shape.text == "trap") {
      expect_punct("(");
      Rational t[4];
      for (int k = 0; k < 4; ++k) {
        if (k) expect_punct(",");
        t[k] = number();
      }
      expect_punct(")");
      return FuzzySet::trapezoid(d, t[0], t[1], t[2], t[3]);
    }
    if (shape.text == "discrete") {
      expect_punct("{");
      std::vector<std::pair<std::string, Degree>> entries;
      if (!is_punct("}")) {
        do {
          std::string sym = symbol();
          expect_punct(":");
          entries.emplace_back(sym, degree());
        } while (is_punct(",") && (next(), true));
      }
      expect_punct("}");
      return FuzzySet::discrete(d, std::move(entries));
    }
    if (shape.text == "const") {
      expect_punct("(");
      Degree level = degree();
      expect_punct(")");
      return FuzzySet::constant(d, level);
    }
    if (shape.text == "interval") {
      bool lo_open = is_punct("(");
      if (!lo_open) expect_punct("[");
      else next();
      Rational lo = number();
      expect_punct(",");
      Rational hi = number();
      bool hi_open = is_punct(")");
      if (!hi_open) expect_punct("]");
      else next();
      return FuzzySet::crisp_interval(d, lo, hi, lo_open, hi_open);
    }
    if (shape.text == "set") {
      expect_punct("{");
      std::vector<std::string> members;
      if (!is_punct("}")) {
        do members.push_back(symbol());
        while (is_punct(",") && (next(), true));
      }
      expect_punct("}");
      return FuzzySet::crisp_finite(d, std::move(members));
    }
    fail("unknown shape '" + shape.text + "'", shape);
  }

  void pred_decl() {
    next();
    const Token& name = expect_ident("predicate name");
    if (sig_.predicate(name.text)) fail("predicate '" + name.text + "' already declared", name);
    PredicateDecl p{name.text, {}, {}};
    // The argument list starts on the declaration's line; a '(' below it opens a clause.
    if (is_punct("(") && peek().line == name.line) {
      next();
      if (!is_punct(")")) {
        do {
          const SortDecl& s = known_sort(expect_ident("sort name"));
          p.sorts.push_back(s.name);
          bool ext = is_punct("~");
          if (ext) next();
          p.extended.push_back(ext);
        } while (is_punct(",") && (next(), true));
      }
      expect_punct(")");
    }
    sig_.add_predicate(std::move(p));
  }

  OracleBlock oracle_block() {
    next();
    expect_punct("{");
    OracleBlock block;
    while (!is_punct("}")) {
      const Token& t = peek();
      if (is_word("grid")) {
        next();
        const Token& sname = expect_ident("sort name");
        const SortDecl& s = known_sort(sname);
        if (!s.domain->is_real()) fail("grids apply to real sorts only", sname);
        expect_punct("=");
        expect_punct("{");
        std::vector<Rational> pts;
        if (!is_punct("}")) {
          do {
            const Token& pt = peek();
            pts.push_back(number());
            if (!s.domain->contains(pts.back())) fail("grid point outside sort '" + s.name + "'", pt);
          } while (is_punct(",") && (next(), true));
        }
        expect_punct("}");
        block.grids[s.name] = std::move(pts);
      } else if (is_word("normalized")) {
        next();
        block.normalized = true;
      } else if (is_word("limit")) {
        next();
        const Token& n = peek();
        Rational r = number();
        if (r.get_den() != 1 || sgn(r) <= 0) fail("limit must be a positive integer", n);
        block.limit = r.get_num().get_ui();
      } else {
        fail("expected 'grid', 'normalized', 'limit' or '}', found " + describe(t), t);
      }
    }
    expect_punct("}");
    return block;
  }

  // Clauses -----------------------------------------------------------------------

  Clause clause() {
    const Token& open = expect_punct("(");
    Clause c;
    if (is_word("bot")) {
      next();
    } else {
      c.literals.push_back(literal());
      while (is_punct("|") || is_punct("&")) {
        if (is_punct("&")) fail("unsupported query form: conjunctions are not clauses", peek());
        next();
        c.literals.push_back(literal());
      }
    }
    expect_punct(",");
    c.weight = weight();
    expect_punct(")");
    auto problems = check_clause(c, sig_, strict_);
    if (!problems.empty()) fail(problems.front(), open);
    return c;
  }

  Literal literal() {
    Literal l;
    if (is_punct("~")) {
      next();
      l.positive = false;
    }
    const Token& name = expect_ident("predicate");
    const auto* p = sig_.predicate(name.text);
    if (!p) fail("unknown predicate '" + name.text + "'", name);
    l.predicate = p->name;
    if (is_punct("(")) {
      next();
      if (!is_punct(")")) {
        do {
          const Token& at = peek();
          if (l.args.size() >= p->arity())
            fail("predicate '" + p->name + "' expects " + std::to_string(p->arity()) + " arguments", at);
          l.args.push_back(term(p->sorts[l.args.size()]));
        } while (is_punct(",") && (next(), true));
      }
      expect_punct(")");
    }
    if (l.args.size() != p->arity())
      fail("predicate '" + p->name + "' expects " + std::to_string(p->arity()) + " arguments, got " +
               std::to_string(l.args.size()),
           name);
    return l;
  }

  Term term(const std::string& sort_name) {
    const Token& t = peek();
    const SortDecl& s = *sig_.sort(sort_name);
    if (is_punct("[")) {
      next();
      const Token& fname = expect_ident("fuzzy constant");
      const auto* f = sig_.fuzzy(fname.text);
      if (!f) fail("unknown fuzzy constant '" + fname.text + "'", fname);
      if (f->sort != sort_name) fail("'" + fname.text + "' has sort '" + f->sort + "', expected '" + sort_name + "'", fname);
      Term out;
      if (is_punct("@")) {
        next();
        out = Term::cut(f->name, f->sort, std::make_shared<const WeightExpr>(weight()));
      } else if (is_punct(">")) {
        next();
        const Token& zero = peek();
        if (zero.kind != Token::Kind::Number || parse_rational(zero.text) != 0) fail("expected '0' after '>'", zero);
        next();
        out = Term::support(f->name, f->sort);
      } else {
        fail("expected '@' or '>0' in bracketed term", peek());
      }
      expect_punct("]");
      return out;
    }
    if (t.kind == Token::Kind::Number) {
      next();
      if (s.domain->is_real()) {
        Rational r = parse_rational(t.text);
        if (!s.domain->contains(r)) fail("value " + to_string(r) + " outside sort '" + s.name + "'", t);
        return sig_.precise_term(s.name, r);
      }
      if (!s.domain->index_of(t.text)) fail("symbol '" + t.text + "' not in sort '" + s.name + "'", t);
      return sig_.precise_term(s.name, t.text);
    }
    if (t.kind != Token::Kind::Ident) fail("expected a term, found " + describe(t), t);
    next();
    if (const auto* c = sig_.constant(t.text)) {
      if (c->sort != sort_name) fail("constant '" + t.text + "' has sort '" + c->sort + "', expected '" + sort_name + "'", t);
      return Term::precise(c->name, c->sort, c->value);
    }
    if (const auto* f = sig_.fuzzy(t.text)) {
      if (f->sort != sort_name) fail("'" + t.text + "' has sort '" + f->sort + "', expected '" + sort_name + "'", t);
      return f->set->is_crisp() ? Term::imprecise(f->name, f->sort) : Term::fuzzy(f->name, f->sort);
    }
    if (s.domain->is_finite() && s.domain->index_of(t.text)) return sig_.precise_term(s.name, t.text);
    if (reserved_words().count(t.text)) fail("'" + t.text + "' is a reserved word", t);
    return Term::variable(t.text, sort_name);
  }

  WeightExpr weight() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Number) return WeightExpr::constant(degree());
    if (t.kind != Token::Kind::Ident) fail("expected a weight, found " + describe(t), t);
    if (t.text == "min" || t.text == "max") {
      next();
      expect_punct("(");
      std::vector<WeightExpr> args;
      do args.push_back(weight());
      while (is_punct(",") && (next(), true));
      expect_punct(")");
      return t.text == "min" ? WeightExpr::min(std::move(args)) : WeightExpr::max(std::move(args));
    }
    const auto* f = sig_.fuzzy(t.text);
    if (!f) fail("unknown fuzzy set '" + t.text + "' in weight", t);
    next();
    if (!is_punct("(")) fail("fuzzy set '" + t.text + "' in a weight needs an argument", t);
    next();
    Term arg = term(f->sort);
    expect_punct(")");
    return WeightExpr::mem(f->name, std::move(arg));
  }
};

}  // namespace

Document parse_document(std::string_view text, const std::string& file) {
  Signature sig;
  Parser p(text, file, sig);
  return p.document();
}

KnowledgeBase parse_kb(std::string_view text, const std::string& file) { return parse_document(text, file).kb; }

Clause parse_clause(std::string_view text, const Signature& sig, const std::string& file, bool strict) {
  Signature copy = sig;
  Parser p(text, file, copy, strict);
  return p.single_clause(false);
}

Query parse_query(std::string_view text, const Signature& sig, const std::string& file) {
  Signature copy = sig;
  Parser p(text, file, copy);
  Clause c = p.single_clause(true);
  try {
    return classify_query(c, sig);
  } catch (const Error& e) {
    throw ParseError(e.what(), {file, 1, 1, 1, 2});
  }
}

// ---------------------------------------------------------------------------
// Formatting

std::string format_signature(const Signature& sig) {
  std::string out;
  for (const auto& s : sig.sorts()) out += "sort " + s.name + " = " + s.domain->to_string() + "\n";
  for (const auto& c : sig.constants()) out += "const " + c.name + " : " + c.sort + " = " + to_string(c.value) + "\n";
  for (const auto& f : sig.fuzzies()) out += "fuzzy " + f.name + " : " + f.sort + " = " + f.set->describe() + "\n";
  for (const auto& p : sig.predicates()) {
    out += "pred " + p.name;
    if (!p.sorts.empty()) {
      out += "(";
      for (std::size_t i = 0; i < p.sorts.size(); ++i) out += (i ? ", " : "") + p.sorts[i] + (p.extended[i] ? "~" : "");
      out += ")";
    }
    out += "\n";
  }
  return out;
}

std::string format_clause(const Clause& c) { return to_string(c); }

std::string format_kb(const KnowledgeBase& kb) {
  std::string out = format_signature(kb.signature);
  if (!kb.clauses.empty()) out += "\n";
  for (const auto& c : kb.clauses) out += format_clause(c) + "\n";
  return out;
}

std::string format_document(const Document& doc) {
  std::string out = format_kb(doc.kb);
  if (!doc.queries.empty()) out += "\n";
  for (const auto& q : doc.queries) out += "query " + format_clause(q) + "\n";
  if (doc.oracle) {
    out += "\noracle {\n";
    for (const auto& [sort, pts] : doc.oracle->grids) {
      out += "  grid " + sort + " = {";
      for (std::size_t i = 0; i < pts.size(); ++i) out += (i ? ", " : "") + to_string(pts[i]);
      out += "}\n";
    }
    if (doc.oracle->normalized) out += "  normalized\n";
    if (doc.oracle->limit) out += "  limit " + std::to_string(*doc.oracle->limit) + "\n";
    out += "}\n";
  }
  return out;
}

}  // namespace plfc

#pragma once

#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include "plfc/parser.hpp"

namespace plfc {

inline void PrintTo(const Term& t, std::ostream* os) { *os << to_string(t); }
inline void PrintTo(const WeightExpr& w, std::ostream* os) { *os << to_string(w); }
inline void PrintTo(const Literal& l, std::ostream* os) { *os << to_string(l); }
inline void PrintTo(const Clause& c, std::ostream* os) { *os << to_string(c); }

}  // namespace plfc

namespace plfc::testing {

inline std::string fixture_path(const std::string& name) { return std::string(PLFC_FIXTURE_DIR) + "/" + name; }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline Document fixture(const std::string& name) { return parse_document(read_text(fixture_path(name)), name); }

/// Parses a clause against `kb`, allowing derived forms at basic positions.
inline Clause clause(const KnowledgeBase& kb, const std::string& text) {
  return parse_clause(text, kb.signature, "<test>", false);
}

inline Rational q(long n, long d = 1) { return Rational(n, d); }

}  // namespace plfc::testing

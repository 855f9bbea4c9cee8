#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plfc/error.hpp"
#include "plfc/language.hpp"
#include "plfc/query.hpp"

namespace plfc {

struct SourceSpan {
  std::string file;
  int line = 1;
  int column = 1;
  int end_line = 1;
  int end_column = 1;
};

class ParseError : public Error {
 public:
  ParseError(std::string message, SourceSpan span);

  const std::string& message() const { return message_; }
  const SourceSpan& span() const { return span_; }
  /// One-line JSON object: {"severity":"error","file":..,"line":..,"column":..,"message":..}.
  std::string to_json() const;

 private:
  std::string message_;
  SourceSpan span_;
};

/// `oracle { ... }` block of a scenario file.
struct OracleBlock {
  std::map<std::string, std::vector<Rational>> grids;
  bool normalized = false;
  std::optional<std::uint64_t> limit;

  friend bool operator==(const OracleBlock&, const OracleBlock&) = default;
};

/// Everything a KB file may hold.
struct Document {
  KnowledgeBase kb;
  std::optional<OracleBlock> oracle;
  std::vector<Clause> queries;
};

Document parse_document(std::string_view text, const std::string& file = "<input>");
KnowledgeBase parse_kb(std::string_view text, const std::string& file = "<input>");

/// Parses one clause against an existing signature. With `strict` off, imprecise terms may sit at
/// basic-sort positions (derived clauses).
Clause parse_clause(std::string_view text, const Signature& sig, const std::string& file = "<clause>",
                    bool strict = true);

/// Accepts an optional leading `query` keyword.
Query parse_query(std::string_view text, const Signature& sig, const std::string& file = "<query>");

std::string format_signature(const Signature& sig);
std::string format_kb(const KnowledgeBase& kb);
std::string format_document(const Document& doc);
std::string format_clause(const Clause& c);

}  // namespace plfc

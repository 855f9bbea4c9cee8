#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "plfc/language.hpp"
#include "plfc/query.hpp"
#include "plfc/substitution.hpp"

namespace plfc {

struct RefuteOptions {
  std::size_t max_steps = 10000;
  std::size_t max_depth = 64;
  bool merging = true;    // GM in preprocessing and after every resolution
  bool threshold = true;  // Threshold pruning and the per-step weight guard

  /// Defaults overridden by PLFC_MAX_STEPS / PLFC_MAX_DEPTH when set.
  static RefuteOptions from_environment();
};

/// Clauses added to the KB to refute `q`.
std::vector<Clause> negate_query(const Query& q, const Signature& sig);

struct NumberedClause {
  std::size_t id = 0;
  Clause clause;
};

enum class Rule { Input, Fusion, Threshold, Merge, Equivalent, Resolve };

/// INPUT, FR, THRESHOLD, GM, EQ, GR.
std::string rule_name(Rule r);

struct TraceStep {
  Rule rule = Rule::Input;
  std::size_t id = 0;  // clause produced (THRESHOLD: clause removed)
  std::vector<std::size_t> parents;
  std::vector<std::size_t> literals;  // GR: resolved positions in the two parents
  std::optional<Clause> renamed;      // GR: second parent after standardizing apart
  std::optional<Substitution> theta;  // GR
  std::optional<Clause> clause;
  std::string origin;  // INPUT: "kb" or "negation"
  std::size_t depth = 0;
};

struct PreprocessSummary {
  std::size_t fused = 0;
  std::size_t pruned = 0;
  std::size_t merged = 0;
  std::size_t rewritten = 0;
};

struct WorkingSet {
  std::vector<NumberedClause> clauses;
  std::vector<TraceStep> steps;
  PreprocessSummary summary;
  std::size_t next_id = 1;
};

/// Fusion, Threshold, Merging to a fixpoint, then Equivalent.
WorkingSet preprocess(const KnowledgeBase& kb, const std::vector<Clause>& negation, const Degree& alpha,
                      const RefuteOptions& opt = {});

struct RefutationResult {
  bool proved = false;
  Degree alpha;
  std::optional<Degree> beta;         // weight of the empty clause that closed the proof
  std::optional<Degree> best_bottom;  // best empty-clause weight derived on any branch
  bool budget_exhausted = false;
  std::size_t steps = 0;
  PreprocessSummary summary;
  /// Preprocessing followed by the closing branch, or the branch of the best empty clause.
  std::vector<TraceStep> trace;
};

/// Depth-first refutation with chronological backtracking. Requires alpha > 0.
RefutationResult refute(const KnowledgeBase& kb, const Query& q, const Degree& alpha, const RefuteOptions& opt = {});

std::string trace_text(const RefutationResult& r);

/// One JSON object per line: a header carrying the KB, query and options, every step, and the result.
std::string trace_jsonl(const RefutationResult& r, const KnowledgeBase& kb, const Query& q, const RefuteOptions& opt);

struct ReplayReport {
  bool verified = false;
  bool proved = false;
  std::optional<Degree> beta;
  std::size_t steps = 0;
  std::vector<std::string> problems;
  std::string text;  // the replayed trace, pretty-printed
};

/// Re-derives every step of a JSONL trace with the calculus rules and compares the recorded clauses.
ReplayReport replay_trace(std::string_view jsonl);

}  // namespace plfc

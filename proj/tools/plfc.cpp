// plfc: command-line front end.
//
// Exit status: 0 proved / entailed / verified, 1 not proved / not entailed / not verified,
// 2 usage, parse or capacity errors.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "plfc/calculus.hpp"
#include "plfc/error.hpp"
#include "plfc/parser.hpp"
#include "plfc/query.hpp"
#include "plfc/refutation.hpp"
#include "plfc/semantics_oracle.hpp"

namespace {

constexpr int kYes = 0;
constexpr int kNo = 1;
constexpr int kError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw plfc::Error("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Loaded {
  plfc::Document doc;
  plfc::Query query;
};

/// `--query` names a file or holds the query text; without it the document's first query is used.
Loaded load(const std::string& kb_path, const std::string& query_arg) {
  Loaded out{plfc::parse_document(read_file(kb_path), kb_path), {}};
  const auto& sig = out.doc.kb.signature;
  if (!query_arg.empty()) {
    std::error_code ec;
    if (std::filesystem::is_regular_file(query_arg, ec))
      out.query = plfc::parse_query(read_file(query_arg), sig, query_arg);
    else
      out.query = plfc::parse_query(query_arg, sig, "<query>");
  } else if (!out.doc.queries.empty()) {
    out.query = plfc::classify_query(out.doc.queries.front(), sig);
  } else {
    throw plfc::Error("no query given and '" + kb_path + "' declares none");
  }
  return out;
}

plfc::Degree threshold(const std::string& alpha_arg, const plfc::Query& q) {
  if (alpha_arg.empty()) return q.beta;
  plfc::Rational r;
  try {
    r = plfc::parse_rational(alpha_arg);
  } catch (const std::exception&) {
    throw plfc::Error("alpha '" + alpha_arg + "' is not a rational number");
  }
  if (r <= 0 || r > 1) throw plfc::Error("alpha must lie in (0, 1], got " + plfc::to_string(r));
  return plfc::Degree(r);
}

struct ErrorSink {
  bool json = false;

  int report(const plfc::ParseError& e) const {
    if (json)
      std::cerr << e.to_json() << "\n";
    else
      std::cerr << e.span().file << ":" << e.span().line << ":" << e.span().column << ": error: " << e.message()
                << "\n";
    return kError;
  }
  int report(const std::exception& e) const {
    if (json) {
      std::cerr << nlohmann::json{{"severity", "error"}, {"message", e.what()}}.dump() << "\n";
    } else {
      std::cerr << "error: " << e.what() << "\n";
    }
    return kError;
  }
};

template <typename F>
int guarded(const ErrorSink& sink, F&& f) {
  try {
    return f();
  } catch (const plfc::ParseError& e) {
    return sink.report(e);
  } catch (const std::exception& e) {
    return sink.report(e);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Possibilistic logic with fuzzy constants: refutation, model checking, formatting"};
  app.require_subcommand(1);
  ErrorSink sink;

  std::string kb_path, query_arg, alpha_arg, trace_fmt = "text", trace_out;
  plfc::RefuteOptions defaults = plfc::RefuteOptions::from_environment();
  std::size_t max_steps = defaults.max_steps, max_depth = defaults.max_depth;
  bool no_merging = false, no_threshold = false, quiet = false;

  auto* check = app.add_subcommand("check", "Refute the negated query against the KB");
  check->add_option("kb", kb_path, "KB file")->required();
  check->add_option("--query", query_arg, "Query text or file (default: the KB's first query)");
  check->add_option("--alpha", alpha_arg, "Threshold in (0, 1] (default: the query's beta)");
  check->add_option("--trace", trace_fmt, "Trace format")->check(CLI::IsMember({"text", "jsonl", "none"}));
  check->add_option("--trace-out", trace_out, "Write the trace to this file");
  check->add_option("--max-steps", max_steps, "Resolution step budget (env PLFC_MAX_STEPS)")->check(CLI::PositiveNumber);
  check->add_option("--max-depth", max_depth, "Search depth budget (env PLFC_MAX_DEPTH)")->check(CLI::PositiveNumber);
  check->add_flag("--disable-merging", no_merging, "Skip the GM rule");
  check->add_flag("--disable-threshold", no_threshold, "Skip Threshold pruning and the per-step guard");
  check->add_flag("--quiet", quiet, "Print only the verdict line");
  check->add_flag("--diagnostics-json", sink.json, "Errors as JSON lines on stderr");

  bool normalized = false, nstar = false;
  std::optional<std::uint64_t> limit;
  auto* oracle = app.add_subcommand("oracle", "Decide entailment by enumerating a finite context");
  oracle->add_option("kb", kb_path, "KB file (its oracle block sets grids and options)")->required();
  oracle->add_option("--query", query_arg, "Query text or file (default: the KB's first query)");
  oracle->add_option("--alpha", alpha_arg, "Required degree in (0, 1] (default: the query's beta)");
  oracle->add_flag("--normalized", normalized, "Only normalized possibility distributions");
  oracle->add_flag("--reciprocal-goedel", nstar, "Use inf pi => mu instead of inf max(1 - pi, mu)");
  oracle->add_option("--limit", limit, "Maximum number of interpretations");
  oracle->add_flag("--diagnostics-json", sink.json, "Errors as JSON lines on stderr");

  auto* fmt = app.add_subcommand("fmt", "Print the KB in canonical form");
  fmt->add_option("kb", kb_path, "KB file")->required();
  fmt->add_flag("--diagnostics-json", sink.json, "Errors as JSON lines on stderr");

  std::string trace_path;
  auto* trace = app.add_subcommand("trace", "Replay and pretty-print a JSONL trace");
  trace->add_option("file", trace_path, "Trace file written by check --trace jsonl")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kError;
  }

  if (*check) {
    return guarded(sink, [&] {
      Loaded in = load(kb_path, query_arg);
      plfc::Degree alpha = threshold(alpha_arg, in.query);
      plfc::RefuteOptions opt;
      opt.max_steps = max_steps;
      opt.max_depth = max_depth;
      opt.merging = !no_merging;
      opt.threshold = !no_threshold;
      plfc::RefutationResult r = plfc::refute(in.doc.kb, in.query, alpha, opt);

      std::string verdict = r.proved ? "proved" : "not proved";
      if (r.proved) verdict += ", beta = " + plfc::to_string(*r.beta);
      else if (r.best_bottom) verdict += ", best (bot, " + plfc::to_string(*r.best_bottom) + ")";
      if (r.budget_exhausted) verdict += " (budget exhausted)";

      if (quiet) {
        std::cout << verdict << "\n";
      } else {
        std::cout << "query: " << plfc::to_string(in.query.clause) << "  form " << plfc::form_name(in.query.form)
                  << "\n";
        std::cout << "alpha: " << plfc::to_string(alpha) << "\n";
        std::cout << "preprocess: fused " << r.summary.fused << ", pruned " << r.summary.pruned << ", merged "
                  << r.summary.merged << ", rewritten " << r.summary.rewritten << "\n";
        std::cout << "steps: " << r.steps << "\n";
        std::cout << "result: " << verdict << "\n";
      }
      std::string text;
      if (trace_fmt == "jsonl") text = plfc::trace_jsonl(r, in.doc.kb, in.query, opt);
      else if (trace_fmt == "text") text = plfc::trace_text(r);
      if (!trace_out.empty()) {
        std::ofstream out(trace_out, std::ios::binary);
        if (!out) throw plfc::Error("cannot write '" + trace_out + "'");
        out << text;
      } else if (!quiet && !text.empty()) {
        std::cout << "trace:\n" << text;
      }
      return r.proved ? kYes : kNo;
    });
  }

  if (*oracle) {
    return guarded(sink, [&] {
      Loaded in = load(kb_path, query_arg);
      plfc::Degree alpha = threshold(alpha_arg, in.query);
      plfc::OracleOptions opt;
      std::map<std::string, std::vector<plfc::Rational>> grids;
      if (in.doc.oracle) {
        grids = in.doc.oracle->grids;
        opt.normalized = in.doc.oracle->normalized;
        if (in.doc.oracle->limit) opt.limit = *in.doc.oracle->limit;
      }
      if (normalized) opt.normalized = true;
      if (limit) opt.limit = *limit;
      if (nstar) opt.semantics = plfc::Semantics::ReciprocalGoedel;

      plfc::Clause goal = plfc::with_beta(in.query, alpha);
      std::vector<plfc::Clause> all = in.doc.kb.clauses;
      all.push_back(goal);
      auto ctx = plfc::FiniteContext::build(in.doc.kb.signature, all, grids, {alpha});
      auto rep = plfc::oracle_entails(ctx, in.doc.kb.clauses, goal, opt);
      std::cout << plfc::to_json(ctx, rep) << "\n";
      return rep.entailed ? kYes : kNo;
    });
  }

  if (*fmt) {
    return guarded(sink, [&] {
      std::cout << plfc::format_document(plfc::parse_document(read_file(kb_path), kb_path));
      return kYes;
    });
  }

  if (*trace) {
    return guarded(sink, [&] {
      plfc::ReplayReport rep = plfc::replay_trace(read_file(trace_path));
      std::cout << rep.text;
      std::cout << "verified: " << (rep.verified ? "yes" : "no") << "\n";
      for (const auto& p : rep.problems) std::cout << "  " << p << "\n";
      return rep.verified ? kYes : kNo;
    });
  }
  return kError;
}

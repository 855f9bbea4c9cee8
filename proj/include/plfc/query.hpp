#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "plfc/language.hpp"

namespace plfc {

/// A query clause recognized as one of the four refutable shapes.
///
///   I    (p(..A..), beta)                         A fuzzy/imprecise, or no such argument at all
///   II   (p(..x..), min(beta, B(x)))
///   III  (p(..A..x..), min(beta, B(x)))
///   IV   (~p(..A..x..) | q(..y..B..), min(beta, C(x), D(y)))
///
/// Every other argument must be a precise constant.
struct Query {
  enum class Form { I, II, III, IV };

  Form form = Form::I;
  Clause clause;
  Degree beta;

  // Argument positions of the pattern constants and variables, per literal.
  std::size_t fuzzy_pos = 0;     // A (I, III, IV first literal)
  std::size_t var_pos = 0;       // x (II, III, IV first literal)
  std::size_t second_var_pos = 0;    // y (IV second literal)
  std::size_t second_fuzzy_pos = 0;  // B (IV second literal)
  bool has_fuzzy = true;         // I without any imprecise argument is a plain ground atom
  std::string weight_set;        // B for II/III, C for IV
  std::string second_weight_set; // D for IV
};

std::string form_name(Query::Form f);

/// The query clause with its constant beta replaced by `b`.
Clause with_beta(const Query& q, const Degree& b);

/// Throws plfc::Error("unsupported query form: ...") when the clause fits none of the shapes.
Query classify_query(const Clause& c, const Signature& sig);

}  // namespace plfc

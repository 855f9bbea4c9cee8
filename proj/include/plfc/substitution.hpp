#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "plfc/language.hpp"

namespace plfc {

/// {x1/t1, ..., xn/tn}: distinct variables, no trivial pairs, never a fuzzy constant in the range.
class Substitution {
 public:
  Substitution() = default;

  /// Adds x/t; ignores x/x. Throws plfc::Error on a fuzzy term or a second binding for x.
  void bind(const std::string& var, Term t);

  const Term* lookup(const std::string& var) const;
  const std::vector<std::pair<std::string, Term>>& bindings() const { return bindings_; }
  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }

  friend bool operator==(const Substitution&, const Substitution&) = default;

 private:
  std::vector<std::pair<std::string, Term>> bindings_;
};

Term apply(const Substitution& s, const Term& t);
WeightExpr apply(const Substitution& s, const WeightExpr& w);
Literal apply(const Substitution& s, const Literal& l);
Clause apply(const Substitution& s, const Clause& c);

Substitution compose(const Substitution& theta, const Substitution& eta);

/// A renaming theta with base(c1)theta == base(c2) (literal order free), or nothing.
std::optional<Substitution> variant_renaming(const Clause& c1, const Clause& c2);

/// Most general substitution of two complementary literals or nothing when they cannot be
/// resolved. Imprecise arguments must all sit in one literal and may bind only variables of the other.
/// The literals must not share variables.
std::optional<Substitution> mgs(const Literal& l1, const Literal& l2);

/// `{x/c, y/[A @ 1/2]}`.
std::string to_string(const Substitution& s);

}  // namespace plfc

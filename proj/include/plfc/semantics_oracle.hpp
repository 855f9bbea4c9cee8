#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "plfc/language.hpp"

namespace plfc {

/// A finite context: one carrier per sort and the predicates whose extensions vary.
class FiniteContext {
 public:
  struct Atom {
    std::string predicate;
    std::vector<DomainValue> args;
  };

  FiniteContext(const Signature& sig, std::map<std::string, std::vector<DomainValue>> carriers,
                std::vector<std::string> predicates);

  /// Finite sorts verbatim. Real sorts get the declared grid (if any) closed under the breakpoints,
  /// pairwise crossings and level crossings of the sort's fuzzy sets, the domain bounds and every
  /// precise value in the signature or `clauses`. Only predicates occurring in `clauses` vary.
  static FiniteContext build(const Signature& sig, const std::vector<Clause>& clauses,
                             const std::map<std::string, std::vector<Rational>>& grids = {},
                             const std::vector<Degree>& levels = {});

  const Signature& signature() const { return sig_; }
  const std::map<std::string, std::vector<DomainValue>>& carriers() const { return carriers_; }
  const std::vector<DomainValue>& carrier(const std::string& sort) const;
  const std::vector<std::string>& predicates() const { return predicates_; }
  const std::vector<Atom>& atoms() const { return atoms_; }
  std::optional<std::size_t> atom_index(const std::string& predicate, const std::vector<DomainValue>& args) const;

 private:
  Signature sig_;
  std::map<std::string, std::vector<DomainValue>> carriers_;
  std::vector<std::string> predicates_;
  std::vector<Atom> atoms_;
  std::map<std::string, std::size_t> offset_;
};

/// One interpretation: bit k holds iff atom k is in the extension of its predicate.
using World = std::vector<bool>;

/// Builds a world from explicit extensions. Throws DomainError on atoms outside the context.
World make_world(const FiniteContext& ctx,
                 const std::map<std::string, std::vector<std::vector<DomainValue>>>& extensions);
std::map<std::string, std::vector<std::vector<DomainValue>>> describe_world(const FiniteContext& ctx, const World& w);

/// Truth degree of a ground base clause in `w`; the weight is ignored.
Degree truth_eval(const FiniteContext& ctx, const World& w, const Clause& ground);

/// Sparse possibility distribution: worlds not listed have possibility 0.
using PossDist = std::map<World, Degree>;

/// N(phi | pi) = inf_w max(1 - pi(w), w(phi)) over every world of the context.
Degree clause_necessity(const FiniteContext& ctx, const PossDist& pi, const Clause& ground);

/// Every ground instance (phi(c), f(c)) has N(phi(c) | pi) >= f(c).
bool satisfies(const FiniteContext& ctx, const PossDist& pi, const Clause& c);

/// Ground instances of `c` over the context's carriers, with evaluated weights.
std::vector<std::pair<Clause, Degree>> ground_over(const FiniteContext& ctx, const Clause& c);

enum class Semantics {
  Necessity,       // inf max(1 - pi, mu)
  ReciprocalGoedel // inf pi => mu
};

/// pi*(w) = min_i max(1 - a_i, [w(phi_i) >= a_i]). Enumerates every world.
PossDist least_specific_model(const FiniteContext& ctx, const std::vector<std::pair<Clause, Degree>>& ground_kb,
                              std::uint64_t limit = std::uint64_t{1} << 22);

struct OracleOptions {
  bool normalized = false;  // restrict to normalized distributions
  std::uint64_t limit = std::uint64_t{1} << 22;
  Semantics semantics = Semantics::Necessity;
};

struct EntailmentReport {
  bool entailed = false;
  Degree degree;                // of the weakest query instance
  Degree required;              // its weight
  Clause instance;              // that instance
  World witness;                // a world where the instance's degree is attained
  Degree height;                // max of pi*
  std::uint64_t worlds = 0;
  std::size_t ground_clauses = 0;
};

/// Decides kb |= query by enumerating the context against the least specific model.
/// Throws EnumerationError when the context exceeds `limit` worlds.
EntailmentReport oracle_entails(const FiniteContext& ctx, const std::vector<Clause>& kb, const Clause& query,
                                const OracleOptions& opt = {});

/// JSON object with verdict, degree, the instance checked and the witness interpretation.
std::string to_json(const FiniteContext& ctx, const EntailmentReport& r);

struct AxiomCheck {
  bool n1 = false, n2 = false, n3 = false, n4 = false;
  bool all() const { return n1 && n2 && n3 && n4; }
};

/// N1-N4 for N(A) = inf_w max(1 - pi(w), A(w)) on a finite set; `crisp` must be {0,1}-valued.
AxiomCheck check_necessity_axioms(const std::vector<Degree>& pi, const std::vector<Degree>& a,
                                  const std::vector<Degree>& b, const std::vector<Degree>& crisp,
                                  const Degree& alpha);

/// inf_w max(1 - pi(w), a(w)).
Degree necessity_over(const std::vector<Degree>& pi, const std::vector<Degree>& a);

}  // namespace plfc

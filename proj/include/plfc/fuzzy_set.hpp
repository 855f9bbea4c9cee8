#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "plfc/rational.hpp"

namespace plfc {

/// An element of a sort's domain: a real number or a symbol of a finite domain.
using DomainValue = std::variant<Rational, std::string>;

std::string to_string(const DomainValue& v);

class Domain {
 public:
  enum class Kind { RealInterval, Finite };

  static std::shared_ptr<const Domain> real_interval(Rational lo, Rational hi);
  static std::shared_ptr<const Domain> finite(std::vector<std::string> symbols);

  Kind kind() const { return kind_; }
  bool is_real() const { return kind_ == Kind::RealInterval; }
  bool is_finite() const { return kind_ == Kind::Finite; }

  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  const std::vector<std::string>& symbols() const { return symbols_; }
  std::size_t size() const { return symbols_.size(); }

  std::optional<std::size_t> index_of(std::string_view symbol) const;
  bool contains(const DomainValue& v) const;

  /// `real[lo, hi]` or `{a, b, c}`.
  std::string to_string() const;

  friend bool operator==(const Domain& a, const Domain& b);

 private:
  Domain() = default;
  Kind kind_ = Kind::Finite;
  Rational lo_, hi_;
  std::vector<std::string> symbols_;
};

using DomainPtr = std::shared_ptr<const Domain>;

namespace detail {

// Piecewise-linear function on [xs.front(), xs.back()], possibly discontinuous at breakpoints.
// at[i] is the value at xs[i]; on the open segment (xs[i], xs[i+1]) the function is linear
// with limits left[i] at xs[i]+ and right[i] at xs[i+1]-.
struct Piecewise {
  std::vector<Rational> xs;
  std::vector<Rational> at;
  std::vector<Rational> left;
  std::vector<Rational> right;

  Rational eval(const Rational& u) const;
  void simplify();
  friend bool operator==(const Piecewise&, const Piecewise&) = default;
};

}  // namespace detail

/// Membership function over one sort's domain. Immutable once built.
class FuzzySet {
 public:
  struct Trapezoid {
    Rational t1, t2, t3, t4;
  };
  struct Discrete {
    std::vector<std::pair<std::string, Degree>> entries;
  };
  struct Constant {
    Degree level;
  };
  struct CrispInterval {
    Rational lo, hi;
    bool lo_open = false;
    bool hi_open = false;
  };
  struct CrispFinite {
    std::vector<std::string> members;
  };
  // Result of a set operation; printed from its canonical representation.
  struct Derived {};

  using Shape = std::variant<Trapezoid, Discrete, Constant, CrispInterval, CrispFinite, Derived>;

  static FuzzySet trapezoid(DomainPtr domain, Rational t1, Rational t2, Rational t3, Rational t4);
  static FuzzySet discrete(DomainPtr domain, std::vector<std::pair<std::string, Degree>> entries);
  static FuzzySet constant(DomainPtr domain, Degree level);
  static FuzzySet crisp_interval(DomainPtr domain, Rational lo, Rational hi, bool lo_open, bool hi_open);
  static FuzzySet crisp_finite(DomainPtr domain, std::vector<std::string> members);
  static FuzzySet singleton(DomainPtr domain, const DomainValue& v);

  const DomainPtr& domain() const { return domain_; }
  const Shape& shape() const { return shape_; }

  Degree membership(const DomainValue& u) const;
  Degree height() const;
  Degree infimum() const;
  bool is_crisp() const;
  bool is_normalized() const { return height().is_one(); }
  bool is_empty() const { return height().is_zero(); }

  /// Declaration syntax (`trap(20, 24, 26, 30)`, `set{1, 2}`, ...) or a canonical dump for derived sets.
  std::string describe() const;

  friend bool operator==(const FuzzySet& a, const FuzzySet& b);

  // Representation access for the set operations below.
  const std::vector<Rational>& table() const { return table_; }
  const detail::Piecewise& piecewise() const { return pl_; }
  static FuzzySet from_table(DomainPtr domain, std::vector<Rational> table);
  static FuzzySet from_piecewise(DomainPtr domain, detail::Piecewise pl);

 private:
  FuzzySet() = default;
  DomainPtr domain_;
  Shape shape_ = Derived{};
  std::vector<Rational> table_;
  detail::Piecewise pl_;
};

using FuzzySetPtr = std::shared_ptr<const FuzzySet>;
/// Fuzzy sets whose membership is {0,1}-valued; `FuzzySet::is_crisp` holds.
using CrispSet = FuzzySet;

/// {x : mu(x) >= alpha}; the whole domain when alpha = 0.
CrispSet alpha_cut(const FuzzySet& a, const Degree& alpha);
/// {x : mu(x) > 0}.
CrispSet support(const FuzzySet& a);
/// {x : mu(x) = 1}.
CrispSet core(const FuzzySet& a);

FuzzySet min_fs(const FuzzySet& a, const FuzzySet& b);
FuzzySet max_fs(const FuzzySet& a, const FuzzySet& b);
FuzzySet complement(const FuzzySet& a);
inline Degree height(const FuzzySet& a) { return a.height(); }

/// N(A | B) = inf_x max(1 - mu_B(x), mu_A(x)).
Degree necessity(const FuzzySet& a, const FuzzySet& b);
/// Pos(A | C) = sup_x min(mu_A(x), mu_C(x)).
Degree possibility(const FuzzySet& a, const FuzzySet& c);
/// inf_x mu_B(x) => mu_A(x), with x => y = 1 if x <= y, else 1 - x.
Degree goedel_reciprocal_necessity(const FuzzySet& a, const FuzzySet& b);

/// True when mu_A(x) <= mu_B(x) everywhere.
bool subset_of(const FuzzySet& a, const FuzzySet& b);

}  // namespace plfc

#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>
#include <string_view>

namespace plfc {

using Rational = mpq_class;

/// Parses an integer, `a/b`, or a finite decimal (`0.25`, `-3.5`) exactly.
/// Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

/// Canonical text: integers as `3`, fractions as `4/9` (reduced, sign on numerator).
std::string to_string(const Rational& r);

/// A certainty or membership degree: an exact rational in [0,1].
class Degree {
 public:
  Degree() = default;
  explicit Degree(const Rational& v);
  explicit Degree(long num, unsigned long den = 1) : Degree(Rational(num, den)) {}

  static Degree zero() { return Degree(); }
  static Degree one() { return Degree(1); }

  const Rational& value() const { return value_; }
  Degree complement() const { return Degree(Rational(1) - value_); }

  bool is_zero() const { return sgn(value_) == 0; }
  bool is_one() const { return value_ == 1; }

  friend bool operator==(const Degree& a, const Degree& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Degree& a, const Degree& b) {
    int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  Rational value_{0};
};

inline const Degree& min(const Degree& a, const Degree& b) { return b < a ? b : a; }
inline const Degree& max(const Degree& a, const Degree& b) { return a < b ? b : a; }

inline std::string to_string(const Degree& d) { return to_string(d.value()); }

}  // namespace plfc

#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace margo {

using Rational = mpq_class;

/// Parses "p/q" or "p" (optional leading '-'). Throws DomainError on
/// anything else, including decimals and zero denominators.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form; integers keep an explicit "/1".
std::string to_string(const Rational& value);

/// p/q in lowest terms.
inline Rational ratio(long p, long q) {
  Rational out(p, q);
  out.canonicalize();
  return out;
}

inline Rational abs(const Rational& value) { return value < 0 ? Rational(-value) : value; }
inline Rational positive_part(const Rational& value) { return value > 0 ? value : Rational(0); }
inline Rational negative_part(const Rational& value) { return value < 0 ? Rational(-value) : Rational(0); }

}  // namespace margo

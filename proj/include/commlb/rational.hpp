#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace commlb {

/// Exact arbitrary-precision rational. GMP keeps mpq values canonical
/// (lowest terms, positive denominator) as long as they are built through
/// the helpers below or through arithmetic.
using Rational = mpq_class;

/// Parses "p/q", "p", "-p/q". Rejects zero denominators, whitespace and
/// anything that is not a plain integer or integer fraction.
Rational parse_rational(std::string_view text);

/// Lowest-terms rendering: "3/2", "4", "-1/3", "0".
std::string to_string(const Rational& value);

/// Nearest double (round to nearest).
double to_double(const Rational& value);

/// Largest double not exceeding value.
double to_double_down(const Rational& value);

/// Correctly rounded base-2 logarithm. Returns -inf for zero; throws
/// PreconditionError for negative input.
double log2_of(const Rational& value);

inline Rational make_rational(long num, unsigned long den = 1) {
  Rational r{mpz_class(num), mpz_class(den)};
  r.canonicalize();
  return r;
}

}  // namespace commlb

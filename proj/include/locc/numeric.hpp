#pragma once

// Numeric-mode plumbing: exact rationals (GMP) and doubles behind one small
// set of comparison helpers, so the formula layer can be written once.

#include <gmpxx.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <string_view>

namespace locc {

using Rational = mpq_class;

/// Malformed or invariant-violating input. The CLI maps this to exit code 1.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A well-formed request that has no solution (e.g. a conversion with
/// probability zero). The CLI maps this to exit code 2.
class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NumericOptions {
  double tolerance = 1e-9;
  bool trim_zeros = false;
};

enum class NumericMode { rational, floating };

// Comparison helpers. Rational overloads ignore the tolerance.

inline bool is_zero(double x, double eps) { return std::abs(x) <= eps; }
inline bool is_zero(const Rational& x, double) { return sgn(x) == 0; }

inline bool approx_equal(double a, double b, double eps) { return std::abs(a - b) <= eps; }
inline bool approx_equal(const Rational& a, const Rational& b, double) { return a == b; }

/// a < b by more than the tolerance.
inline bool definitely_less(double a, double b, double eps) { return a < b - eps; }
inline bool definitely_less(const Rational& a, const Rational& b, double) { return a < b; }

inline bool is_negative(double x, double eps) { return x < -eps; }
inline bool is_negative(const Rational& x, double) { return sgn(x) < 0; }

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.get_d(); }

template <class T>
T scalar_from_double(double x);

template <>
inline double scalar_from_double<double>(double x) {
  return x;
}

/// Parses "p/q", "p", or a decimal literal such as "0.8" or "1.25e-3" into an
/// exact, canonicalized rational.
Rational parse_rational(std::string_view text);

/// Exact rational for the shortest decimal that round-trips to `x`
/// (0.8 becomes 4/5, not the binary expansion of 0.8).
Rational rational_from_shortest_decimal(double x);

template <>
inline Rational scalar_from_double<Rational>(double x) {
  return rational_from_shortest_decimal(x);
}

/// "p/q", or "p" when the denominator is one.
std::string to_string(const Rational& x);

/// Twelve significant digits.
std::string to_string(double x);

/// Rounds to `digits` significant decimal digits; used before JSON output so
/// serialized floats carry a fixed precision.
double round_significant(double x, int digits = 12);

}  // namespace locc

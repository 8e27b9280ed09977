// Exact scalar types and number-theoretic helpers: arbitrary-precision
// integers/rationals (GMP-backed), Bernoulli numbers under the t/(e^t - 1)
// convention, Bernoulli-polynomial values at 1/2, binomials, binary digit sum.
#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <mutex>
#include <string>
#include <vector>

namespace partlim {

using Integer = mpz_class;
using Rational = mpq_class;

// Canonical rational num/den, reduced, den > 0. Throws on den == 0.
Rational make_rational(Integer num, Integer den);

Integer ipow(const Integer& base, unsigned long exp);
Integer ui_pow(unsigned long base, unsigned long exp);
Rational rpow(const Rational& base, unsigned long exp);

// C(n, k) for integer n (generalized for n < 0), k >= 0. C(n, k) = 0 when
// 0 <= n < k. Throws on k < 0.
Integer binomial(const Integer& n, long k);

// Number of ones in the binary expansion of n >= 0.
unsigned long s2(const Integer& n);

double to_double(const Rational& q);
// Decimal rendering with the given number of significant digits.
std::string to_decimal_string(const Rational& q, int sig_digits = 12);

// Memoized Bernoulli numbers B_n with B_1 = -1/2. Entries are immutable once
// computed; growth is mutex-guarded so concurrent lookups are safe.
class BernoulliCache {
 public:
  BernoulliCache();
  Rational number(std::size_t n) const;
  Rational poly_at_half(std::size_t n) const;   // B_n(1/2)

 private:
  void grow(std::size_t n) const;
  mutable std::mutex mutex_;
  mutable std::vector<Rational> computed_;
};

// Process-wide cache; all library call sites share it.
Rational bernoulli_number(std::size_t n);
Rational bernoulli_poly_at_half(std::size_t n);

}  // namespace partlim

#pragma once

#include <string>

#include <gmpxx.h>

namespace kfull {

/// log(a) / log(b) for a, b >= 1 (b >= 2), evaluated with 256-bit MPFR.
double log_ratio(const mpz_class& a, const mpz_class& b);

/// log(a) / log(b) truncated (not rounded) to `places` decimals, e.g. "0.4263".
std::string log_ratio_truncated(const mpz_class& a, const mpz_class& b, int places = 4);

/// log(a) / log(b) to `digits` significant decimal digits.
std::string log_ratio_digits(const mpz_class& a, const mpz_class& b, int digits = 50);

/// Exact test of a <= b^(num/den), i.e. a^den <= b^num, for positive a, b.
/// Decided by high-precision logarithms, falling back to exact powers when
/// the two sides are too close to separate.
bool leq_power(const mpz_class& a, const mpz_class& b, unsigned long num, unsigned long den);

/// log(x) as a double for arbitrarily large positive x.
double log_big(const mpz_class& x);

}  // namespace kfull

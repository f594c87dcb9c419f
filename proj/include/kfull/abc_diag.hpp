#pragma once

#include <optional>
#include <string>

#include <gmpxx.h>

#include "kfull/witness.hpp"

namespace kfull {

/// Conditional exponents for m-term k-full progressions. The strengthened
/// set applies when m >= 2k - 1; an entry is empty when its denominator vanishes.
struct ExponentReport {
    unsigned m = 3, k = 2;
    mpq_class e_gcd, e_dN, e_Nd;
    std::optional<mpq_class> s_gcd, s_dN, s_Nd;
    bool strengthened = false;
    bool exceptional = false;  // (m, k) in {(3,2), (3,3), (4,2)}
    bool gcd_nontrivial = false, dN_nontrivial = false, Nd_nontrivial = false;
};

ExponentReport theorem1_exponents(unsigned m, unsigned k);

struct WitnessDiagnostics {
    mpz_class t;                  // gcd(N, d)
    double log_t_over_log_max = 0;  // log t / log max(d, N)
    double log_d_over_log_N = 0;
    std::string ratio_text;       // log d / log N truncated to 4 decimals
    ExponentReport exponents;
    std::optional<mpq_class> theta_lower, theta_upper;  // (3m-6)/(4m-6), (2m-4)/(2m-3) for m >= 4
};

WitnessDiagnostics witness_diagnostics(const ProgressionWitness& w);

struct AbcTriple {
    mpz_class t, N0, d0;
    mpz_class D;             // gcd of the odd and even products
    bool D_within_bound = false;  // D <= (m-1)^((m-1)^2)
    mpz_class a, b, c;       // coprime, a + b = c, after dividing by D
    std::optional<mpz_class> radical;
    std::optional<std::string> quality;  // log c / log Rad(abc), 50 significant digits
};

/// log c / log Rad(abc) when a, b, c can be factored, otherwise empty.
std::optional<std::string> abc_quality(const mpz_class& a, const mpz_class& b, const mpz_class& c,
                                       std::optional<mpz_class>* radical_out = nullptr);

/// Reduced abc triple from the binomial-exponent identity applied to w.
AbcTriple kabc_triple(const ProgressionWitness& w);

/// Rad(n/t)^(k^2) * t <= n^k for a k-full n and k-full divisor t.
bool lemma5ap_check(const mpz_class& n, const mpz_class& t, unsigned k);
bool lemma5ap_check(const FactoredNatural& n, const FactoredNatural& t, unsigned k);

/// Rad(prod (N+jd) / t^m)^(2k-1) * t^m <= C_m^(2k-1) * (prod a_(i,j))^(2k-1), with
/// a_(i,j) from the canonical k-full decomposition. Requires m >= 2k - 1.
bool roadie_check(const ProgressionWitness& w);

}  // namespace kfull

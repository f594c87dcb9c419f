#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace kfull {

/// Raised when a caller violates an operation's precondition (bad input).
class PreconditionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an exact check that must hold by construction fails.
class VerificationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A positive integer together with its complete prime factorization.
struct FactoredNatural {
    mpz_class value = 1;
    std::map<mpz_class, unsigned long> factors;

    bool operator==(const FactoredNatural&) const = default;

    /// Product of p^e over the stored factors.
    mpz_class recompose() const;
    /// Smallest exponent, or 0 for the empty factorization.
    unsigned long min_exponent() const;
};

/// A k-full certificate: value = prod base^exp with every exp >= k.
///
/// Bases need not be prime. Any integer of this shape is k-full, because a
/// prime dividing it divides some base, hence appears to at least that
/// base's exponent. Large constructed terms carry certificates of this kind
/// since their prime factorizations are out of reach.
struct TermCertificate {
    mpz_class value = 1;
    std::vector<std::pair<mpz_class, unsigned long>> powers;
    bool prime_bases = true;

    static TermCertificate from_factorization(const FactoredNatural& f);
    static TermCertificate from_powers(std::vector<std::pair<mpz_class, unsigned long>> powers);

    mpz_class recompose() const;
    bool certifies_kfull(unsigned k) const;
    /// Factorization, available only when the bases are known primes.
    std::optional<FactoredNatural> as_factored() const;
};

// ---- primality and factorization ----

bool is_prime(const mpz_class& n);
bool is_prime_u64(std::uint64_t n);

/// Primes below 10^7, sieved on first use.
const std::vector<std::uint32_t>& small_primes();

FactoredNatural factorize(const mpz_class& n);
FactoredNatural factorize(std::uint64_t n);

/// Like factorize, but gives up on composite cofactors above 2^64 once the
/// Pollard rho budget (iterations per cofactor) runs out.
std::optional<FactoredNatural> try_factorize(const mpz_class& n, std::uint64_t rho_budget);

/// Merges the prime factors of every base; bases that cannot be factored
/// within budget are kept symbolic (the result then has prime_bases = false).
TermCertificate refine_certificate(const TermCertificate& cert, std::uint64_t rho_budget = 1u << 20);

// ---- valuations, radicals, k-full predicates ----

unsigned long nu(const mpz_class& p, const mpz_class& n);
mpz_class radical(const mpz_class& n);
mpz_class radical(const FactoredNatural& n);
bool is_kfull(const mpz_class& n, unsigned k);
bool is_kfull(const FactoredNatural& n, unsigned k);

/// n = prod_{i=k}^{2k-1} parts[i-k]^i.
struct KFullDecomposition {
    unsigned k = 2;
    std::vector<mpz_class> parts;

    mpz_class recompose() const;
};

/// Canonical rule per prime p^e, e = qk + r: r = 0 puts p^q into a_k,
/// otherwise p^(q-1) into a_k and p into a_(k+r).
KFullDecomposition kfull_decompose(const FactoredNatural& n, unsigned k);
KFullDecomposition kfull_decompose(const mpz_class& n, unsigned k);

/// k-full divisors of n, ascending, at most `limit` of them.
std::vector<mpz_class> kfull_divisors(const FactoredNatural& n, unsigned k, std::size_t limit = SIZE_MAX);

mpz_class pow_ui(const mpz_class& base, unsigned long exp);
/// Exact square root, or nullopt if n is not a perfect square.
std::optional<mpz_class> exact_sqrt(const mpz_class& n);
std::string to_string(const FactoredNatural& f);

}  // namespace kfull

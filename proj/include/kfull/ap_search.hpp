#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <absl/container/flat_hash_set.h>

#include "kfull/witness.hpp"

namespace kfull {

/// Upper limit on d relative to the first term N.
struct RatioLimit {
    enum class Kind { below_sqrt, at_most_power } kind = Kind::below_sqrt;
    // at_most_power: d <= N^(num/den)
    unsigned long num = 1;
    unsigned long den = 2;

    static RatioLimit sqrt_window() { return {}; }
    /// Parses a decimal such as "0.7426" into an exact fraction.
    static RatioLimit power(const std::string& decimal);
    std::string describe() const;
};

struct SearchRow {
    mpz_class d;
    mpz_class N;
    double ratio = 0;           // log d / log N
    std::string ratio_text;     // truncated to 4 decimals
    bool primitive = true;
    ProgressionWitness witness;
};

struct SearchReport {
    std::uint64_t bound = 0;
    unsigned k = 2;
    unsigned m = 3;
    std::string constraint;
    bool primitive_only = false;
    std::vector<SearchRow> rows;  // ascending by ratio

    const SearchRow* find(const mpz_class& d, const mpz_class& N) const;
};

struct SearchOptions {
    std::size_t memory_budget = 64'000'000;  // maximum number of enumerated values
    unsigned threads = 0;                     // 0 = hardware concurrency
    bool primitive_only = false;
};

/// The k-full numbers <= bound, strictly increasing.
std::vector<std::uint64_t> enumerate_kfull(std::uint64_t bound, unsigned k,
                                           std::size_t memory_budget = SearchOptions{}.memory_budget);

/// Sorted k-full values with hashed membership, shared read-only by searches.
class KFullSet {
  public:
    KFullSet(std::uint64_t bound, unsigned k, std::size_t memory_budget = SearchOptions{}.memory_budget);

    std::uint64_t bound() const { return bound_; }
    unsigned k() const { return k_; }
    std::span<const std::uint64_t> values() const { return values_; }
    bool contains(std::uint64_t v) const { return v <= bound_ && members_.contains(v); }

  private:
    std::uint64_t bound_;
    unsigned k_;
    std::vector<std::uint64_t> values_;
    absl::flat_hash_set<std::uint64_t> members_;
};

/// All m-term progressions with last term <= bound and d within the ratio
/// limit of the first term.
SearchReport find_aps_window(const KFullSet& set, unsigned m, const RatioLimit& limit,
                             const SearchOptions& opts = {});
SearchReport find_aps_window(std::uint64_t bound, unsigned k, unsigned m, const RatioLimit& limit,
                             const SearchOptions& opts = {});

/// All m-term progressions with N <= first_term_bound, every term <=
/// term_bound, and d > N.
SearchReport find_aps_large_d(const KFullSet& set, std::uint64_t first_term_bound, unsigned m,
                              const SearchOptions& opts = {});
SearchReport find_aps_large_d(std::uint64_t term_bound, std::uint64_t first_term_bound, unsigned k, unsigned m,
                              const SearchOptions& opts = {});

/// False iff some t >= 2 with t^2 | gcd(N, d) leaves every term k-full after division by t^2.
bool primitive_filter(const ProgressionWitness& w);

/// Lexicographically least (d, N) with N, ..., N+(m-1)d squarefull, d <= bound_d, N <= bound_N.
std::optional<std::pair<std::uint64_t, std::uint64_t>> min_common_difference(
    unsigned m, std::uint64_t bound_d, std::uint64_t bound_N, std::size_t memory_budget = SearchOptions{}.memory_budget);

/// True iff every prime p <= m/2 divides d.
bool check_primorial_divisibility(const ProgressionWitness& w);

/// d = N = prod_{p <= m} p^k.
ProgressionWitness trivial_family(unsigned m, unsigned k);

}  // namespace kfull

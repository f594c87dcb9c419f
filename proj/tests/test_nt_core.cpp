#include <doctest.h>

#include "kfull/nt_core.hpp"
#include "oracles.hpp"

using namespace kfull;

namespace {

std::map<mpz_class, unsigned long> as_map(std::initializer_list<std::pair<long, unsigned long>> l) {
    std::map<mpz_class, unsigned long> m;
    for (auto [p, e] : l) m[p] = e;
    return m;
}

}  // namespace

TEST_CASE("factorize small values") {
    CHECK(factorize(mpz_class(1)).factors.empty());
    CHECK(factorize(mpz_class(729000)).factors == as_map({{2, 3}, {3, 6}, {5, 3}}));
    CHECK(factorize(mpz_class(22880)).factors == as_map({{2, 5}, {5, 1}, {11, 1}, {13, 1}}));
    CHECK_THROWS_AS(factorize(mpz_class(0)), PreconditionError);
}

TEST_CASE("factorize agrees with trial division") {
    for (std::uint64_t n = 1; n <= 20000; ++n) {
        const auto f = factorize(n);
        std::map<mpz_class, unsigned long> expected;
        for (auto [p, e] : oracle::trial_factor(n)) expected[p] = e;
        REQUIRE(f.factors == expected);
        REQUIRE(f.value == n);
    }
}

TEST_CASE("factorize large composites") {
    // Products of known primes beyond the trial-division range.
    const mpz_class p1("1000000007"), p2("998244353"), p3("18446744073709551557");
    const mpz_class n = p1 * p1 * p2 * p3;
    const auto f = factorize(n);
    CHECK(f.recompose() == n);
    CHECK(f.factors.at(p1) == 2);
    CHECK(f.factors.at(p2) == 1);
    CHECK(f.factors.at(p3) == 1);
    for (const auto& [p, e] : f.factors) CHECK(is_prime(p));
}

TEST_CASE("primality") {
    CHECK(is_prime_u64(2));
    CHECK_FALSE(is_prime_u64(1));
    CHECK(is_prime_u64(18446744073709551557ULL));
    CHECK_FALSE(is_prime_u64(3215031751ULL));  // strong pseudoprime to bases 2, 3, 5, 7
    CHECK_FALSE(is_prime_u64(341550071728321ULL));
    for (std::uint64_t n = 0; n < 5000; ++n) {
        const bool expected = n >= 2 && oracle::trial_factor(n).size() == 1 && oracle::trial_factor(n).begin()->second == 1;
        REQUIRE(is_prime_u64(n) == expected);
    }
}

TEST_CASE("nu") {
    CHECK(nu(2, 22880) == 5);
    CHECK(nu(7, 10) == 0);
    CHECK(nu(3, 729000) == 6);
    CHECK_THROWS_AS(nu(4, 16), PreconditionError);
}

TEST_CASE("radical") {
    CHECK(radical(mpz_class(1)) == 1);
    CHECK(radical(mpz_class(729000)) == 30);
    CHECK(radical(mpz_class(8)) == 2);
}

TEST_CASE("is_kfull") {
    CHECK(is_kfull(mpz_class(729000), 2));
    CHECK_FALSE(is_kfull(mpz_class(12), 2));
    CHECK_FALSE(is_kfull(mpz_class(55566), 3));
    CHECK(is_kfull(mpz_class(1), 5));
}

TEST_CASE("kfull_decompose") {
    auto d32 = kfull_decompose(mpz_class(32), 2);
    CHECK(d32.parts == std::vector<mpz_class>{2, 2});
    auto d1 = kfull_decompose(mpz_class(1), 2);
    CHECK(d1.parts == std::vector<mpz_class>{1, 1});
    auto d = kfull_decompose(mpz_class(729000), 2);
    CHECK(d.recompose() == 729000);
    // 2^3 -> a3 gets 2; 3^6 -> a2 gets 27; 5^3 -> a3 gets 5
    CHECK(d.parts == std::vector<mpz_class>{27, 10});
    CHECK_THROWS_AS(kfull_decompose(mpz_class(12), 2), PreconditionError);
}

TEST_CASE("kfull_divisors") {
    CHECK(kfull_divisors(factorize(mpz_class(16)), 2) == std::vector<mpz_class>{1, 4, 8, 16});
    CHECK(kfull_divisors(factorize(mpz_class(1)), 3) == std::vector<mpz_class>{1});
    CHECK(kfull_divisors(factorize(mpz_class(36)), 2) == std::vector<mpz_class>{1, 4, 9, 36});
    CHECK(kfull_divisors(factorize(mpz_class(36)), 2, 2).size() == 2);
}

TEST_CASE("property: k-full predicate, decomposition and radical up to 10^6") {
    for (unsigned k : {2u, 3u}) {
        for (std::uint64_t n = 1; n <= 1000000; n += (n < 20000 ? 1 : 37)) {
            const FactoredNatural f = factorize(n);
            const bool brute = oracle::is_kfull(n, k);
            REQUIRE(is_kfull(f, k) == brute);
            if (brute) {
                REQUIRE(kfull_decompose(f, k).recompose() == n);
            } else {
                REQUIRE_THROWS_AS(kfull_decompose(f, k), PreconditionError);
            }
            const mpz_class r = radical(f);
            REQUIRE(r == oracle::radical(n));
        }
    }
}

TEST_CASE("property: kfull divisors match brute-force divisor scan") {
    for (std::uint64_t n : oracle::kfull_upto(20000, 2)) {
        std::vector<mpz_class> expected;
        for (std::uint64_t t = 1; t <= n; ++t)
            if (n % t == 0 && oracle::is_kfull(t, 2)) expected.push_back(t);
        REQUIRE(kfull_divisors(factorize(n), 2) == expected);
    }
}

TEST_CASE("term certificates") {
    auto c = TermCertificate::from_powers({{6, 2}, {35, 3}, {1, 7}});
    CHECK(c.value == 36 * 42875);
    CHECK_FALSE(c.prime_bases);
    CHECK(c.certifies_kfull(2));
    CHECK_FALSE(c.certifies_kfull(3));
    CHECK_FALSE(c.as_factored().has_value());
    auto r = refine_certificate(c);
    CHECK(r.prime_bases);
    CHECK(r.recompose() == c.value);
    CHECK(r.as_factored()->factors == as_map({{2, 2}, {3, 2}, {5, 3}, {7, 3}}));
}

TEST_CASE("exact_sqrt") {
    CHECK(*exact_sqrt(mpz_class(144)) == 12);
    CHECK_FALSE(exact_sqrt(mpz_class(145)).has_value());
    CHECK_FALSE(exact_sqrt(mpz_class(-4)).has_value());
}

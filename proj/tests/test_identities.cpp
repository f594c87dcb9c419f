#include <doctest.h>

#include <random>

#include "kfull/identities.hpp"
#include "kfull/nt_core.hpp"
#include "oracles.hpp"

using namespace kfull;

namespace {

mpz_class factorial(unsigned long n) {
    mpz_class r = 1;
    for (unsigned long i = 2; i <= n; ++i) r *= i;
    return r;
}

// Unexpanded product difference, written independently of the library.
mpz_class product_difference(unsigned l, const mpz_class& X, const mpz_class& d) {
    mpz_class odd = 1, even = 1;
    for (unsigned j = 0; j <= l; ++j) {
        const mpz_class f = oracle::power(X + j * d, oracle::binom(l, j).get_ui());
        (j % 2 ? odd : even) *= f;
    }
    return odd - even;
}

}  // namespace

TEST_CASE("stirling2") {
    CHECK(stirling2(3, 2) == 3);
    CHECK(stirling2(2, 3) == 0);
    for (unsigned l = 0; l <= 10; ++l) CHECK(stirling2(l, l) == 1);
    CHECK(stirling2(10, 4) == 34105);
    // recurrence S(n, l) = l S(n-1, l) + S(n-1, l-1)
    for (unsigned n = 1; n <= 15; ++n)
        for (unsigned l = 1; l <= n; ++l) REQUIRE(stirling2(n, l) == l * stirling2(n - 1, l) + stirling2(n - 1, l - 1));
}

TEST_CASE("surjection_sum") {
    CHECK(surjection_sum(3, 2) == 0);
    CHECK(surjection_sum(2, 2) == -2);
    CHECK(surjection_sum(4, 4) == -24);
    for (unsigned l = 2; l <= 12; ++l)
        for (unsigned n = 1; n < l; ++n) REQUIRE(surjection_sum(l, n) == 0);
    for (unsigned l = 1; l <= 10; ++l) CHECK(surjection_sum(l, l) == (l % 2 ? 1 : -1) * factorial(l));
}

TEST_CASE("binomial halves") {
    for (unsigned l = 1; l <= 12; ++l) {
        mpz_class odd = 0, even = 0;
        for (unsigned j = 0; j <= l; ++j) (j % 2 ? odd : even) += oracle::binom(l, j);
        REQUIRE(odd == even);
        REQUIRE(odd == oracle::power(2, l - 1));
    }
}

TEST_CASE("build_F small cases") {
    const BinaryForm f2 = build_F(2);
    CHECK(f2.degree() == 2);
    CHECK(f2.coeffs().size() == 1);
    CHECK(f2.coeff(2) == 1);

    const BinaryForm f3 = build_F(3);
    CHECK(f3.coeffs().size() == 2);
    CHECK(f3.coeff(3) == 2);
    CHECK(f3.coeff(4) == 3);

    CHECK(build_F(4).coeff(3) == 0);
    CHECK_THROWS_AS(build_F(1), PreconditionError);
    CHECK_THROWS_AS(build_F(kMaxEll + 1), PreconditionError);
}

TEST_CASE("extract_G") {
    CHECK(extract_G(build_F(2), 2).coeffs() == std::map<std::size_t, mpz_class>{{0, 1}});
    const BinaryForm g3 = extract_G(build_F(3), 3);
    CHECK(g3.coeff(0) == 2);
    CHECK(g3.coeff(1) == 3);
    CHECK(evaluate_form(g3, 1, 0) == 2);
    CHECK(evaluate_form(extract_G(build_F(5), 5), 1, 0) == 24);

    BinaryForm bad(3);
    bad.set(1, 1);
    CHECK_THROWS_AS(extract_G(bad, 2), VerificationError);
}

TEST_CASE("evaluate_form") {
    CHECK(evaluate_form(build_F(3), 10, 1) == 23);
    CHECK(evaluate_form(build_F(4), 0, 0) == 0);
    CHECK(evaluate_form(build_F(4), 7, 2) == product_difference(4, 7, 2));
    CHECK(F_direct(4, 7, 2) == product_difference(4, 7, 2));
}

TEST_CASE("property: expansion matches direct products for l = 2..8") {
    std::mt19937_64 rng(20240601);
    std::uniform_int_distribution<long> dist(-1000000, 1000000);
    for (unsigned l = 2; l <= 8; ++l) {
        const BinaryForm F = build_F(l);
        for (int i = 0; i < 100; ++i) {
            const mpz_class X = dist(rng), d = dist(rng);
            REQUIRE(evaluate_form(F, X, d) == product_difference(l, X, d));
        }
    }
}

TEST_CASE("property: G has the expected degree and leading value for l = 2..8") {
    for (unsigned l = 2; l <= 8; ++l) {
        const BinaryForm F = build_F(l);
        for (std::size_t i = 0; i < l; ++i) REQUIRE(F.coeff(i) == 0);
        const BinaryForm G = extract_G(F, l);
        CHECK(G.degree_in_x() == (std::size_t{1} << (l - 1)) - l);
        CHECK(evaluate_form(G, 1, 0) == factorial(l - 1));
    }
}

TEST_CASE("BinaryForm arithmetic") {
    BinaryForm a(1), b(1);
    a.set(0, 1);  // X
    b.set(1, 1);  // d
    const BinaryForm p = a * b;
    CHECK(p.degree() == 2);
    CHECK(p.coeff(1) == 1);
    CHECK((p - p).coeffs().empty());
    CHECK(p.min_d_power() == 1);
    a.set(0, 0);
    CHECK(a.coeffs().empty());
}

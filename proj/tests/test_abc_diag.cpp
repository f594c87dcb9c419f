#include <doctest.h>

#include <cmath>

#include "kfull/abc_diag.hpp"
#include "kfull/ap_search.hpp"
#include "kfull/constructions.hpp"
#include "oracles.hpp"

using namespace kfull;

TEST_CASE("theorem1_exponents examples") {
    const auto r52 = theorem1_exponents(5, 2);
    CHECK(r52.e_gcd == mpq_class(2, 7));
    CHECK(r52.gcd_nontrivial);
    CHECK_FALSE(r52.exceptional);

    const auto r32 = theorem1_exponents(3, 2);
    CHECK(r32.e_gcd <= 0);
    CHECK(r32.exceptional);
    CHECK(r32.strengthened);

    const auto r42 = theorem1_exponents(4, 2);
    REQUIRE(r42.s_dN.has_value());
    CHECK(*r42.s_dN == mpq_class(3, 5));
    CHECK(*r42.s_dN == mpq_class(3 * 4 - 6) / (4 * 4 - 6));

    CHECK_THROWS_AS(theorem1_exponents(2, 2), PreconditionError);
}

TEST_CASE("property: e_gcd is positive except at the three exceptional pairs") {
    for (unsigned m = 3; m <= 40; ++m)
        for (unsigned k = 2; k <= 12; ++k) {
            const auto r = theorem1_exponents(m, k);
            const bool exceptional = (m == 3 && k <= 3) || (m == 4 && k == 2);
            REQUIRE(r.exceptional == exceptional);
            REQUIRE((r.e_gcd > 0) == !exceptional);
            REQUIRE(r.strengthened == (m >= 2 * k - 1));
        }
}

TEST_CASE("witness_diagnostics") {
    const auto d = witness_diagnostics(make_factored_witness(2, 3, 729000, 316, Source::searched));
    CHECK(d.ratio_text == "0.4263");
    CHECK(d.t == 4);
    CHECK_FALSE(d.theta_lower.has_value());

    const auto trivial = witness_diagnostics(trivial_family(4, 2));
    CHECK(trivial.log_d_over_log_N == doctest::Approx(1.0));
    REQUIRE(trivial.theta_lower.has_value());
    CHECK(*trivial.theta_lower == mpq_class(3, 5));
    CHECK(*trivial.theta_upper == mpq_class(4, 5));

    const auto fam = witness_diagnostics(family_4term(4, 1).witness);
    CHECK(fam.log_d_over_log_N < 0.8);
}

TEST_CASE("abc_quality") {
    std::optional<mpz_class> rad;
    const auto q = abc_quality(1, 8, 9, &rad);
    REQUIRE(q.has_value());
    CHECK(*rad == 6);
    CHECK(std::stod(*q) == doctest::Approx(std::log(9.0) / std::log(6.0)).epsilon(1e-12));
    CHECK(q->substr(0, 6) == "1.2262");
    CHECK_THROWS_AS(abc_quality(1, 8, 10), PreconditionError);
}

TEST_CASE("kabc_triple on small progressions") {
    const auto t = kabc_triple(ap3_squarefull(2, 1));
    CHECK(t.t == 1);
    CHECK(t.a + t.b == t.c);
    CHECK(gcd(t.a, t.b) == 1);
    CHECK(t.D <= 16);
    CHECK(t.D_within_bound);
    CHECK(t.a == 49);
    CHECK(t.b == 576);
    CHECK(t.c == 625);
    REQUIRE(t.quality.has_value());

    const auto w = make_factored_witness(2, 3, 729000, 316, Source::searched);
    const auto t2 = kabc_triple(w);
    CHECK(t2.t == 4);
    CHECK(t2.a + t2.b == t2.c);
}

TEST_CASE("property: kabc identity over searched and constructed witnesses") {
    std::vector<ProgressionWitness> ws;
    for (const auto& row : find_aps_window(10000000, 2, 3, RatioLimit::power("1")).rows) ws.push_back(row.witness);
    for (const auto& row : find_aps_window(10000000, 2, 4, RatioLimit::power("1")).rows) ws.push_back(row.witness);
    ws.push_back(ap3_cubefull_witness(ap3_cubefull_seed()));
    ws.push_back(family_4term(4, 1).witness);
    ws.push_back(family_4term(5, 1).witness);
    ws.push_back(trivial_family(5, 2));
    REQUIRE(ws.size() > 20);
    for (const auto& w : ws) {
        const auto t = kabc_triple(w);
        REQUIRE(t.a + t.b == t.c);
        REQUIRE(gcd(t.a, t.b) == 1);
        REQUIRE(t.D_within_bound);
    }
}

TEST_CASE("lemma5ap_check examples") {
    CHECK(lemma5ap_check(mpz_class(1728), mpz_class(27), 2));
    CHECK(lemma5ap_check(mpz_class(1728), mpz_class(1), 2));
    CHECK(lemma5ap_check(mpz_class(1), mpz_class(1), 2));
    CHECK(lemma5ap_check(mpz_class(1728), mpz_class(1728), 2));
    CHECK_THROWS_AS(lemma5ap_check(mpz_class(1728), mpz_class(25), 2), PreconditionError);
    CHECK_THROWS_AS(lemma5ap_check(mpz_class(12), mpz_class(1), 2), PreconditionError);
}

TEST_CASE("property: lemma5ap against an integer oracle") {
    // Rad(n/t)^(k^2) t <= n^k checked with independent arithmetic for n <= 20000.
    for (unsigned k : {2u, 3u})
        for (std::uint64_t n : oracle::kfull_upto(20000, k))
            for (std::uint64_t t = 1; t <= n; ++t) {
                if (n % t != 0 || !oracle::is_kfull(t, k)) continue;
                const mpz_class lhs = oracle::power(oracle::radical(n / t), k * k) * t;
                const bool expected = lhs <= oracle::power(n, k);
                REQUIRE(expected);
                REQUIRE(lemma5ap_check(mpz_class(n), mpz_class(t), k) == expected);
            }
}

TEST_CASE("roadie_check") {
    CHECK(roadie_check(trivial_family(4, 2)));
    CHECK(roadie_check(ap3_squarefull(2, 1)));
    CHECK_THROWS_AS(roadie_check(ap3_cubefull_witness(ap3_cubefull_seed())), PreconditionError);
    for (const auto& row : find_aps_window(100000000, 2, 4, RatioLimit::power("1")).rows)
        REQUIRE(roadie_check(row.witness));
}

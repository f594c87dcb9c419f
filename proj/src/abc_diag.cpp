#include "kfull/abc_diag.hpp"

#include <algorithm>
#include <array>
#include <map>

#include "kfull/identities.hpp"
#include "kfull/logmath.hpp"

namespace kfull {

namespace {

constexpr std::size_t kMaxFactorDigits = 80;
constexpr std::uint64_t kRhoBudget = 1u << 20;

std::size_t digits(const mpz_class& n) { return mpz_sizeinbase(n.get_mpz_t(), 10); }

std::optional<FactoredNatural> factor_if_feasible(const mpz_class& n) {
    if (digits(n) > kMaxFactorDigits) return std::nullopt;
    return try_factorize(n, kRhoBudget);
}

FactoredNatural factored_term(const TermCertificate& cert) {
    if (auto f = cert.as_factored()) return *f;
    if (auto f = factor_if_feasible(cert.value)) return *f;
    throw PreconditionError("term " + cert.value.get_str().substr(0, 20) + "... has no prime factorization");
}

mpz_class binomial(unsigned long n, unsigned long k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

}  // namespace

ExponentReport theorem1_exponents(unsigned m, unsigned k) {
    if (m < 3 || k < 2) throw PreconditionError("theorem1_exponents: needs m >= 3 and k >= 2");
    ExponentReport r;
    r.m = m;
    r.k = k;
    const mpq_class M(m), inv_k(1, k), inv_k2(1, k * k);
    auto ratio = [](const mpq_class& num, const mpq_class& den) -> std::optional<mpq_class> {
        if (den == 0) return std::nullopt;
        mpq_class q = num / den;
        q.canonicalize();
        return q;
    };
    const mpq_class top = M * (1 - inv_k);
    auto exponents = [&](const mpq_class& inner) {
        const mpq_class bottom = M * (1 - inner);
        return std::array<std::optional<mpq_class>, 3>{ratio(top - 2, bottom - 2), ratio(top - 1, bottom - 1),
                                                       ratio(top + inv_k - 2, bottom + inv_k - 2)};
    };
    const auto base = exponents(inv_k2);
    r.e_gcd = *base[0];
    r.e_dN = *base[1];
    r.e_Nd = *base[2];
    r.exceptional = (m == 3 && (k == 2 || k == 3)) || (m == 4 && k == 2);
    r.gcd_nontrivial = r.e_gcd > 0;
    r.dN_nontrivial = r.e_dN > 0;
    r.Nd_nontrivial = r.e_Nd > 0;
    if (m >= 2 * k - 1) {
        r.strengthened = true;
        const auto s = exponents(mpq_class(1, 2 * k - 1));
        r.s_gcd = s[0];
        r.s_dN = s[1];
        r.s_Nd = s[2];
    }
    return r;
}

WitnessDiagnostics witness_diagnostics(const ProgressionWitness& w) {
    if (w.N < 2 || w.d < 1) throw PreconditionError("witness_diagnostics: needs N >= 2 and d >= 1");
    WitnessDiagnostics out;
    out.t = gcd(w.N, w.d);
    const mpz_class big = std::max(w.N, w.d);
    out.log_t_over_log_max = out.t == 1 ? 0.0 : log_ratio(out.t, big);
    out.log_d_over_log_N = log_ratio(w.d, w.N);
    out.ratio_text = log_ratio_truncated(w.d, w.N, 4);
    out.exponents = theorem1_exponents(std::max(3u, w.m), w.k);
    if (w.m >= 4) {
        out.theta_lower = mpq_class(3 * w.m - 6, 4 * w.m - 6);
        out.theta_upper = mpq_class(2 * w.m - 4, 2 * w.m - 3);
        out.theta_lower->canonicalize();
        out.theta_upper->canonicalize();
    }
    return out;
}

std::optional<std::string> abc_quality(const mpz_class& a, const mpz_class& b, const mpz_class& c,
                                       std::optional<mpz_class>* radical_out) {
    if (a < 1 || b < 1 || a + b != c) throw PreconditionError("abc_quality: needs positive a + b = c");
    mpz_class rad = 1;
    for (const mpz_class* v : {&a, &b, &c}) {
        auto f = factor_if_feasible(*v);
        if (!f) return std::nullopt;
        rad = lcm(rad, radical(*f));
    }
    if (radical_out) *radical_out = rad;
    return log_ratio_digits(c, rad, 50);
}

AbcTriple kabc_triple(const ProgressionWitness& w) {
    if (w.m < 3) throw PreconditionError("kabc_triple: m must be >= 3");
    if (w.N < 1 || w.d < 1) throw PreconditionError("kabc_triple: needs N, d >= 1");
    const unsigned l = w.m - 1;
    AbcTriple out;
    out.t = gcd(w.N, w.d);
    out.N0 = w.N / out.t;
    out.d0 = w.d / out.t;

    mpz_class odd = 1, even = 1;
    for (unsigned j = 0; j <= l; ++j) {
        const mpz_class factor = pow_ui(out.N0 + out.d0 * j, binomial(l, j).get_ui());
        (j % 2 ? odd : even) *= factor;
    }
    const BinaryForm G = extract_G(build_F(l), l);
    const mpz_class tail = pow_ui(out.d0, l) * G.evaluate(out.N0, out.d0);
    if (odd != even + tail) throw VerificationError("kabc_triple: odd product != even product + d0^l G(N0, d0)");

    out.D = gcd(odd, even);
    out.D_within_bound = out.D <= pow_ui(l, static_cast<unsigned long>(l) * l);
    if (odd == even) throw VerificationError("kabc_triple: degenerate identity (equal products)");
    const mpz_class& lo = odd < even ? odd : even;
    const mpz_class& hi = odd < even ? even : odd;
    out.a = lo / out.D;
    out.c = hi / out.D;
    out.b = out.c - out.a;
    if (out.a + out.b != out.c || gcd(out.a, out.b) != 1) throw VerificationError("kabc_triple: reduced triple is not coprime");
    out.quality = abc_quality(out.a, out.b, out.c, &out.radical);
    return out;
}

bool lemma5ap_check(const FactoredNatural& n, const FactoredNatural& t, unsigned k) {
    if (k < 2) throw PreconditionError("lemma5ap_check: k must be >= 2");
    if (!is_kfull(n, k) || !is_kfull(t, k)) throw PreconditionError("lemma5ap_check: n and t must be k-full");
    mpz_class rad = 1;
    for (const auto& [p, e] : n.factors) {
        auto it = t.factors.find(p);
        const unsigned long et = it == t.factors.end() ? 0 : it->second;
        if (et > e) throw PreconditionError("lemma5ap_check: t must divide n");
        if (et < e) rad *= p;
    }
    for (const auto& [p, e] : t.factors)
        if (!n.factors.contains(p)) throw PreconditionError("lemma5ap_check: t must divide n");
    return pow_ui(rad, static_cast<unsigned long>(k) * k) * t.value <= pow_ui(n.value, k);
}

bool lemma5ap_check(const mpz_class& n, const mpz_class& t, unsigned k) {
    if (n < 1 || t < 1) throw PreconditionError("lemma5ap_check: n and t must be positive");
    if (!mpz_divisible_p(n.get_mpz_t(), t.get_mpz_t())) throw PreconditionError("lemma5ap_check: t must divide n");
    return lemma5ap_check(factorize(n), factorize(t), k);
}

bool roadie_check(const ProgressionWitness& w) {
    if (w.m < 2 * w.k - 1) throw PreconditionError("roadie_check: needs m >= 2k - 1");
    if (w.terms.size() != w.m) throw PreconditionError("roadie_check: witness term count differs from m");
    std::vector<FactoredNatural> terms;
    for (const auto& cert : w.terms) terms.push_back(factored_term(cert));

    // nu_p(t) = min(nu_p(N), nu_p(N + d)) since gcd(N, d) = gcd(N, N + d).
    std::map<mpz_class, unsigned long> t_factors;
    mpz_class t = 1;
    for (const auto& [p, e] : terms[0].factors) {
        auto it = terms[1].factors.find(p);
        if (it == terms[1].factors.end()) continue;
        t_factors[p] = std::min(e, it->second);
        t *= pow_ui(p, t_factors[p]);
    }
    if (t != gcd(w.N, w.d)) throw VerificationError("roadie_check: gcd from factorizations disagrees");

    std::map<mpz_class, unsigned long> total;
    mpz_class parts = 1;
    for (const auto& f : terms) {
        for (const auto& [p, e] : f.factors) total[p] += e;
        for (const auto& a : kfull_decompose(f, w.k).parts) parts *= a;
    }
    mpz_class rad = 1;
    for (const auto& [p, e] : total) {
        auto it = t_factors.find(p);
        const unsigned long removed = it == t_factors.end() ? 0 : it->second * w.m;
        if (e > removed) rad *= p;
    }
    mpz_class primorial = 1;
    for (std::uint32_t p : small_primes()) {
        if (p > w.m) break;
        primorial *= p;
    }
    const unsigned long e = 2 * w.k - 1;
    return pow_ui(rad, e) * pow_ui(t, w.m) <= pow_ui(primorial, e) * pow_ui(parts, e);
}

}  // namespace kfull

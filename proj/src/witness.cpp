#include "kfull/witness.hpp"

#include <algorithm>
#include <array>
#include <utility>

namespace kfull {

namespace {

constexpr std::array<std::pair<Source, const char*>, 6> kSourceNames{{
    {Source::searched, "searched"},
    {Source::ap3_squarefull, "ap3-squarefull"},
    {Source::ap3_cubefull, "ap3-cubefull"},
    {Source::ap4_elliptic, "ap4-elliptic"},
    {Source::family_4term, "family-4term"},
    {Source::cfrac_small_d, "cfrac-small-d"},
}};

// Largest value we are willing to factor from scratch when a term arrives
// without a certificate.
constexpr std::size_t kMaxUncertifiedDigits = 60;

mpz_class parse_integer(const nlohmann::json& j, const char* what) {
    mpz_class v;
    if (j.is_string()) {
        if (v.set_str(j.get<std::string>(), 10) != 0) throw PreconditionError(std::string("malformed integer in ") + what);
    } else if (j.is_number_integer()) {
        v = mpz_class(j.dump(), 10);
    } else {
        throw PreconditionError(std::string("expected integer for ") + what);
    }
    return v;
}

}  // namespace

std::string to_string(Source s) {
    for (const auto& [src, name] : kSourceNames)
        if (src == s) return name;
    return "unknown";
}

Source source_from_string(const std::string& s) {
    for (const auto& [src, name] : kSourceNames)
        if (s == name) return src;
    throw PreconditionError("unknown witness source '" + s + "'");
}

void normalize(ProgressionWitness& w) {
    if (w.d >= 0) return;
    w.N = w.N + w.d * (w.m - 1);
    w.d = -w.d;
    std::reverse(w.terms.begin(), w.terms.end());
}

ProgressionWitness make_factored_witness(unsigned k, unsigned m, const mpz_class& N, const mpz_class& d,
                                         Source source) {
    ProgressionWitness w;
    w.k = k;
    w.m = m;
    w.N = N;
    w.d = d;
    w.source = source;
    for (unsigned j = 0; j < m; ++j) {
        mpz_class t = N + d * j;
        if (t < 1) throw PreconditionError("progression term " + std::to_string(j) + " is not positive");
        w.terms.push_back(TermCertificate::from_factorization(factorize(t)));
    }
    normalize(w);
    return w;
}

VerifyReport verify_witness(const ProgressionWitness& w) {
    auto fail = [](std::string what) { return VerifyReport{false, std::move(what)}; };
    if (w.k < 2) return fail("k >= 2");
    if (w.m < 2) return fail("m >= 2");
    if (w.terms.size() != w.m) return fail("term count equals m");
    if (w.d <= 0) return fail("d > 0");
    if (w.N < 1) return fail("N >= 1");
    for (unsigned j = 0; j < w.m; ++j) {
        const auto& t = w.terms[j];
        const std::string tag = "term " + std::to_string(j);
        if (t.value != w.term(j)) return fail(tag + " equals N + " + std::to_string(j) + "d");
        if (t.recompose() != t.value) return fail(tag + " certificate recomposes to value");
        if (!t.certifies_kfull(w.k)) return fail(tag + " is " + std::to_string(w.k) + "-full");
    }
    if (w.claims_coprime && gcd(w.N, w.d) != 1) return fail("gcd(N, d) = 1");
    if (w.source == Source::ap4_elliptic) {
        if (!w.w) return fail("elliptic witness carries w");
        const mpz_class target = 73 * 73 * 73 * (*w.w) * (*w.w);
        if (w.term(0) != target && w.term(w.m - 1) != target) return fail("end term equals 73^3 * w^2");
    }
    return {};
}

nlohmann::json to_json(const FactoredNatural& f) {
    nlohmann::json factors = nlohmann::json::array();
    for (const auto& [p, e] : f.factors) factors.push_back({p.get_str(), e});
    return {{"value", f.value.get_str()}, {"factors", factors}};
}

nlohmann::json to_json(const TermCertificate& c) {
    nlohmann::json factors = nlohmann::json::array();
    for (const auto& [b, e] : c.powers) factors.push_back({b.get_str(), e});
    return {{"value", c.value.get_str()}, {"factors", factors}, {"prime_factors", c.prime_bases}};
}

nlohmann::json to_json(const ProgressionWitness& w) {
    nlohmann::json j;
    j["k"] = w.k;
    j["m"] = w.m;
    j["N"] = w.N.get_str();
    j["d"] = w.d.get_str();
    j["source"] = to_string(w.source);
    j["coprime"] = w.claims_coprime;
    if (w.w) j["w"] = w.w->get_str();
    j["terms"] = nlohmann::json::array();
    for (const auto& t : w.terms) j["terms"].push_back(to_json(t));
    return j;
}

ProgressionWitness witness_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw PreconditionError("witness JSON must be an object");
    for (const char* key : {"k", "m", "N", "d", "terms"})
        if (!j.contains(key)) throw PreconditionError(std::string("witness JSON lacks '") + key + "'");
    ProgressionWitness w;
    w.k = j.at("k").get<unsigned>();
    w.m = j.at("m").get<unsigned>();
    w.N = parse_integer(j.at("N"), "N");
    w.d = parse_integer(j.at("d"), "d");
    w.source = j.contains("source") ? source_from_string(j.at("source").get<std::string>()) : Source::searched;
    w.claims_coprime = j.value("coprime", false);
    if (j.contains("w")) w.w = parse_integer(j.at("w"), "w");
    if (!j.at("terms").is_array()) throw PreconditionError("'terms' must be an array");
    for (const auto& t : j.at("terms")) {
        mpz_class value = parse_integer(t.is_object() ? t.at("value") : t, "term value");
        if (t.is_object() && t.contains("factors")) {
            TermCertificate c;
            c.value = value;
            c.prime_bases = t.value("prime_factors", true);
            for (const auto& pe : t.at("factors")) {
                if (!pe.is_array() || pe.size() != 2) throw PreconditionError("factor entries are [base, exponent]");
                c.powers.emplace_back(parse_integer(pe[0], "factor base"), pe[1].get<unsigned long>());
            }
            w.terms.push_back(std::move(c));
        } else {
            if (value < 1) throw PreconditionError("term values must be positive");
            if (mpz_sizeinbase(value.get_mpz_t(), 10) > kMaxUncertifiedDigits)
                throw PreconditionError("uncertified term too large to factor");
            w.terms.push_back(TermCertificate::from_factorization(factorize(value)));
        }
    }
    return w;
}

}  // namespace kfull

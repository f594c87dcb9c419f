#pragma once

#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "kfull/nt_core.hpp"

namespace kfull {

enum class Source {
    searched,
    ap3_squarefull,
    ap3_cubefull,
    ap4_elliptic,
    family_4term,
    cfrac_small_d,
};

std::string to_string(Source s);
Source source_from_string(const std::string& s);

/// A claimed m-term progression N, N+d, ..., N+(m-1)d of k-full numbers.
struct ProgressionWitness {
    unsigned k = 2;
    unsigned m = 0;
    mpz_class N;
    mpz_class d;
    std::vector<TermCertificate> terms;
    Source source = Source::searched;
    /// Set by constructions that promise gcd(N, d) = 1.
    bool claims_coprime = false;
    /// Elliptic witnesses: one end term equals 73^3 * w^2.
    std::optional<mpz_class> w;

    mpz_class term(unsigned j) const { return N + d * j; }
};

/// Flips a decreasing progression so that d > 0 (terms reversed).
void normalize(ProgressionWitness& w);

/// Builds a witness with fully factored terms (for values small enough to factor).
ProgressionWitness make_factored_witness(unsigned k, unsigned m, const mpz_class& N, const mpz_class& d,
                                         Source source);

struct VerifyReport {
    bool ok = true;
    std::string failed;  // name of the first failing predicate

    explicit operator bool() const { return ok; }
};

/// Independent re-verification: AP structure, certificates, k-fullness,
/// coprimality claims and the 73^3 * square condition for elliptic witnesses.
VerifyReport verify_witness(const ProgressionWitness& w);

nlohmann::json to_json(const FactoredNatural& f);
nlohmann::json to_json(const TermCertificate& c);
nlohmann::json to_json(const ProgressionWitness& w);

/// Parses a witness. Terms may omit "factors", in which case the value is
/// factorized afresh (only feasible for modest sizes).
ProgressionWitness witness_from_json(const nlohmann::json& j);

}  // namespace kfull

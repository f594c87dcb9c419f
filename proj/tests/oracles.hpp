#pragma once

// Independent reference implementations used as test oracles. They are
// deliberately naive and share no code with the library.

#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include <gmpxx.h>

namespace oracle {

using u64 = std::uint64_t;

inline std::map<u64, unsigned> trial_factor(u64 n) {
    std::map<u64, unsigned> f;
    for (u64 p = 2; p * p <= n; ++p)
        while (n % p == 0) {
            ++f[p];
            n /= p;
        }
    if (n > 1) ++f[n];
    return f;
}

inline bool is_kfull(u64 n, unsigned k) {
    for (auto [p, e] : trial_factor(n))
        if (e < k) return false;
    return true;
}

inline u64 radical(u64 n) {
    u64 r = 1;
    for (auto [p, e] : trial_factor(n)) r *= p;
    return r;
}

inline std::vector<u64> kfull_upto(u64 bound, unsigned k) {
    std::vector<u64> out;
    for (u64 n = 1; n <= bound; ++n)
        if (is_kfull(n, k)) out.push_back(n);
    return out;
}

/// All (N, d) with N, N+d, ..., N+(m-1)d k-full, last term <= bound.
inline std::vector<std::pair<u64, u64>> brute_aps(u64 bound, unsigned k, unsigned m) {
    std::vector<bool> full(bound + 1, false);
    for (u64 v : kfull_upto(bound, k)) full[v] = true;
    std::vector<std::pair<u64, u64>> out;
    for (u64 N = 1; N <= bound; ++N) {
        if (!full[N]) continue;
        for (u64 d = 1; N + (m - 1) * d <= bound; ++d) {
            bool ok = true;
            for (unsigned j = 1; j < m && ok; ++j) ok = full[N + j * d];
            if (ok) out.emplace_back(N, d);
        }
    }
    return out;
}

inline mpz_class binom(unsigned n, unsigned k) {
    mpz_class r = 1;
    for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

inline mpz_class power(mpz_class b, unsigned long e) {
    mpz_class r = 1;
    while (e--) r *= b;
    return r;
}

/// Chord-and-tangent law on y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6
/// written out independently; points as (inf, x, y).
struct Pt {
    bool inf = true;
    mpq_class x, y;
};

struct LongCurve {
    long a1, a2, a3, a4, a6;

    Pt add(const Pt& P, const Pt& Q) const {
        if (P.inf) return Q;
        if (Q.inf) return P;
        mpq_class m;
        if (P.x == Q.x) {
            mpq_class denom = 2 * P.y + a1 * P.x + a3;
            if (P.y != Q.y || denom == 0) return {};
            m = (3 * P.x * P.x + 2 * a2 * P.x + a4 - a1 * P.y) / denom;
        } else {
            m = (Q.y - P.y) / (Q.x - P.x);
        }
        mpq_class x = m * m + a1 * m - a2 - P.x - Q.x;
        mpq_class y = -(m + a1) * x - (P.y - m * P.x) - a3;
        x.canonicalize();
        y.canonicalize();
        return {false, x, y};
    }
};

}  // namespace oracle

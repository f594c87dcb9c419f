#include "kfull/ap_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "kfull/logmath.hpp"

namespace kfull {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// floor(x^(1/e))
u64 iroot(u64 x, unsigned e) {
    if (e == 1 || x < 2) return x;
    auto pow_le = [x, e](u64 r) {
        u128 acc = 1;
        for (unsigned i = 0; i < e; ++i) {
            acc *= r;
            if (acc > x) return false;
        }
        return true;
    };
    u64 r = static_cast<u64>(std::pow(static_cast<long double>(x), 1.0L / e));
    while (r > 0 && !pow_le(r)) --r;
    while (pow_le(r + 1)) ++r;
    return r;
}

std::vector<bool> squarefree_flags(u64 limit) {
    std::vector<bool> sf(limit + 1, true);
    for (u64 p = 2; p * p <= limit; ++p)
        for (u64 q = p * p; q <= limit; q += p * p) sf[q] = false;
    return sf;
}

unsigned resolve_threads(unsigned requested) {
    unsigned t = requested ? requested : std::thread::hardware_concurrency();
    return std::max(1u, t);
}

// Runs body(lo, hi, out) over [0, n) split into contiguous chunks and
// concatenates the per-chunk outputs in chunk order.
template <class T, class Body>
std::vector<T> parallel_collect(std::size_t n, unsigned threads, Body body) {
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, n / 4096)));
    threads = std::max(1u, threads);
    std::vector<std::vector<T>> parts(threads);
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        std::size_t lo = n * t / threads, hi = n * (t + 1) / threads;
        if (threads == 1) {
            body(lo, hi, parts[t]);
        } else {
            pool.emplace_back([&, lo, hi, t] { body(lo, hi, parts[t]); });
        }
    }
    pool.clear();
    std::vector<T> out;
    for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

mpz_class to_mpz(u64 v) {
    mpz_class r;
    mpz_import(r.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
    return r;
}

SearchRow make_row(unsigned k, unsigned m, u64 N, u64 d) {
    SearchRow row;
    row.N = to_mpz(N);
    row.d = to_mpz(d);
    row.witness = make_factored_witness(k, m, row.N, row.d, Source::searched);
    row.primitive = primitive_filter(row.witness);
    if (N >= 2) {
        row.ratio = log_ratio(row.d, row.N);
        row.ratio_text = log_ratio_truncated(row.d, row.N, 4);
    } else {
        row.ratio = std::numeric_limits<double>::infinity();
        row.ratio_text = "inf";
    }
    return row;
}

SearchReport assemble(std::vector<std::pair<u64, u64>> hits, unsigned k, unsigned m, u64 bound,
                      std::string constraint, bool primitive_only) {
    std::sort(hits.begin(), hits.end());
    hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
    SearchReport report;
    report.bound = bound;
    report.k = k;
    report.m = m;
    report.constraint = std::move(constraint);
    report.primitive_only = primitive_only;
    for (auto [N, d] : hits) {
        SearchRow row = make_row(k, m, N, d);
        if (primitive_only && !row.primitive) continue;
        report.rows.push_back(std::move(row));
    }
    std::stable_sort(report.rows.begin(), report.rows.end(),
                     [](const SearchRow& a, const SearchRow& b) { return a.ratio < b.ratio; });
    return report;
}

// Generates prod a_i^i for i = k+1..2k-1 with squarefree, pairwise coprime
// a_i, then multiplies by every k-th power that fits.
void generate_kfull(u64 bound, unsigned k, unsigned i, u64 acc, u64 used, const std::vector<bool>& sf,
                    std::vector<u64>& out, std::size_t budget) {
    if (i == k) {
        for (u64 a = 1;; ++a) {
            u128 ak = 1;
            for (unsigned e = 0; e < k; ++e) ak *= a;
            if (ak * acc > bound) break;
            if (out.size() >= budget) throw PreconditionError("enumeration exceeds memory budget");
            out.push_back(static_cast<u64>(ak * acc));
        }
        return;
    }
    for (u64 a = 1; a < sf.size(); ++a) {
        u128 ai = 1;
        for (unsigned e = 0; e < i; ++e) ai *= a;
        if (ai * acc > bound) break;
        if (!sf[a] || std::gcd(a, used) != 1) continue;
        generate_kfull(bound, k, i - 1, static_cast<u64>(ai * acc), used * a, sf, out, budget);
    }
}

}  // namespace

RatioLimit RatioLimit::power(const std::string& text) {
    RatioLimit r;
    r.kind = Kind::at_most_power;
    auto slash = text.find('/');
    try {
        if (slash != std::string::npos) {
            r.num = std::stoul(text.substr(0, slash));
            r.den = std::stoul(text.substr(slash + 1));
        } else {
            auto dot = text.find('.');
            std::string whole = text.substr(0, dot), frac = dot == std::string::npos ? "" : text.substr(dot + 1);
            if (frac.size() > 9) throw PreconditionError("ratio has too many decimals");
            r.den = 1;
            for (std::size_t i = 0; i < frac.size(); ++i) r.den *= 10;
            r.num = (whole.empty() ? 0 : std::stoul(whole)) * r.den + (frac.empty() ? 0 : std::stoul(frac));
        }
    } catch (const std::logic_error&) {
        throw PreconditionError("malformed ratio '" + text + "'");
    }
    if (r.den == 0 || r.num == 0) throw PreconditionError("ratio must be a positive number");
    auto g = std::gcd(r.num, r.den);
    r.num /= g;
    r.den /= g;
    return r;
}

std::string RatioLimit::describe() const {
    if (kind == Kind::below_sqrt) return "d < sqrt(N)";
    return "d <= N^(" + std::to_string(num) + "/" + std::to_string(den) + ")";
}

const SearchRow* SearchReport::find(const mpz_class& d, const mpz_class& N) const {
    for (const auto& r : rows)
        if (r.d == d && r.N == N) return &r;
    return nullptr;
}

std::vector<u64> enumerate_kfull(u64 bound, unsigned k, std::size_t memory_budget) {
    if (k < 2) throw PreconditionError("enumerate_kfull: k must be >= 2");
    if (bound < 1) throw PreconditionError("enumerate_kfull: bound must be >= 1");
    if (bound > (std::numeric_limits<u64>::max() >> 2)) throw PreconditionError("enumerate_kfull: bound too large");
    std::vector<u64> out;
    if (k == 2) {
        // n = a^2 b^3 with b squarefree, a unique representation.
        u64 bmax = iroot(bound, 3);
        auto sf = squarefree_flags(bmax);
        std::size_t count = 0;
        for (u64 b = 1; b <= bmax; ++b)
            if (sf[b]) count += iroot(bound / (b * b * b), 2);
        if (count > memory_budget) throw PreconditionError("enumeration exceeds memory budget");
        out.reserve(count);
        for (u64 b = 1; b <= bmax; ++b) {
            if (!sf[b]) continue;
            u64 b3 = b * b * b;
            u64 amax = iroot(bound / b3, 2);
            for (u64 a = 1; a <= amax; ++a) out.push_back(a * a * b3);
        }
    } else {
        auto sf = squarefree_flags(iroot(bound, k + 1) + 1);
        generate_kfull(bound, k, 2 * k - 1, 1, 1, sf, out, memory_budget);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

KFullSet::KFullSet(u64 bound, unsigned k, std::size_t memory_budget)
    : bound_(bound), k_(k), values_(enumerate_kfull(bound, k, memory_budget)) {
    members_.reserve(values_.size());
    members_.insert(values_.begin(), values_.end());
}

SearchReport find_aps_window(const KFullSet& set, unsigned m, const RatioLimit& limit, const SearchOptions& opts) {
    if (m < 3) throw PreconditionError("find_aps_window: m must be >= 3");
    const auto values = set.values();
    const u64 bound = set.bound();
    const bool sqrt_mode = limit.kind == RatioLimit::Kind::below_sqrt;
    const long double exponent = static_cast<long double>(limit.num) / limit.den;

    auto body = [&](std::size_t lo, std::size_t hi, std::vector<std::pair<u64, u64>>& out) {
        for (std::size_t i = lo; i < hi; ++i) {
            const u64 n1 = values[i];
            if (n1 < 2) continue;
            u64 dmax;
            if (sqrt_mode) {
                dmax = iroot(n1 - 1, 2);  // d^2 < n1
            } else {
                long double lim = std::pow(static_cast<long double>(n1), exponent);
                dmax = lim >= 1.8e19L ? std::numeric_limits<u64>::max() : static_cast<u64>(lim) + 2;
            }
            for (std::size_t j = i + 1; j < values.size(); ++j) {
                const u64 d = values[j] - n1;
                if (d > dmax) break;
                if (static_cast<u128>(d) * (m - 1) + n1 > bound) break;
                bool ok = true;
                for (unsigned t = 2; t < m && ok; ++t) ok = set.contains(n1 + d * t);
                if (!ok) continue;
                if (!sqrt_mode && !leq_power(to_mpz(d), to_mpz(n1), limit.num, limit.den)) continue;
                out.emplace_back(n1, d);
            }
        }
    };
    auto hits = parallel_collect<std::pair<u64, u64>>(values.size(), resolve_threads(opts.threads), body);
    return assemble(std::move(hits), set.k(), m, bound, limit.describe(), opts.primitive_only);
}

SearchReport find_aps_window(u64 bound, unsigned k, unsigned m, const RatioLimit& limit, const SearchOptions& opts) {
    KFullSet set(bound, k, opts.memory_budget);
    return find_aps_window(set, m, limit, opts);
}

SearchReport find_aps_large_d(const KFullSet& set, u64 first_term_bound, unsigned m, const SearchOptions& opts) {
    if (m < 4) throw PreconditionError("find_aps_large_d: m must be >= 4");
    const auto values = set.values();
    const u64 bound = set.bound();
    first_term_bound = std::min(first_term_bound, bound);
    std::vector<bool> small(first_term_bound + 1, false);
    for (u64 v : values) {
        if (v > first_term_bound) break;
        small[v] = true;
    }

    // Iterate over the second term x = N + d and the third term z = N + 2d,
    // so that N = 2x - z ranges over a window of width first_term_bound.
    auto body = [&](std::size_t lo, std::size_t hi, std::vector<std::pair<u64, u64>>& out) {
        for (std::size_t ix = lo; ix < hi; ++ix) {
            const u64 x = values[ix];
            const u64 nmax = std::min(first_term_bound, (x - 1) / 2);  // N < x/2 <=> d > N
            if (nmax == 0) continue;
            const u128 zlo = static_cast<u128>(2) * x - nmax;
            if (zlo > bound) break;
            auto it = std::lower_bound(values.begin() + ix, values.end(), static_cast<u64>(zlo));
            for (; it != values.end(); ++it) {
                const u64 z = *it;
                if (static_cast<u128>(z) >= static_cast<u128>(2) * x) break;
                const u64 N = 2 * x - z;
                if (!small[N]) continue;
                const u64 d = x - N;
                if (static_cast<u128>(d) * (m - 1) + N > bound) continue;
                bool ok = true;
                for (unsigned t = 3; t < m && ok; ++t) ok = set.contains(N + d * t);
                if (ok) out.emplace_back(N, d);
            }
        }
    };
    auto hits = parallel_collect<std::pair<u64, u64>>(values.size(), resolve_threads(opts.threads), body);
    return assemble(std::move(hits), set.k(), m, bound, "d > N, N <= " + std::to_string(first_term_bound),
                    opts.primitive_only);
}

SearchReport find_aps_large_d(u64 term_bound, u64 first_term_bound, unsigned k, unsigned m,
                              const SearchOptions& opts) {
    KFullSet set(term_bound, k, opts.memory_budget);
    return find_aps_large_d(set, first_term_bound, m, opts);
}

bool primitive_filter(const ProgressionWitness& w) {
    const mpz_class g = gcd(w.N, w.d);
    if (g == 1) return true;
    const FactoredNatural gf = factorize(g);

    std::vector<FactoredNatural> terms;
    for (const auto& t : w.terms) {
        auto f = t.as_factored();
        terms.push_back(f ? *f : factorize(t.value));
    }

    std::vector<std::pair<mpz_class, unsigned long>> square_part;
    for (const auto& [p, e] : gf.factors)
        if (e >= 2) square_part.emplace_back(p, e / 2);

    // Odometer over the exponents f_p in [0, e_p / 2] of t.
    std::vector<unsigned long> f(square_part.size(), 0);
    while (true) {
        std::size_t i = 0;
        while (i < f.size() && f[i] == square_part[i].second) f[i++] = 0;
        if (i == f.size()) break;
        ++f[i];
        bool all_kfull = true;
        for (const auto& term : terms) {
            for (std::size_t s = 0; s < f.size() && all_kfull; ++s) {
                auto it = term.factors.find(square_part[s].first);
                unsigned long rest = it->second - 2 * f[s];
                if (rest != 0 && rest < w.k) all_kfull = false;
            }
            if (!all_kfull) break;
        }
        if (all_kfull) return false;
    }
    return true;
}

std::optional<std::pair<u64, u64>> min_common_difference(unsigned m, u64 bound_d, u64 bound_N,
                                                         std::size_t memory_budget) {
    if (m < 2) throw PreconditionError("min_common_difference: m must be >= 2");
    KFullSet set(bound_N + static_cast<u64>(m - 1) * bound_d, 2, memory_budget);
    const auto values = set.values();
    for (u64 d = 1; d <= bound_d; ++d) {
        for (u64 N : values) {
            if (N > bound_N) break;
            bool ok = true;
            for (unsigned t = 1; t < m && ok; ++t) ok = set.contains(N + d * t);
            if (ok) return std::make_pair(d, N);
        }
    }
    return std::nullopt;
}

bool check_primorial_divisibility(const ProgressionWitness& w) {
    for (std::uint32_t p : small_primes()) {
        if (2 * p > w.m) break;
        if (!mpz_divisible_ui_p(w.d.get_mpz_t(), p)) return false;
    }
    return true;
}

ProgressionWitness trivial_family(unsigned m, unsigned k) {
    mpz_class N = 1;
    for (std::uint32_t p : small_primes()) {
        if (p > m) break;
        N *= pow_ui(p, k);
    }
    return make_factored_witness(k, m, N, N, Source::searched);
}

}  // namespace kfull

#include "kfull/nt_core.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace kfull {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr u64 kTrialLimit = 10'000'000;
// Miller-Rabin with bases 2..17 is exact below 341550071728321.
constexpr u64 kDeterministicLimit = 341'550'071'728'321ULL;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 b, u64 e, u64 m) {
    u64 r = 1 % m;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

bool miller_rabin(u64 n, u64 a) {
    if (a % n == 0) return true;
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mulmod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

bool fits_u64(const mpz_class& n) { return mpz_sizeinbase(n.get_mpz_t(), 2) <= 64; }

u64 to_u64(const mpz_class& n) {
    u64 r = 0;
    mpz_export(&r, nullptr, -1, sizeof(r), 0, 0, n.get_mpz_t());
    return r;
}

mpz_class from_u64(u64 v) {
    mpz_class r;
    mpz_import(r.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
    return r;
}

// Brent's variant of Pollard rho; returns a nontrivial factor of composite n.
u64 rho_u64(u64 n) {
    if (n % 2 == 0) return 2;
    for (u64 c = 1;; ++c) {
        u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
        u64 r = 1;
        constexpr u64 m = 128;
        auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        do {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            u64 k = 0;
            do {
                ys = y;
                for (u64 i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                k += m;
            } while (k < r && g == 1);
            r *= 2;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void factor_u64_into(u64 n, std::map<mpz_class, unsigned long>& out) {
    if (n == 1) return;
    if (is_prime_u64(n)) {
        out[from_u64(n)] += 1;
        return;
    }
    u64 f = rho_u64(n);
    factor_u64_into(f, out);
    factor_u64_into(n / f, out);
}

// Returns a nontrivial factor or nullopt once the budget is spent.
std::optional<mpz_class> rho_mpz(const mpz_class& n, u64 budget) {
    if (mpz_even_p(n.get_mpz_t())) return mpz_class(2);
    u64 spent = 0;
    for (unsigned long c = 1; spent < budget; ++c) {
        mpz_class x = 2, y = 2, ys = 2, q = 1, g = 1, t;
        u64 r = 1;
        constexpr u64 m = 128;
        auto f = [&](mpz_class& v) {
            v = v * v + c;
            mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
        };
        do {
            x = y;
            for (u64 i = 0; i < r; ++i) f(y);
            u64 k = 0;
            do {
                ys = y;
                for (u64 i = 0; i < std::min(m, r - k); ++i) {
                    f(y);
                    t = abs(x - y);
                    q = q * t % n;
                }
                spent += std::min(m, r - k);
                g = gcd(q, n);
                k += m;
            } while (k < r && g == 1 && spent < budget);
            r *= 2;
        } while (g == 1 && spent < budget);
        if (g == 1) return std::nullopt;
        if (g == n) {
            do {
                f(ys);
                g = gcd(mpz_class(abs(x - ys)), n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
    return std::nullopt;
}

bool factor_mpz_into(mpz_class n, std::map<mpz_class, unsigned long>& out, u64 budget) {
    if (n == 1) return true;
    if (fits_u64(n)) {
        factor_u64_into(to_u64(n), out);
        return true;
    }
    if (is_prime(n)) {
        out[n] += 1;
        return true;
    }
    auto f = rho_mpz(n, budget);
    if (!f) return false;
    mpz_class other = n / *f;
    return factor_mpz_into(*f, out, budget) && factor_mpz_into(other, out, budget);
}

// Trial division by the cached primes while p^2 <= n; returns the cofactor.
mpz_class trial_divide(mpz_class n, std::map<mpz_class, unsigned long>& out) {
    for (std::uint32_t p : small_primes()) {
        if (fits_u64(n)) {
            u64 v = to_u64(n);
            if (static_cast<u64>(p) * p > v) break;
        }
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            mpz_class prime = p;
            unsigned long e = mpz_remove(n.get_mpz_t(), n.get_mpz_t(), prime.get_mpz_t());
            out[prime] += e;
        }
    }
    return n;
}

std::optional<FactoredNatural> factorize_impl(const mpz_class& n, u64 budget) {
    if (n < 1) throw PreconditionError("factorize: n must be >= 1");
    FactoredNatural result;
    result.value = n;
    if (fits_u64(n)) {
        factor_u64_into(to_u64(n), result.factors);
        return result;
    }
    mpz_class rest = trial_divide(n, result.factors);
    if (!factor_mpz_into(rest, result.factors, budget)) return std::nullopt;
    return result;
}

}  // namespace

mpz_class FactoredNatural::recompose() const {
    mpz_class r = 1;
    for (const auto& [p, e] : factors) r *= pow_ui(p, e);
    return r;
}

unsigned long FactoredNatural::min_exponent() const {
    unsigned long m = 0;
    for (const auto& [p, e] : factors) m = (m == 0) ? e : std::min(m, e);
    return m;
}

TermCertificate TermCertificate::from_factorization(const FactoredNatural& f) {
    TermCertificate c;
    c.value = f.value;
    c.prime_bases = true;
    for (const auto& [p, e] : f.factors) c.powers.emplace_back(p, e);
    return c;
}

TermCertificate TermCertificate::from_powers(std::vector<std::pair<mpz_class, unsigned long>> powers) {
    TermCertificate c;
    c.prime_bases = false;
    for (auto& [b, e] : powers) {
        if (b < 0) b = -b;
        if (b == 0) throw PreconditionError("certificate base must be nonzero");
        if (b == 1 || e == 0) continue;
        c.powers.emplace_back(std::move(b), e);
    }
    c.value = c.recompose();
    return c;
}

mpz_class TermCertificate::recompose() const {
    mpz_class r = 1;
    for (const auto& [b, e] : powers) r *= pow_ui(b, e);
    return r;
}

bool TermCertificate::certifies_kfull(unsigned k) const {
    if (value < 1) return false;
    for (const auto& [b, e] : powers) {
        if (b < 2 || e < k) return false;
        if (prime_bases && !is_prime(b)) return false;
    }
    return recompose() == value;
}

std::optional<FactoredNatural> TermCertificate::as_factored() const {
    if (!prime_bases) return std::nullopt;
    FactoredNatural f;
    f.value = value;
    for (const auto& [b, e] : powers) f.factors[b] += e;
    return f;
}

const std::vector<std::uint32_t>& small_primes() {
    static const std::vector<std::uint32_t> primes = [] {
        std::vector<bool> composite(kTrialLimit + 1, false);
        std::vector<std::uint32_t> ps;
        ps.reserve(670'000);
        for (u64 i = 2; i <= kTrialLimit; ++i) {
            if (composite[i]) continue;
            ps.push_back(static_cast<std::uint32_t>(i));
            for (u64 j = i * i; j <= kTrialLimit; j += i) composite[j] = true;
        }
        return ps;
    }();
    return primes;
}

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    if (n < 37 * 37) return true;
    if (n < kDeterministicLimit) {
        for (u64 a : {2, 3, 5, 7, 11, 13, 17})
            if (!miller_rabin(n, a)) return false;
        return true;
    }
    // Jaeschke/Sinclair bases: exact for all 64-bit n.
    for (u64 a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL})
        if (!miller_rabin(n, a)) return false;
    return true;
}

bool is_prime(const mpz_class& n) {
    if (n < 2) return false;
    if (fits_u64(n)) return is_prime_u64(to_u64(n));
    return mpz_probab_prime_p(n.get_mpz_t(), 64) != 0;
}

FactoredNatural factorize(const mpz_class& n) {
    return *factorize_impl(n, std::numeric_limits<u64>::max());
}

FactoredNatural factorize(std::uint64_t n) {
    if (n == 0) throw PreconditionError("factorize: n must be >= 1");
    FactoredNatural result;
    result.value = from_u64(n);
    factor_u64_into(n, result.factors);
    return result;
}

std::optional<FactoredNatural> try_factorize(const mpz_class& n, std::uint64_t rho_budget) {
    return factorize_impl(n, rho_budget);
}

TermCertificate refine_certificate(const TermCertificate& cert, std::uint64_t rho_budget) {
    if (cert.prime_bases) return cert;
    constexpr std::size_t kMaxDigits = 40;
    std::map<mpz_class, unsigned long> primes;
    std::map<mpz_class, unsigned long> symbolic;
    for (const auto& [b, e] : cert.powers) {
        std::optional<FactoredNatural> f;
        if (mpz_sizeinbase(b.get_mpz_t(), 10) <= kMaxDigits) f = try_factorize(b, rho_budget);
        if (f) {
            for (const auto& [p, pe] : f->factors) primes[p] += pe * e;
        } else {
            symbolic[b] += e;
        }
    }
    TermCertificate out;
    out.value = cert.value;
    out.prime_bases = symbolic.empty();
    for (auto& [p, e] : primes) out.powers.emplace_back(p, e);
    for (auto& [b, e] : symbolic) out.powers.emplace_back(b, e);
    return out;
}

unsigned long nu(const mpz_class& p, const mpz_class& n) {
    if (!is_prime(p)) throw PreconditionError("nu: p must be prime");
    if (n < 1) throw PreconditionError("nu: n must be >= 1");
    mpz_class rest = n;
    return mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
}

mpz_class radical(const FactoredNatural& n) {
    mpz_class r = 1;
    for (const auto& [p, e] : n.factors) r *= p;
    return r;
}

mpz_class radical(const mpz_class& n) { return radical(factorize(n)); }

bool is_kfull(const FactoredNatural& n, unsigned k) {
    if (k < 2) throw PreconditionError("is_kfull: k must be >= 2");
    return std::all_of(n.factors.begin(), n.factors.end(), [k](const auto& pe) { return pe.second >= k; });
}

bool is_kfull(const mpz_class& n, unsigned k) { return is_kfull(factorize(n), k); }

mpz_class KFullDecomposition::recompose() const {
    mpz_class r = 1;
    for (std::size_t i = 0; i < parts.size(); ++i) r *= pow_ui(parts[i], k + i);
    return r;
}

KFullDecomposition kfull_decompose(const FactoredNatural& n, unsigned k) {
    if (!is_kfull(n, k)) throw PreconditionError("kfull_decompose: input is not " + std::to_string(k) + "-full");
    KFullDecomposition out;
    out.k = k;
    out.parts.assign(k, mpz_class(1));
    for (const auto& [p, e] : n.factors) {
        unsigned long q = e / k, r = e % k;
        if (r == 0) {
            out.parts[0] *= pow_ui(p, q);
        } else {
            out.parts[0] *= pow_ui(p, q - 1);
            out.parts[r] *= p;
        }
    }
    return out;
}

KFullDecomposition kfull_decompose(const mpz_class& n, unsigned k) { return kfull_decompose(factorize(n), k); }

std::vector<mpz_class> kfull_divisors(const FactoredNatural& n, unsigned k, std::size_t limit) {
    if (!is_kfull(n, k)) throw PreconditionError("kfull_divisors: input is not k-full");
    std::vector<mpz_class> divs{1};
    for (const auto& [p, e] : n.factors) {
        std::vector<mpz_class> next;
        next.reserve(divs.size() * (e - k + 2));
        for (const auto& d : divs) {
            next.push_back(d);
            mpz_class pk = d * pow_ui(p, k);
            for (unsigned long j = k; j <= e; ++j) {
                next.push_back(pk);
                pk *= p;
            }
        }
        divs = std::move(next);
    }
    std::sort(divs.begin(), divs.end());
    if (divs.size() > limit) divs.resize(limit);
    return divs;
}

mpz_class pow_ui(const mpz_class& base, unsigned long exp) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
    return r;
}

std::optional<mpz_class> exact_sqrt(const mpz_class& n) {
    if (n < 0) return std::nullopt;
    mpz_class r, rem;
    mpz_sqrtrem(r.get_mpz_t(), rem.get_mpz_t(), n.get_mpz_t());
    if (rem != 0) return std::nullopt;
    return r;
}

std::string to_string(const FactoredNatural& f) {
    if (f.factors.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (const auto& [p, e] : f.factors) {
        if (!first) os << '*';
        first = false;
        os << p.get_str();
        if (e > 1) os << '^' << e;
    }
    return os.str();
}

}  // namespace kfull

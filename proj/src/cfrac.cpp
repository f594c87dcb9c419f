#include "kfull/cfrac.hpp"

#include <algorithm>
#include <utility>

namespace kfull {

namespace {

using QPoly = std::vector<mpq_class>;

void trim(QPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

QPoly to_q(const IntPoly& p) {
    QPoly q(p.begin(), p.end());
    trim(q);
    return q;
}

QPoly derivative(const QPoly& p) {
    QPoly d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<unsigned long>(i));
    trim(d);
    return d;
}

QPoly remainder(QPoly a, const QPoly& b) {
    const std::size_t db = b.size() - 1;
    while (a.size() >= b.size()) {
        const mpq_class factor = a.back() / b.back();
        const std::size_t shift = a.size() - 1 - db;
        for (std::size_t i = 0; i <= db; ++i) a[shift + i] -= factor * b[i];
        a.pop_back();
        trim(a);
    }
    return a;
}

int sign_at(const QPoly& p, const mpq_class& x) {
    mpq_class acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return sgn(acc);
}

std::vector<QPoly> sturm_chain(const QPoly& p) {
    std::vector<QPoly> chain{p, derivative(p)};
    while (chain.back().size() > 1) {
        QPoly r = remainder(chain[chain.size() - 2], chain.back());
        if (r.empty()) break;
        for (auto& c : r) c = -c;
        chain.push_back(std::move(r));
    }
    return chain;
}

int variations_at(const std::vector<QPoly>& chain, const mpq_class& x) {
    int count = 0, last = 0;
    for (const auto& p : chain) {
        const int s = sign_at(p, x);
        if (s == 0) continue;
        if (last != 0 && s != last) ++count;
        last = s;
    }
    return count;
}

// A point of (lo, hi) where p does not vanish.
mpq_class split_point(const QPoly& p, const mpq_class& lo, const mpq_class& hi) {
    for (unsigned long den = 2;; ++den) {
        mpq_class mid = lo + (hi - lo) / den;
        mid.canonicalize();
        if (sign_at(p, mid) != 0) return mid;
    }
}

mpz_class floor_q(const mpq_class& x) {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return r;
}

mpz_class ceil_q(const mpq_class& x) {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return r;
}

// P(x + a)
IntPoly taylor_shift(IntPoly p, const mpz_class& a) {
    const std::size_t n = p.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = n - 2;; --j) {
            p[j] += a * p[j + 1];
            if (j == i) break;
        }
    return p;
}

// x^n P(1/x)
IntPoly reversed(const IntPoly& p) {
    if (p.front() == 0) throw VerificationError("continued fraction reached a rational root");
    return IntPoly(p.rbegin(), p.rend());
}

int descartes_variations(const IntPoly& p) {
    int count = 0, last = 0;
    for (const auto& c : p) {
        const int s = sgn(c);
        if (s == 0) continue;
        if (last != 0 && s != last) ++count;
        last = s;
    }
    return count;
}

// floor of the unique root > 1 of p.
mpz_class floor_of_root_above_one(const IntPoly& p) {
    if (descartes_variations(taylor_shift(p, 1)) != 1)
        throw VerificationError("tail polynomial does not have exactly one root above 1");
    const int s1 = sgn(poly_eval(p, 1));
    if (s1 == 0) throw VerificationError("tail polynomial vanishes at 1");
    mpz_class lo = 1, hi = 2;
    while (sgn(poly_eval(p, hi)) == s1) {
        lo = hi;
        hi *= 2;
    }
    while (hi - lo > 1) {
        const mpz_class mid = (lo + hi) / 2;
        if (sgn(poly_eval(p, mid)) == s1) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if (poly_eval(p, hi) == 0) throw VerificationError("continued fraction reached a rational root");
    return lo;
}

}  // namespace

IntPoly small_d_quartic() { return {92, -160, -276, 80, 23}; }

mpz_class small_d_form(const mpz_class& u, const mpz_class& v) {
    const mpz_class u2 = u * u, v2 = v * v;
    return 23 * u2 * u2 + 80 * u2 * u * v - 276 * u2 * v2 - 160 * u * v2 * v + 92 * v2 * v2;
}

mpz_class poly_eval(const IntPoly& p, const mpz_class& x) {
    mpz_class acc = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
    return acc;
}

mpz_class quartic_discriminant(const IntPoly& p) {
    if (p.size() != 5 || p[4] == 0) throw PreconditionError("quartic_discriminant: degree must be 4");
    const mpz_class &e = p[0], &d = p[1], &c = p[2], &b = p[3], &a = p[4];
    return 256 * a * a * a * e * e * e - 192 * a * a * b * d * e * e - 128 * a * a * c * c * e * e +
           144 * a * a * c * d * d * e - 27 * a * a * d * d * d * d + 144 * a * b * b * c * e * e -
           6 * a * b * b * d * d * e - 80 * a * b * c * c * d * e + 18 * a * b * c * d * d * d +
           16 * a * c * c * c * c * e - 4 * a * c * c * c * d * d - 27 * b * b * b * b * e * e +
           18 * b * b * b * c * d * e - 4 * b * b * b * d * d * d - 4 * b * b * c * c * c * e +
           b * b * c * c * d * d;
}

RootIsolation isolate_roots() {
    const IntPoly f = small_d_quartic();
    const QPoly p = to_q(f);
    const auto chain = sturm_chain(p);

    mpz_class max_ratio = 0;
    for (std::size_t i = 0; i + 1 < f.size(); ++i) max_ratio = std::max(max_ratio, mpz_class(abs(f[i])));
    const mpq_class bound = 1 + mpq_class(max_ratio, abs(f.back()));

    std::vector<std::pair<mpq_class, mpq_class>> pending{{-bound, bound}}, found;
    while (!pending.empty()) {
        auto [lo, hi] = pending.back();
        pending.pop_back();
        const int count = variations_at(chain, lo) - variations_at(chain, hi);
        if (count == 0) continue;
        if (count == 1) {
            found.emplace_back(lo, hi);
            continue;
        }
        const mpq_class mid = split_point(p, lo, hi);
        pending.emplace_back(lo, mid);
        pending.emplace_back(mid, hi);
    }
    if (found.size() != 4) throw VerificationError("expected four real roots, found " + std::to_string(found.size()));
    std::sort(found.begin(), found.end());
    RootIsolation out;
    for (unsigned i = 0; i < 4; ++i) out.roots[i] = {i + 1, found[i].first, found[i].second};
    out.discriminant = quartic_discriminant(f);
    return out;
}

QuarticRoot refine(const QuarticRoot& r, const mpq_class& width) {
    if (width <= 0) throw PreconditionError("refine: width must be positive");
    const QPoly p = to_q(small_d_quartic());
    QuarticRoot out = r;
    int slo = sign_at(p, out.lo);
    while (out.hi - out.lo > width) {
        const mpq_class mid = split_point(p, out.lo, out.hi);
        if (sign_at(p, mid) == slo) {
            out.lo = mid;
        } else {
            out.hi = mid;
        }
    }
    return out;
}

std::vector<ConvergentRecord> cf_digits(const QuarticRoot& root, std::size_t count) {
    if (count < 1) throw PreconditionError("cf_digits: count must be >= 1");
    QuarticRoot r = root;
    while (ceil_q(r.hi) - floor_q(r.lo) != 1) r = refine(r, (r.hi - r.lo) / 2);
    mpz_class a = floor_q(r.lo);

    std::vector<ConvergentRecord> out;
    mpz_class p_prev = 1, q_prev = 0, p = a, q = 1;
    out.push_back({0, a, p, q});
    IntPoly tail = reversed(taylor_shift(small_d_quartic(), a));
    for (std::size_t k = 1; k < count; ++k) {
        a = floor_of_root_above_one(tail);
        mpz_class p_next = a * p + p_prev, q_next = a * q + q_prev;
        p_prev = std::exchange(p, p_next);
        q_prev = std::exchange(q, q_next);
        out.push_back({k, a, p, q});
        tail = reversed(taylor_shift(tail, a));
    }
    return out;
}

ProgressionWitness triple_from_uv(const mpz_class& u, const mpz_class& v) {
    if (u == 0 && v == 0) throw PreconditionError("triple_from_uv: (u, v) = (0, 0)");
    if (gcd(u, v) != 1) throw PreconditionError("triple_from_uv: gcd(u, v) must be 1");
    const mpz_class N0 = u * u - 10 * u * v - 2 * v * v;
    const mpz_class s = -5 * u * u - 4 * u * v + 10 * v * v;
    if (N0 == 0 || s == 0) throw PreconditionError("triple_from_uv: degenerate parameters (N0 = 0 or s = 0)");
    const mpz_class d0 = s * s - 2 * N0 * N0;
    if (d0 != small_d_form(u, v)) throw VerificationError("triple_from_uv: s^2 - 2 N0^2 differs from the quartic form");
    if (d0 == 0) throw PreconditionError("triple_from_uv: d = 0");
    const mpz_class sum = 2 * N0 * N0 + s * s;
    if (sum % 27 != 0) throw VerificationError("triple_from_uv: 2 N0^2 + s^2 is not divisible by 27");
    auto t = exact_sqrt(sum / 27);
    if (!t) throw VerificationError("triple_from_uv: (2 N0^2 + s^2) / 27 is not a square");

    ProgressionWitness w;
    w.k = 2;
    w.m = 3;
    w.N = 16 * N0 * N0;
    w.d = 4 * d0;
    w.source = Source::cfrac_small_d;
    auto cert = [](std::vector<std::pair<mpz_class, unsigned long>> p) {
        return refine_certificate(TermCertificate::from_powers(std::move(p)), 1u << 14);
    };
    w.terms = {cert({{2, 4}, {abs(N0), 2}}), cert({{2, 2}, {3, 3}, {*t, 2}}), cert({{2, 3}, {abs(s), 2}})};
    for (unsigned j = 0; j < 3; ++j)
        if (w.terms[j].value != w.term(j)) throw VerificationError("triple_from_uv: certificate mismatch");
    normalize(w);
    return w;
}

SmallDReport find_small_d(std::size_t max_index, unsigned root_index, unsigned long min_quotient) {
    if (root_index < 1 || root_index > 4) throw PreconditionError("find_small_d: root index must be 1..4");
    if (max_index < 1) throw PreconditionError("find_small_d: max_index must be >= 1");
    SmallDReport report;
    report.root_index = root_index;
    report.min_quotient = min_quotient;
    report.digits = cf_digits(isolate_roots().roots[root_index - 1], max_index + 1);
    for (std::size_t i = 1; i <= max_index; ++i) {
        if (report.digits[i].a < min_quotient) continue;
        report.one_based.push_back(i);
        report.zero_based.push_back(i - 1);
        const auto& c = report.digits[i - 1];
        SmallDWitness sw;
        sw.k = i;
        sw.next_quotient = report.digits[i].a;
        sw.u = c.p;
        sw.v = c.q;
        sw.d0_negative = small_d_form(c.p, c.q) < 0;
        sw.witness = triple_from_uv(c.p, c.q);
        sw.below_sqrt = sw.witness.d * sw.witness.d < sw.witness.N;
        report.witnesses.push_back(std::move(sw));
    }
    return report;
}

}  // namespace kfull

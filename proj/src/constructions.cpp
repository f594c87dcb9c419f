#include "kfull/constructions.hpp"

#include <cmath>

#include "kfull/logmath.hpp"

namespace kfull {

namespace {

using Powers = std::vector<std::pair<mpz_class, unsigned long>>;

TermCertificate certify(const Powers& powers) { return refine_certificate(TermCertificate::from_powers(powers)); }

}  // namespace

bool CubicTriple::satisfies_equation() const { return X * X * X + Y * Y * Y == 162 * Z * Z * Z; }

ProgressionWitness ap3_squarefull(const mpz_class& a, const mpz_class& b) {
    if (gcd(a, b) != 1) throw PreconditionError("ap3_squarefull: gcd(a, b) must be 1");
    if (mpz_odd_p(a.get_mpz_t()) == mpz_odd_p(b.get_mpz_t()))
        throw PreconditionError("ap3_squarefull: a and b must have opposite parity");
    const mpz_class base = a * a - b * b;
    mpz_class X = abs(mpz_class(base + 2 * a * b));
    mpz_class Y = abs(mpz_class(base - 2 * a * b));
    const mpz_class Z = a * a + b * b;
    if (X == 0 || Y == 0 || X == Y) throw PreconditionError("ap3_squarefull: degenerate parameters (|X| = |Y|)");
    if (X > Y) std::swap(X, Y);

    ProgressionWitness w;
    w.k = 2;
    w.m = 3;
    w.N = X * X;
    w.d = Z * Z - w.N;
    w.source = Source::ap3_squarefull;
    w.claims_coprime = true;
    w.terms = {certify({{X, 2}}), certify({{Z, 2}}), certify({{Y, 2}})};
    if (X * X + Y * Y != 2 * Z * Z) throw VerificationError("ap3_squarefull: X^2 + Y^2 != 2 Z^2");
    return w;
}

PellPair pell_pair(unsigned long k) {
    PellPair p;
    for (unsigned long i = 0; i < k; ++i) p = p.next();
    return p;
}

bool check_pelly(unsigned j) {
    const mpz_class modulus = pow_ui(5, j + 1);
    const unsigned long center = 3 * mpz_class(pow_ui(5, j)).get_ui();
    mpz_class x = 1, y = 0;
    mpz_class y_before, y_center, y_after;
    for (unsigned long k = 0; k <= center + 1; ++k) {
        if (k == center - 1) y_before = y;
        if (k == center) y_center = y;
        if (k == center + 1) y_after = y;
        mpz_class nx = (x + 2 * y) % modulus, ny = (x + y) % modulus;
        x = nx;
        y = ny;
    }
    auto divisible = [&](const mpz_class& v) { return mpz_divisible_p(v.get_mpz_t(), modulus.get_mpz_t()) != 0; };
    return divisible(y_center) && divisible(y_before * y_before + 1) && divisible(y_after * y_after + 1);
}

CubicTriple ap3_cubefull_seed() {
    CubicTriple t{37, 17, 7, 0};
    if (!t.satisfies_equation()) throw VerificationError("cubic seed fails X^3 + Y^3 = 2 * 3^4 * Z^3");
    return t;
}

CubicTriple ap3_cubefull_iterate(const CubicTriple& t) {
    const mpz_class X3 = t.X * t.X * t.X, Y3 = t.Y * t.Y * t.Y;
    CubicTriple next;
    next.X = t.X * (X3 + 2 * Y3);
    next.Y = -t.Y * (2 * X3 + Y3);
    next.Z = t.Z * (t.X - t.Y) * (t.X * t.X + t.X * t.Y + t.Y * t.Y);
    next.generation = t.generation + 1;
    if (!next.satisfies_equation()) throw VerificationError("cubic iteration broke X^3 + Y^3 = 2 * 3^4 * Z^3");
    return next;
}

ProgressionWitness ap3_cubefull_witness(const CubicTriple& start, unsigned max_sweeps) {
    if (!start.satisfies_equation() || start.Z == 0) throw PreconditionError("ap3_cubefull_witness: invalid triple");
    if (max_sweeps == 0) {
        double lx = start.X == 0 ? 0.0 : log_big(abs(start.X));
        max_sweeps = 2 + static_cast<unsigned>(std::ceil(lx / std::log(6.0)));
    }
    CubicTriple t = start;
    for (unsigned sweep = 0; sweep <= max_sweeps; ++sweep) {
        if (sgn(t.X) != 0 && sgn(t.X) == sgn(t.Y)) {
            if (t.X < 0) {
                t.X = -t.X;
                t.Y = -t.Y;
                t.Z = -t.Z;
            }
            if (t.Z <= 0) throw VerificationError("positive X, Y with non-positive Z");
            mpz_class lo = t.X, hi = t.Y;
            if (lo > hi) std::swap(lo, hi);
            ProgressionWitness w;
            w.k = 3;
            w.m = 3;
            w.N = lo * lo * lo;
            w.d = 81 * t.Z * t.Z * t.Z - w.N;
            w.source = Source::ap3_cubefull;
            w.claims_coprime = true;
            w.terms = {certify({{lo, 3}}), certify({{3, 4}, {t.Z, 3}}), certify({{hi, 3}})};
            return w;
        }
        t = ap3_cubefull_iterate(t);
    }
    throw VerificationError("ap3_cubefull_witness: sweep budget exhausted");
}

FamilyWitness family_4term(unsigned m, unsigned j) {
    if (m < 4) throw PreconditionError("family_4term: m must be >= 4");
    const unsigned long index = 3 * mpz_class(pow_ui(5, j)).get_ui() - 1;
    const PellPair pell = pell_pair(index);
    FamilyWitness out;
    out.x = pell.y;
    out.pell_companion = pell.x;
    const mpz_class& x = out.x;
    const mpz_class two_x2 = 2 * x * x;
    if (out.pell_companion * out.pell_companion != two_x2 + 1)
        throw VerificationError("family_4term: 2x^2 + 1 is not the Pell companion square");

    const mpz_class five = pow_ui(5, j + 1);
    const mpz_class x2p1 = x * x + 1;
    if (!mpz_divisible_p(x2p1.get_mpz_t(), five.get_mpz_t()))
        throw VerificationError("family_4term: x^2 + 1 not divisible by 5^(j+1)");
    out.q = x2p1 / five;

    mpz_class tprod = 1;
    for (unsigned i = 3; i < m; ++i) {
        mpz_class ti = two_x2 + i;
        if (i % 2 == 0) ti /= 2;
        out.t.push_back(ti);
        tprod *= ti;
    }
    mpz_class d = 4 * tprod * tprod * out.q * out.q;
    mpz_class N = two_x2 * d;

    if (j == 0) {
        const mpz_class third = N + 2 * d;
        throw PreconditionError("family_4term: j must be >= 1 (at j = 0, nu_5(N + 2d) = " +
                                std::to_string(nu(5, third)) + ")");
    }

    auto with_ts = [&](Powers p, int skip, unsigned long exp_skip) {
        for (unsigned i = 3; i < m; ++i) {
            p.emplace_back(out.t[i - 3], static_cast<int>(i) == skip ? exp_skip : 2);
        }
        return p;
    };

    ProgressionWitness& w = out.witness;
    w.k = 2;
    w.m = m;
    w.N = N;
    w.d = d;
    w.source = Source::family_4term;
    w.terms.push_back(certify(with_ts({{2, 3}, {x, 2}, {out.q, 2}}, -1, 2)));
    w.terms.push_back(certify(with_ts({{2, 2}, {out.q, 2}, {out.pell_companion, 2}}, -1, 2)));
    w.terms.push_back(certify(with_ts({{2, 3}, {5, j + 1}, {out.q, 3}}, -1, 2)));
    for (unsigned i = 3; i < m; ++i) {
        unsigned long two_exp = (i % 2 == 0) ? 3 : 2;
        w.terms.push_back(certify(with_ts({{2, two_exp}, {out.q, 2}}, static_cast<int>(i), 3)));
    }
    for (unsigned i = 0; i < m; ++i)
        if (w.terms[i].value != w.term(i)) throw VerificationError("family_4term: certificate mismatch at term " + std::to_string(i));

    const double exponent = static_cast<double>(2 * m - 4) / (2 * m - 3);
    out.log_ratio_to_bound = log_big(d) - exponent * log_big(N);
    return out;
}

}  // namespace kfull

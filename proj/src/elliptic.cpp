#include "kfull/elliptic.hpp"

#include <fstream>
#include <sstream>

namespace kfull {

namespace {

mpz_class mod_nonneg(const mpz_class& v, const mpz_class& m) {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), v.get_mpz_t(), m.get_mpz_t());
    return r;
}

mpz_class divexact_checked(const mpz_class& v, const mpz_class& by, const char* what) {
    if (!mpz_divisible_p(v.get_mpz_t(), by.get_mpz_t())) throw VerificationError(std::string(what) + ": inexact division");
    mpz_class r;
    mpz_divexact(r.get_mpz_t(), v.get_mpz_t(), by.get_mpz_t());
    return r;
}

// Least period of s[0..n) via the prefix function.
long least_period(const std::vector<unsigned long>& s) {
    const std::size_t n = s.size();
    if (n == 0) return 0;
    std::vector<std::size_t> pi(n, 0);
    for (std::size_t i = 1; i < n; ++i) {
        std::size_t j = pi[i - 1];
        while (j > 0 && s[i] != s[j]) j = pi[j - 1];
        if (s[i] == s[j]) ++j;
        pi[i] = j;
    }
    return static_cast<long>(n - pi[n - 1]);
}

std::string read_digits(const std::filesystem::path& p) {
    std::ifstream in(p);
    if (!in) throw PreconditionError("cannot open fixture " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string out;
    for (char c : ss.str())
        if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
    if (out.empty()) throw PreconditionError("empty fixture " + p.string());
    return out;
}

unsigned long nu2(const mpz_class& v) { return v == 0 ? 0 : mpz_scan1(v.get_mpz_t(), 0); }

}  // namespace

mpz_class Curve::b8() const { return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4; }

mpz_class Curve::discriminant() const {
    const mpz_class B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
    return -B2 * B2 * B8 - 8 * B4 * B4 * B4 - 27 * B6 * B6 + 9 * B2 * B4 * B6;
}

Curve Curve::ap4_curve() { return {-128, -2612, -3360, 149568, 0}; }

CurvePoint base_point() { return CurvePoint::affine(-976, -49344); }
CurvePoint second_point() { return CurvePoint::affine(-408, -30192); }
CurvePoint torsion_point_1() { return CurvePoint::affine(-1176, -73 * 1008); }
CurvePoint torsion_point_2() { return CurvePoint::affine(-300, -73 * 240); }

bool on_curve(const Curve& c, const CurvePoint& P) {
    if (P.infinity) return true;
    const mpq_class &x = P.x, &y = P.y;
    mpq_class lhs = y * y + mpq_class(c.a1) * x * y + mpq_class(c.a3) * y;
    mpq_class rhs = x * x * x + mpq_class(c.a2) * x * x + mpq_class(c.a4) * x + mpq_class(c.a6);
    return lhs == rhs;
}

CurvePoint neg(const Curve& c, const CurvePoint& P) {
    if (P.infinity) return P;
    return CurvePoint::affine(P.x, -P.y - mpq_class(c.a1) * P.x - mpq_class(c.a3));
}

CurvePoint add(const Curve& c, const CurvePoint& P, const CurvePoint& Q) {
    if (P.infinity) return Q;
    if (Q.infinity) return P;
    const mpq_class a1(c.a1), a2(c.a2), a3(c.a3), a4(c.a4);
    mpq_class lambda;
    if (P.x == Q.x) {
        if (P.y + Q.y + a1 * Q.x + a3 == 0) return CurvePoint::at_infinity();
        lambda = (3 * P.x * P.x + 2 * a2 * P.x + a4 - a1 * P.y) / (2 * P.y + a1 * P.x + a3);
    } else {
        lambda = (Q.y - P.y) / (Q.x - P.x);
    }
    const mpq_class nu = P.y - lambda * P.x;
    mpq_class x3 = lambda * lambda + a1 * lambda - a2 - P.x - Q.x;
    mpq_class y3 = -(lambda + a1) * x3 - nu - a3;
    x3.canonicalize();
    y3.canonicalize();
    return CurvePoint::affine(x3, y3);
}

CurvePoint scalar_mul(const Curve& c, long n, const CurvePoint& P) {
    CurvePoint base = n < 0 ? neg(c, P) : P;
    unsigned long e = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
    CurvePoint acc = CurvePoint::at_infinity();
    while (e) {
        if (e & 1) acc = add(c, acc, base);
        base = add(c, base, base);
        e >>= 1;
    }
    return acc;
}

DivisionSequence::DivisionSequence(const Curve& c, const CurvePoint& P, std::optional<mpz_class> modulus)
    : curve_(c), modulus_(std::move(modulus)) {
    if (P.infinity || P.x.get_den() != 1 || P.y.get_den() != 1)
        throw PreconditionError("DivisionSequence: point must be affine with integer coordinates");
    if (!on_curve(c, P)) throw PreconditionError("DivisionSequence: point is not on the curve");
    x0_ = P.x.get_num();
    y0_ = P.y.get_num();
    const mpz_class x = x0_;
    const mpz_class B2 = c.b2(), B4 = c.b4(), B6 = c.b6(), B8 = c.b8();
    const mpz_class psi2 = 2 * y0_ + c.a1 * x + c.a3;
    if (psi2 == 0) throw PreconditionError("DivisionSequence: point is 2-torsion");
    const mpz_class psi3 = 3 * pow_ui(x, 4) + B2 * pow_ui(x, 3) + 3 * B4 * x * x + 3 * B6 * x + B8;
    const mpz_class psi4 = psi2 * (2 * pow_ui(x, 6) + B2 * pow_ui(x, 5) + 5 * B4 * pow_ui(x, 4) +
                                   10 * B6 * pow_ui(x, 3) + 10 * B8 * x * x + (B2 * B8 - B4 * B6) * x +
                                   (B4 * B8 - B6 * B6));
    if (modulus_) {
        if (*modulus_ < 2) throw PreconditionError("modulus must be >= 2");
        const mpz_class two_psi2 = 2 * psi2;
        if (gcd(*modulus_, two_psi2) != 1)
            throw PreconditionError("modulus " + modulus_->get_str() + " is not coprime to 2 psi_2 = " +
                                    two_psi2.get_str());
        mpz_invert(psi2_inverse_.get_mpz_t(), mod_nonneg(psi2, *modulus_).get_mpz_t(), modulus_->get_mpz_t());
        mpz_invert(two_inverse_.get_mpz_t(), mpz_class(2).get_mpz_t(), modulus_->get_mpz_t());
    }
    memo_[0] = 0;
    memo_[1] = reduce(1);
    memo_[2] = reduce(psi2);
    memo_[3] = reduce(psi3);
    memo_[4] = reduce(psi4);
}

mpz_class DivisionSequence::reduce(mpz_class v) const { return modulus_ ? mod_nonneg(v, *modulus_) : v; }

mpz_class DivisionSequence::halve_over_psi2(const mpz_class& v) const {
    if (modulus_) return mod_nonneg(v * psi2_inverse_, *modulus_);
    return divexact_checked(v, 2 * y0_ + curve_.a1 * x0_ + curve_.a3, "division by psi_2");
}

mpz_class DivisionSequence::halve(const mpz_class& v) const {
    if (modulus_) return mod_nonneg(v * two_inverse_, *modulus_);
    return divexact_checked(v, 2, "halving");
}

mpz_class DivisionSequence::psi(long n) {
    if (n < 0) return reduce(-psi(-n));
    if (auto it = memo_.find(n); it != memo_.end()) return it->second;
    const long k = n / 2;
    mpz_class v;
    if (n % 2) {
        // psi_(2k+1) = psi_(k+2) psi_k^3 - psi_(k-1) psi_(k+1)^3
        const mpz_class a = psi(k + 2), b = psi(k), c = psi(k - 1), d = psi(k + 1);
        v = reduce(a * b * b * b - c * d * d * d);
    } else {
        // psi_(2k) = psi_k (psi_(k+2) psi_(k-1)^2 - psi_(k-2) psi_(k+1)^2) / psi_2
        const mpz_class a = psi(k + 2), b = psi(k - 1), c = psi(k - 2), d = psi(k + 1), e = psi(k);
        v = halve_over_psi2(reduce(e * (a * b * b - c * d * d)));
    }
    memo_.emplace(n, v);
    return v;
}

mpz_class DivisionSequence::phi(long n) {
    const mpz_class p = psi(n);
    return reduce(x0_ * p * p - psi(n - 1) * psi(n + 1));
}

mpz_class DivisionSequence::omega(long n) {
    const mpz_class p = psi(n), f = phi(n);
    const mpz_class a = psi(n + 2), b = psi(n - 1), c = psi(n - 2), d = psi(n + 1);
    const mpz_class doubling = halve(halve_over_psi2(reduce(a * b * b - c * d * d)));
    const mpz_class correction = halve(reduce((curve_.a1 * f + curve_.a3 * p * p) * p));
    return reduce(doubling - correction);
}

mpz_class DivisionSequence::omega_doubling(long n) {
    if (modular()) throw PreconditionError("omega_doubling: exact mode only");
    if (n < 1) throw PreconditionError("omega_doubling: n must be >= 1");
    const mpz_class p = psi(n), f = phi(n);
    const mpz_class num = psi(2 * n) - p * p * (curve_.a1 * f + curve_.a3 * p * p);
    return divexact_checked(num, 2 * p, "omega_doubling");
}

CurvePoint DivisionSequence::point(long n) {
    if (modular()) throw PreconditionError("point: exact mode only");
    const mpz_class p = psi(n);
    if (p == 0) return CurvePoint::at_infinity();
    mpq_class x(phi(n), p * p), y(omega(n), p * p * p);
    x.canonicalize();
    y.canonicalize();
    return CurvePoint::affine(x, y);
}

DivisionSequence ap4_sequence(std::optional<mpz_class> modulus) {
    return DivisionSequence(Curve::ap4_curve(), base_point(), std::move(modulus));
}

Nu2Row nu2_psi_closed_form(long n) {
    if (n < 1) throw PreconditionError("nu2_psi_closed_form: n must be >= 1");
    Nu2Row row;
    row.n = n;
    const long r = n % 4;
    if (r == 1) {
        const long k = (n - 1) / 4;
        row.expected = 13 * k * (2 * k + 1);
    } else if (r == 3) {
        const long k = (n + 1) / 4;
        row.expected = 13 * k * (2 * k - 1);
    } else if (r == 2) {
        const long k = (n - 2) / 4;
        row.expected = 26 * k * (k + 1) + 5;
    } else {
        const long k = n / 4;
        if (k % 2) {
            row.expected = 26 * k * k + 4;
        } else if (k % 4 == 2) {
            row.expected = 26 * k * k + 5;
        } else {
            row.expected = 26 * k * k + 6;
            row.lower_bound_only = true;
        }
    }
    return row;
}

Nu2Report nu2_psi_check(long max_n) {
    if (max_n < 1) throw PreconditionError("nu2_psi_check: max_n must be >= 1");
    auto seq = ap4_sequence();
    Nu2Report report;
    for (long n = 1; n <= max_n; ++n) {
        Nu2Row row = nu2_psi_closed_form(n);
        const mpz_class p = seq.psi(n);
        if (p == 0) throw VerificationError("psi_n vanished at n = " + std::to_string(n));
        row.actual = nu2(p);
        row.ok = row.lower_bound_only ? row.actual >= row.expected : row.actual == row.expected;
        report.ok = report.ok && row.ok;
        report.rows.push_back(row);
    }
    return report;
}

PeriodReport scan_periods(const mpz_class& modulus, long length) {
    if (length < 3) throw PreconditionError("scan_periods: length must be >= 3");
    if (!modulus.fits_ulong_p()) throw PreconditionError("scan_periods: modulus too large");
    auto seq = ap4_sequence(modulus);
    PeriodReport report;
    report.modulus = modulus;
    report.length = length;
    std::vector<unsigned long> psi, phi, omega;
    psi.reserve(length);
    phi.reserve(length);
    omega.reserve(length);
    const unsigned long m = modulus.get_ui();
    std::map<long, bool> class_status;
    for (long n = 1; n <= length; ++n) {
        const mpz_class p = seq.psi(n), f = seq.phi(n), w = seq.omega(n);
        psi.push_back(p.get_ui());
        phi.push_back(f.get_ui());
        omega.push_back(w.get_ui());
        const bool holds = mod_nonneg(p * f - 2 * w, modulus) == 0 && w.get_ui() % m != 0;
        const long r = static_cast<long>(n % static_cast<long>(m));
        auto [it, inserted] = class_status.try_emplace(r, holds);
        if (!inserted) it->second = it->second && holds;
        if (holds) report.residues.insert(r);
    }
    for (long r : report.residues)
        if (!class_status[r]) report.residues_uniform = false;
    report.period_psi = least_period(psi);
    report.period_phi = least_period(phi);
    report.period_omega = least_period(omega);
    for (long p : {report.period_psi, report.period_phi, report.period_omega})
        if (3 * p > length) report.exhaustive = false;
    return report;
}

AbPair ab_from_n(long n) {
    if (n < 2) throw PreconditionError("ab_from_n: n must be >= 2");
    auto seq = ap4_sequence();
    const mpz_class p = seq.psi(n), f = seq.phi(n), w = seq.omega(n);
    if (p == 0 || f == 0 || w == 0) throw VerificationError("ab_from_n: vanishing division value");
    AbPair out;
    out.n = n;
    mpz_class num = 146 * p * f - 2 * w, den = w;
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const mpz_class g = gcd(num, den);
    out.a = num / g;
    out.b = den / g;
    out.a_even = mpz_even_p(out.a.get_mpz_t());
    out.b_odd = mpz_odd_p(out.b.get_mpz_t());
    const mpz_class m73sq = 73 * 73;
    mpz_class binv;
    if (mpz_invert(binv.get_mpz_t(), out.b.get_mpz_t(), m73sq.get_mpz_t()))
        out.congruence_holds = mod_nonneg(out.a * binv, m73sq) == 290;
    out.nu2_gap = static_cast<long>(nu2(w)) - static_cast<long>(nu2(p)) - static_cast<long>(nu2(f));
    return out;
}

mpz_class ap4_quartic(const mpz_class& a, const mpz_class& b) {
    const mpz_class a2 = a * a, b2 = b * b;
    return a2 * a2 - 8 * a2 * a * b + 2 * a2 * b2 + 8 * a * b2 * b + b2 * b2;
}

ProgressionWitness ap4_witness_from_ab(const mpz_class& a, const mpz_class& b) {
    if (gcd(a, b) != 1) throw PreconditionError("ap4 witness: gcd(a, b) must be 1");
    if (mpz_odd_p(a.get_mpz_t()) == mpz_odd_p(b.get_mpz_t()))
        throw PreconditionError("ap4 witness: a and b must have opposite parity");
    const mpz_class F = ap4_quartic(a, b);
    const mpz_class c73 = 73 * 73 * 73;
    if (F <= 0 || !mpz_divisible_p(F.get_mpz_t(), c73.get_mpz_t()))
        throw VerificationError("ap4 witness: quartic value is not a positive multiple of 73^3");
    auto w = exact_sqrt(F / c73);
    if (!w) throw VerificationError("ap4 witness: quartic value / 73^3 is not a perfect square");

    const mpz_class x = abs(mpz_class(a * a - b * b + 2 * a * b));
    const mpz_class y = a * a + b * b;
    const mpz_class z = abs(mpz_class(a * a - b * b - 2 * a * b));
    ProgressionWitness out;
    out.k = 2;
    out.m = 4;
    out.N = x * x;
    out.d = 4 * a * b * (b * b - a * a);
    out.source = Source::ap4_elliptic;
    out.claims_coprime = true;
    out.w = *w;
    if (out.N + 3 * out.d != F) throw VerificationError("ap4 witness: N + 3d differs from the quartic value");
    if (out.d == 0) throw PreconditionError("ap4 witness: degenerate progression (d = 0)");
    const std::vector<mpz_class> roots{x, y, z, 73 * *w};
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j)
            if (gcd(roots[i], roots[j]) != 1) throw VerificationError("ap4 witness: terms are not pairwise coprime");
    auto cert = [](std::vector<std::pair<mpz_class, unsigned long>> p) {
        return refine_certificate(TermCertificate::from_powers(std::move(p)), 1u << 12);
    };
    out.terms = {cert({{x, 2}}), cert({{y, 2}}), cert({{z, 2}}), cert({{73, 3}, {*w, 2}})};
    normalize(out);
    return out;
}

Ap4Result proposition_witness(long n) {
    if (n < 0 || n % 1168 != 404) throw PreconditionError("proposition_witness: n must be 404 mod 1168, got " + std::to_string(n));
    Ap4Result out;
    out.ab = ab_from_n(n);
    if (!out.ab.a_even || !out.ab.b_odd) throw VerificationError("proposition_witness: parity of (a, b) fails");
    if (!out.ab.congruence_holds) throw VerificationError("proposition_witness: a / b != 290 mod 73^2");
    const mpz_class& a = out.ab.a;
    const mpz_class& b = out.ab.b;
    out.d_was_negative = 4 * a * b * (b * b - a * a) < 0;
    out.witness = ap4_witness_from_ab(a, b);
    return out;
}

IntroReport verify_intro_example(const std::filesystem::path& dir) {
    const mpz_class a(read_digits(dir / "a.txt")), b(read_digits(dir / "b.txt"));
    const mpz_class N(read_digits(dir / "N.txt")), d(read_digits(dir / "d.txt"));
    IntroReport report;
    const mpz_class x = a * a - b * b + 2 * a * b;
    report.N_matches = x * x == N;
    report.d_matches = 4 * a * b * (b * b - a * a) == d;
    report.d_positive = d > 0;

    const Curve c = Curve::ap4_curve();
    const CurvePoint P = add(c, add(c, scalar_mul(c, 14, base_point()), scalar_mul(c, -8, second_point())),
                             torsion_point_1());
    auto matches = [&](const CurvePoint& Q) {
        return !Q.infinity && Q.y * mpq_class(a + 2 * b) == mpq_class(146 * b) * Q.x;
    };
    if (!on_curve(c, P)) {
        report.failed = "combined point lies on the curve";
    } else if (matches(P)) {
        report.point_sign = 1;
    } else if (matches(neg(c, P))) {
        report.point_sign = -1;
    }

    try {
        report.witness = ap4_witness_from_ab(a, b);
        const auto v = verify_witness(report.witness);
        report.witness_ok = v.ok && report.witness.N == N && report.witness.d == d;
        if (!v.ok) report.failed = v.failed;
    } catch (const std::exception& e) {
        report.failed = e.what();
    }
    if (report.failed.empty()) {
        if (!report.N_matches) report.failed = "N recomputed from a, b";
        else if (!report.d_matches) report.failed = "d recomputed from a, b";
        else if (report.point_sign == 0) report.failed = "y / x = 146b / (a + 2b)";
        else if (!report.witness_ok) report.failed = "witness matches fixture";
    }
    return report;
}

}  // namespace kfull

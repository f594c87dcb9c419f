#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "kfull/witness.hpp"

namespace kfull {

/// Long Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.
struct Curve {
    mpz_class a1, a2, a3, a4, a6;

    mpz_class b2() const { return a1 * a1 + 4 * a2; }
    mpz_class b4() const { return 2 * a4 + a1 * a3; }
    mpz_class b6() const { return a3 * a3 + 4 * a6; }
    mpz_class b8() const;
    mpz_class discriminant() const;

    /// y^2 - 128xy - 3360y = x^3 - 2612x^2 + 149568x.
    static Curve ap4_curve();
};

struct CurvePoint {
    bool infinity = true;
    mpq_class x, y;

    static CurvePoint at_infinity() { return {}; }
    static CurvePoint affine(const mpq_class& x, const mpq_class& y) { return {false, x, y}; }
    bool operator==(const CurvePoint& o) const {
        return infinity == o.infinity && (infinity || (x == o.x && y == o.y));
    }
};

/// Named points on the ap4 curve.
CurvePoint base_point();      // (-976, -49344)
CurvePoint second_point();    // (-408, -30192)
CurvePoint torsion_point_1(); // (-1176, -73 * 1008)
CurvePoint torsion_point_2(); // (-300, -73 * 240)

bool on_curve(const Curve& c, const CurvePoint& P);
CurvePoint neg(const Curve& c, const CurvePoint& P);
CurvePoint add(const Curve& c, const CurvePoint& P, const CurvePoint& Q);
CurvePoint scalar_mul(const Curve& c, long n, const CurvePoint& P);

/// psi_n, phi_n, Omega_n attached to an integral point, so that
/// nP = (phi_n / psi_n^2, Omega_n / psi_n^3). Values are exact, or reduced
/// modulo `modulus` when one is given (it must be coprime to 2 psi_2).
class DivisionSequence {
  public:
    DivisionSequence(const Curve& c, const CurvePoint& P, std::optional<mpz_class> modulus = std::nullopt);

    bool modular() const { return modulus_.has_value(); }
    const Curve& curve() const { return curve_; }

    /// Memoized double-and-add ladder; psi_(-n) = -psi_n.
    mpz_class psi(long n);
    mpz_class phi(long n);
    /// Omega_n from psi_(n-2) .. psi_(n+2); divides only by 2 psi_2.
    mpz_class omega(long n);
    /// Omega_n from psi_(2n) / (2 psi_n). Exact mode only, n >= 1.
    mpz_class omega_doubling(long n);
    /// (phi_n / psi_n^2, Omega_n / psi_n^3); exact mode only.
    CurvePoint point(long n);

    std::size_t memo_size() const { return memo_.size(); }

  private:
    mpz_class reduce(mpz_class v) const;
    mpz_class halve_over_psi2(const mpz_class& v) const;  // v / psi_2
    mpz_class halve(const mpz_class& v) const;            // v / 2

    Curve curve_;
    mpz_class x0_, y0_;
    std::optional<mpz_class> modulus_;
    mpz_class psi2_inverse_, two_inverse_;
    std::map<long, mpz_class> memo_;
};

DivisionSequence ap4_sequence(std::optional<mpz_class> modulus = std::nullopt);

struct Nu2Row {
    long n = 0;
    unsigned long actual = 0;
    unsigned long expected = 0;
    bool lower_bound_only = false;  // 4 | k branch: actual >= expected
    bool ok = false;
};

struct Nu2Report {
    std::vector<Nu2Row> rows;  // n = 1 .. max_n
    bool ok = true;
};

/// Closed-form 2-adic valuation of psi_n on the ap4 curve (lower bound when n = 4k with 4 | k).
Nu2Row nu2_psi_closed_form(long n);
Nu2Report nu2_psi_check(long max_n);

struct PeriodReport {
    mpz_class modulus;
    long length = 0;  // indices scanned: 1 .. length
    long period_psi = 0, period_phi = 0, period_omega = 0;
    /// Residues r mod modulus with psi phi = 2 Omega and modulus not dividing Omega
    /// for some scanned n = r.
    std::set<long> residues;
    /// True when the condition held at every scanned n in each listed class.
    bool residues_uniform = true;
    /// True when every period was seen at least three times within the scan.
    bool exhaustive = true;
};

PeriodReport scan_periods(const mpz_class& modulus = 73, long length = 3 * 2628 + 10);

struct AbPair {
    long n = 0;
    mpz_class a, b;  // b > 0, gcd(a, b) = 1
    bool a_even = false, b_odd = false;
    bool congruence_holds = false;  // a / b = 290 mod 73^2
    long nu2_gap = 0;               // nu2(Omega) - nu2(psi) - nu2(phi)
};

/// a / b = 146 psi_n phi_n / Omega_n - 2 in lowest terms.
AbPair ab_from_n(long n);

/// a^4 - 8a^3 b + 2a^2 b^2 + 8ab^3 + b^4.
mpz_class ap4_quartic(const mpz_class& a, const mpz_class& b);

/// Four-term squarefull progression x^2, y^2, z^2, 73^3 w^2 from coprime a, b
/// of opposite parity with ap4_quartic(a, b) = 73^3 w^2. Direction normalized.
ProgressionWitness ap4_witness_from_ab(const mpz_class& a, const mpz_class& b);

struct Ap4Result {
    AbPair ab;
    ProgressionWitness witness;
    bool d_was_negative = false;
};

/// Requires n = 404 mod 1168.
Ap4Result proposition_witness(long n);

struct IntroReport {
    bool N_matches = false, d_matches = false;
    bool d_positive = false;
    int point_sign = 0;  // +1 if P matches, -1 if -P matches, 0 if neither
    bool witness_ok = false;
    std::string failed;
    ProgressionWitness witness;

    bool ok() const { return N_matches && d_matches && point_sign != 0 && witness_ok; }
};

/// Reads a.txt, b.txt, N.txt, d.txt from `dir` and checks them against the
/// point 14 P1 - 8 P2 + T1.
IntroReport verify_intro_example(const std::filesystem::path& dir);

}  // namespace kfull

#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include <gmpxx.h>

#include "kfull/witness.hpp"

namespace kfull {

/// Integer polynomial, coefficients from the constant term upward.
using IntPoly = std::vector<mpz_class>;

/// 23x^4 + 80x^3 - 276x^2 - 160x + 92, the dehomogenized small-d quartic.
IntPoly small_d_quartic();
/// 23u^4 + 80u^3 v - 276u^2 v^2 - 160uv^3 + 92v^4.
mpz_class small_d_form(const mpz_class& u, const mpz_class& v);

mpz_class poly_eval(const IntPoly& p, const mpz_class& x);
mpz_class quartic_discriminant(const IntPoly& p);

/// One real root, isolated by rational endpoints with a sign change between them.
struct QuarticRoot {
    unsigned index = 0;  // 1-based, roots in increasing order
    mpq_class lo, hi;
};

struct RootIsolation {
    std::array<QuarticRoot, 4> roots;
    mpz_class discriminant;
};

/// Sturm-sequence isolation of the four real roots of the small-d quartic.
RootIsolation isolate_roots();
/// Bisects until hi - lo <= width.
QuarticRoot refine(const QuarticRoot& r, const mpq_class& width);

struct ConvergentRecord {
    std::size_t k = 0;  // 0-based digit index
    mpz_class a;        // partial quotient a_k
    mpz_class p, q;     // convergent p_k / q_k
};

/// First `count` partial quotients and convergents of the root, computed by
/// carrying the tail's defining polynomial through every x -> a + 1/x step.
std::vector<ConvergentRecord> cf_digits(const QuarticRoot& root, std::size_t count);

/// Progression 16N0^2, 2^2 3^3 t^2, 2^3 s^2 with N0 = u^2 - 10uv - 2v^2,
/// s = -5u^2 - 4uv + 10v^2 and d = 4(s^2 - 2N0^2), direction normalized.
ProgressionWitness triple_from_uv(const mpz_class& u, const mpz_class& v);

struct SmallDWitness {
    std::size_t k = 0;        // digits used; the quotient that follows is a_(k+1) counting from a_1
    mpz_class next_quotient;  // the large partial quotient
    mpz_class u, v;           // convergent built from the first k digits
    bool d0_negative = false;
    bool below_sqrt = false;  // d^2 < N, exact
    ProgressionWitness witness;
};

struct SmallDReport {
    unsigned root_index = 3;
    unsigned long min_quotient = 60;
    std::vector<ConvergentRecord> digits;
    /// Values of k with a_(k+1) >= min_quotient, labelling the first digit a_0 or a_1.
    std::vector<std::size_t> zero_based, one_based;
    std::vector<SmallDWitness> witnesses;
};

/// Witnesses for every k <= max_index whose following quotient is >= min_quotient.
SmallDReport find_small_d(std::size_t max_index, unsigned root_index = 3, unsigned long min_quotient = 60);

}  // namespace kfull

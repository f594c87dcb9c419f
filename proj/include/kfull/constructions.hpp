#pragma once

#include <vector>

#include <gmpxx.h>

#include "kfull/witness.hpp"

namespace kfull {

/// x_k + sqrt(2) y_k = (1 + sqrt(2))^k.
struct PellPair {
    unsigned long index = 0;
    mpz_class x = 1;
    mpz_class y = 0;

    PellPair next() const { return {index + 1, x + 2 * y, x + y}; }
};

/// Solution of X^3 + Y^3 = 2 * 3^4 * Z^3.
struct CubicTriple {
    mpz_class X, Y, Z;
    unsigned long generation = 0;

    bool satisfies_equation() const;
};

/// X = a^2 - b^2 + 2ab, Y = a^2 - b^2 - 2ab, Z = a^2 + b^2 give the
/// coprime squarefull progression X^2, Z^2, Y^2 (reordered to increase).
ProgressionWitness ap3_squarefull(const mpz_class& a, const mpz_class& b);

PellPair pell_pair(unsigned long k);

/// y_k for k = 3*5^j +- 1 has y_k^2 + 1 = 0 mod 5^(j+1), and y_(3*5^j) = 0 mod 5^(j+1).
bool check_pelly(unsigned j);

CubicTriple ap3_cubefull_seed();
CubicTriple ap3_cubefull_iterate(const CubicTriple& t);

/// Iterates until a triple (up to sign and swap) is all-positive, then
/// returns N = X^3, N + d = 3^4 Z^3, N + 2d = Y^3 with X < Y.
/// max_sweeps = 0 uses 2 + ceil(log|X| / log 6).
ProgressionWitness ap3_cubefull_witness(const CubicTriple& t, unsigned max_sweeps = 0);

struct FamilyWitness {
    ProgressionWitness witness;
    mpz_class x;              // y_(3*5^j - 1)
    mpz_class pell_companion; // x_(3*5^j - 1), with N + d = d * companion^2
    std::vector<mpz_class> t; // t_3 .. t_(m-1)
    mpz_class q;              // (x^2 + 1) / 5^(j+1)
    double log_ratio_to_bound = 0;  // log(d / N^((2m-4)/(2m-3)))
};

/// m squarefull terms with d close to N^((2m-4)/(2m-3)); needs j >= 1.
FamilyWitness family_4term(unsigned m, unsigned j);

}  // namespace kfull

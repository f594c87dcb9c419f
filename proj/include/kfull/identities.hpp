#pragma once

#include <cstddef>
#include <map>

#include <gmpxx.h>

namespace kfull {

/// Homogeneous polynomial sum_{i+j=degree} c_i d^i X^j in two indeterminates.
/// Only nonzero coefficients are stored, keyed by the exponent i of d.
class BinaryForm {
  public:
    BinaryForm() = default;
    explicit BinaryForm(std::size_t degree) : degree_(degree) {}

    std::size_t degree() const { return degree_; }
    const std::map<std::size_t, mpz_class>& coeffs() const { return coeffs_; }

    /// Coefficient of d^i X^(degree - i).
    mpz_class coeff(std::size_t i) const;
    void set(std::size_t i, const mpz_class& c);

    /// Largest power of X with a nonzero coefficient (the X-degree).
    std::size_t degree_in_x() const;
    /// Smallest power of d with a nonzero coefficient.
    std::size_t min_d_power() const;

    BinaryForm operator*(const BinaryForm& other) const;
    BinaryForm operator-(const BinaryForm& other) const;
    bool operator==(const BinaryForm&) const = default;

    mpz_class evaluate(const mpz_class& X, const mpz_class& d) const;

  private:
    std::size_t degree_ = 0;
    std::map<std::size_t, mpz_class> coeffs_;
};

/// Partitions of n labelled objects into l nonempty blocks.
mpz_class stirling2(unsigned long n, unsigned long l);

/// sum_{j=1}^{l} (-1)^(j-1) C(l, j) j^n.
mpz_class surjection_sum(unsigned long l, unsigned long n);

/// Upper limit on l accepted by build_F (degree 2^(l-1)).
inline constexpr unsigned kMaxEll = 12;

/// prod_{j odd} (X + jd)^C(l,j) - prod_{j even} (X + jd)^C(l,j), expanded.
BinaryForm build_F(unsigned l, unsigned max_ell = kMaxEll);

/// G with F = d^l G. Throws VerificationError if a coefficient of d^i,
/// i < l, is nonzero.
BinaryForm extract_G(const BinaryForm& F, unsigned l);

mpz_class evaluate_form(const BinaryForm& B, const mpz_class& X, const mpz_class& d);

/// The two products evaluated directly, without expansion.
mpz_class F_direct(unsigned l, const mpz_class& X, const mpz_class& d);

}  // namespace kfull

#include "kfull/identities.hpp"

#include <vector>

#include "kfull/nt_core.hpp"

namespace kfull {

namespace {

mpz_class binomial(unsigned long n, unsigned long k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

mpz_class factorial(unsigned long n) {
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

// (X + j d)^e as a binary form of degree e.
BinaryForm linear_power(unsigned long j, unsigned long e) {
    BinaryForm f(e);
    mpz_class jp = 1;
    for (unsigned long i = 0; i <= e; ++i) {
        f.set(i, binomial(e, i) * jp);
        jp *= j;
    }
    return f;
}

}  // namespace

mpz_class BinaryForm::coeff(std::size_t i) const {
    auto it = coeffs_.find(i);
    return it == coeffs_.end() ? mpz_class(0) : it->second;
}

void BinaryForm::set(std::size_t i, const mpz_class& c) {
    if (i > degree_) throw PreconditionError("BinaryForm: exponent exceeds degree");
    if (c == 0) {
        coeffs_.erase(i);
    } else {
        coeffs_[i] = c;
    }
}

std::size_t BinaryForm::degree_in_x() const {
    if (coeffs_.empty()) return 0;
    return degree_ - coeffs_.begin()->first;
}

std::size_t BinaryForm::min_d_power() const { return coeffs_.empty() ? degree_ : coeffs_.begin()->first; }

BinaryForm BinaryForm::operator*(const BinaryForm& other) const {
    std::vector<mpz_class> acc(degree_ + other.degree_ + 1);
    for (const auto& [i, a] : coeffs_)
        for (const auto& [j, b] : other.coeffs_) acc[i + j] += a * b;
    BinaryForm out(degree_ + other.degree_);
    for (std::size_t i = 0; i < acc.size(); ++i) out.set(i, acc[i]);
    return out;
}

BinaryForm BinaryForm::operator-(const BinaryForm& other) const {
    if (degree_ != other.degree_ && !coeffs_.empty() && !other.coeffs_.empty())
        throw PreconditionError("BinaryForm: degree mismatch");
    BinaryForm out(std::max(degree_, other.degree_));
    for (const auto& [i, a] : coeffs_) out.set(i, a);
    for (const auto& [i, b] : other.coeffs_) out.set(i, out.coeff(i) - b);
    return out;
}

mpz_class BinaryForm::evaluate(const mpz_class& X, const mpz_class& d) const {
    // Horner in X; the coefficient of X^(degree - i) is c_i d^i.
    mpz_class acc = 0, dp = 1;
    for (std::size_t i = 0; i <= degree_; ++i) {
        acc = acc * X + coeff(i) * dp;
        dp *= d;
    }
    return acc;
}

mpz_class stirling2(unsigned long n, unsigned long l) {
    // l! S(n, l) = sum_{j=0}^{l} (-1)^(l-j) C(l, j) j^n
    mpz_class sum = 0;
    for (unsigned long j = 0; j <= l; ++j) {
        mpz_class term = binomial(l, j) * pow_ui(j, n);
        if ((l - j) % 2) {
            sum -= term;
        } else {
            sum += term;
        }
    }
    mpz_class f = factorial(l);
    if (sum % f != 0) throw VerificationError("stirling2: inclusion-exclusion sum not divisible by l!");
    return sum / f;
}

mpz_class surjection_sum(unsigned long l, unsigned long n) {
    if (l < 1) throw PreconditionError("surjection_sum: l must be >= 1");
    mpz_class sum = 0;
    for (unsigned long j = 1; j <= l; ++j) {
        mpz_class term = binomial(l, j) * pow_ui(j, n);
        if (j % 2) {
            sum += term;
        } else {
            sum -= term;
        }
    }
    return sum;
}

BinaryForm build_F(unsigned l, unsigned max_ell) {
    if (l < 2) throw PreconditionError("build_F: l must be >= 2");
    if (l > max_ell) throw PreconditionError("build_F: l exceeds ceiling " + std::to_string(max_ell));
    BinaryForm odd(0), even(0);
    odd.set(0, 1);
    even.set(0, 1);
    for (unsigned j = 0; j <= l; ++j) {
        unsigned long e = mpz_class(binomial(l, j)).get_ui();
        if (j % 2) {
            odd = odd * linear_power(j, e);
        } else {
            even = even * linear_power(j, e);
        }
    }
    return odd - even;
}

BinaryForm extract_G(const BinaryForm& F, unsigned l) {
    if (F.degree() < l) throw PreconditionError("extract_G: degree below l");
    for (const auto& [i, c] : F.coeffs())
        if (i < l) throw VerificationError("identity violated: coefficient of d^" + std::to_string(i) + " is nonzero");
    BinaryForm G(F.degree() - l);
    for (const auto& [i, c] : F.coeffs()) G.set(i - l, c);
    return G;
}

mpz_class evaluate_form(const BinaryForm& B, const mpz_class& X, const mpz_class& d) { return B.evaluate(X, d); }

mpz_class F_direct(unsigned l, const mpz_class& X, const mpz_class& d) {
    mpz_class odd = 1, even = 1;
    for (unsigned j = 0; j <= l; ++j) {
        mpz_class factor = pow_ui(X + d * j, mpz_class(binomial(l, j)).get_ui());
        if (j % 2) {
            odd *= factor;
        } else {
            even *= factor;
        }
    }
    return odd - even;
}

}  // namespace kfull

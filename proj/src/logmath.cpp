#include "kfull/logmath.hpp"

#include <cmath>
#include <stdexcept>

#include <mpfr.h>

#include "kfull/nt_core.hpp"

namespace kfull {

namespace {

constexpr mpfr_prec_t kPrec = 256;

class Real {
  public:
    Real() { mpfr_init2(v_, kPrec); }
    explicit Real(const mpz_class& z) : Real() { mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN); }
    Real(const Real&) = delete;
    Real& operator=(const Real&) = delete;
    ~Real() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

  private:
    mpfr_t v_;
};

void log_quotient(Real& out, const mpz_class& a, const mpz_class& b) {
    if (a < 1 || b < 2) throw PreconditionError("log ratio needs a >= 1 and b >= 2");
    Real la(a), lb(b);
    mpfr_log(la.get(), la.get(), MPFR_RNDN);
    mpfr_log(lb.get(), lb.get(), MPFR_RNDN);
    mpfr_div(out.get(), la.get(), lb.get(), MPFR_RNDN);
}

}  // namespace

double log_ratio(const mpz_class& a, const mpz_class& b) {
    Real q;
    log_quotient(q, a, b);
    return mpfr_get_d(q.get(), MPFR_RNDN);
}

std::string log_ratio_truncated(const mpz_class& a, const mpz_class& b, int places) {
    Real q;
    log_quotient(q, a, b);
    mpfr_mul_z(q.get(), q.get(), mpz_class(pow_ui(10, places)).get_mpz_t(), MPFR_RNDN);
    mpz_class scaled;
    mpfr_get_z(scaled.get_mpz_t(), q.get(), MPFR_RNDD);
    mpz_class unit = pow_ui(10, places);
    mpz_class whole = scaled / unit, frac = scaled % unit;
    std::string f = frac.get_str();
    return whole.get_str() + "." + std::string(places - f.size(), '0') + f;
}

std::string log_ratio_digits(const mpz_class& a, const mpz_class& b, int digits) {
    Real q;
    log_quotient(q, a, b);
    std::string fmt = "%." + std::to_string(digits - 1) + "Re";
    char buf[256];
    mpfr_snprintf(buf, sizeof buf, fmt.c_str(), q.get());
    return buf;
}

bool leq_power(const mpz_class& a, const mpz_class& b, unsigned long num, unsigned long den) {
    if (a < 1 || b < 1 || den == 0) throw PreconditionError("leq_power: positive arguments required");
    Real la(a), lb(b);
    mpfr_log(la.get(), la.get(), MPFR_RNDN);
    mpfr_log(lb.get(), lb.get(), MPFR_RNDN);
    mpfr_mul_ui(la.get(), la.get(), den, MPFR_RNDN);
    mpfr_mul_ui(lb.get(), lb.get(), num, MPFR_RNDN);
    Real diff;
    mpfr_sub(diff.get(), lb.get(), la.get(), MPFR_RNDN);
    if (std::fabs(mpfr_get_d(diff.get(), MPFR_RNDN)) > 1e-40) return mpfr_sgn(diff.get()) > 0;
    return pow_ui(a, den) <= pow_ui(b, num);
}

double log_big(const mpz_class& x) {
    if (x <= 0) throw PreconditionError("log_big: x must be positive");
    long exp = 0;
    double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

}  // namespace kfull

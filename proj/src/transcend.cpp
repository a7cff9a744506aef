#include "modone/transcend.hpp"

#include <mpfr.h>

#include <utility>

#include "modone/errors.hpp"
#include "modone/numeric.hpp"

namespace modone {

namespace {

// RAII pair of mpfr values holding a lower and an upper bound.
class MpfrBounds {
public:
    explicit MpfrBounds(unsigned bits) {
        mpfr_init2(lo_, bits);
        mpfr_init2(hi_, bits);
    }
    ~MpfrBounds() {
        mpfr_clear(lo_);
        mpfr_clear(hi_);
    }
    MpfrBounds(const MpfrBounds&) = delete;
    MpfrBounds& operator=(const MpfrBounds&) = delete;

    mpfr_ptr lo() { return lo_; }
    mpfr_ptr hi() { return hi_; }

    CertifiedInterval to_interval() const {
        if (!mpfr_number_p(lo_) || !mpfr_number_p(hi_))
            throw InsufficientPrecisionError("transcendental enclosure overflowed");
        mpq_class qlo, qhi;
        mpfr_get_q(qlo.get_mpq_t(), lo_);
        mpfr_get_q(qhi.get_mpq_t(), hi_);
        return {qlo, qhi};
    }

private:
    mpfr_t lo_, hi_;
};

}  // namespace

CertifiedInterval ln_enclosure(const mpq_class& x, unsigned bits) {
    if (x <= 0) throw InvalidArgumentError("ln requires a positive argument");
    MpfrBounds arg(bits + 8);
    mpfr_set_q(arg.lo(), x.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(arg.hi(), x.get_mpq_t(), MPFR_RNDU);
    MpfrBounds out(bits);
    mpfr_log(out.lo(), arg.lo(), MPFR_RNDD);
    mpfr_log(out.hi(), arg.hi(), MPFR_RNDU);
    return out.to_interval();
}

CertifiedInterval ln_enclosure(const mpz_class& x, unsigned bits) {
    if (x <= 0) throw InvalidArgumentError("ln requires a positive argument");
    MpfrBounds arg(bits + 8);
    mpfr_set_z(arg.lo(), x.get_mpz_t(), MPFR_RNDD);
    mpfr_set_z(arg.hi(), x.get_mpz_t(), MPFR_RNDU);
    MpfrBounds out(bits);
    mpfr_log(out.lo(), arg.lo(), MPFR_RNDD);
    mpfr_log(out.hi(), arg.hi(), MPFR_RNDU);
    return out.to_interval();
}

CertifiedInterval exp_enclosure(const mpq_class& x, unsigned bits) {
    MpfrBounds arg(bits + 8);
    mpfr_set_q(arg.lo(), x.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(arg.hi(), x.get_mpq_t(), MPFR_RNDU);
    MpfrBounds out(bits);
    mpfr_exp(out.lo(), arg.lo(), MPFR_RNDD);
    mpfr_exp(out.hi(), arg.hi(), MPFR_RNDU);
    return out.to_interval();
}

CertifiedInterval pow_enclosure(const CertifiedInterval& base, const mpq_class& exponent,
                                unsigned bits) {
    if (base.lo <= 0)
        throw InvalidArgumentError("pow_enclosure requires a certainly positive base");
    const CertifiedInterval ln_lo = ln_enclosure(base.lo, bits);
    const CertifiedInterval ln_hi = ln_enclosure(base.hi, bits);
    const CertifiedInterval ln_base{ln_lo.lo, ln_hi.hi};
    const CertifiedInterval scaled = ln_base * exponent;
    const CertifiedInterval elo = exp_enclosure(scaled.lo, bits);
    const CertifiedInterval ehi = exp_enclosure(scaled.hi, bits);
    return {elo.lo, ehi.hi};
}

CertifiedInterval lacunary_threshold(const mpz_class& t, const mpq_class& eps, unsigned bits) {
    if (t < 3) throw InvalidArgumentError("lacunary threshold needs t >= 3");
    if (eps <= 0) throw InvalidArgumentError("eps must be positive");
    const CertifiedInterval lnt = ln_enclosure(t, bits);
    const CertifiedInterval powed = pow_enclosure(lnt, mpq_class(3) + eps, bits);
    return {powed.lo / t, powed.hi / t};
}

CertifiedInterval multiplicative_threshold(const mpz_class& n, const mpq_class& eps,
                                           unsigned bits) {
    if (n < 16) throw InvalidArgumentError("multiplicative threshold needs n >= 16");
    if (eps <= 0) throw InvalidArgumentError("eps must be positive");
    const CertifiedInterval lnn = ln_enclosure(n, bits);   // >= ln 16 > 1
    const CertifiedInterval lnlnn{ln_enclosure(lnn.lo, bits).lo, ln_enclosure(lnn.hi, bits).hi};
    const CertifiedInterval powed = pow_enclosure(lnlnn, mpq_class(3) + eps, bits);
    return {powed.lo / lnn.hi, powed.hi / lnn.lo};
}

void isqrt_bounds(const mpz_class& x, mpz_class& root_lo, mpz_class& root_hi) {
    mpz_sqrt(root_lo.get_mpz_t(), x.get_mpz_t());
    root_hi = root_lo * root_lo == x ? root_lo : root_lo + 1;
}

CertifiedInterval sqrt_enclosure(const mpz_class& d, unsigned bits) {
    if (d < 0) throw InvalidArgumentError("sqrt requires a nonnegative argument");
    // isqrt(d * 4^k) / 2^k brackets sqrt(d) to 2^-k.
    mpz_class scaled = d;
    mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), 2 * bits);
    mpz_class rlo, rhi;
    isqrt_bounds(scaled, rlo, rhi);
    mpz_class denom = 1;
    mpz_mul_2exp(denom.get_mpz_t(), denom.get_mpz_t(), bits);
    mpq_class qlo(rlo, denom), qhi(rhi, denom);
    qlo.canonicalize();
    qhi.canonicalize();
    return {std::move(qlo), std::move(qhi)};
}

}  // namespace modone

#include "modone/interval.hpp"

#include <algorithm>

#include "modone/errors.hpp"
#include "modone/numeric.hpp"

namespace modone {

CertifiedInterval::CertifiedInterval(mpq_class lo_, mpq_class hi_)
    : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (lo > hi) throw InvalidArgumentError("interval endpoints out of order");
}

CertifiedInterval CertifiedInterval::operator*(const CertifiedInterval& o) const {
    const mpq_class a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
    return {std::min(std::min(a, b), std::min(c, d)),
            std::max(std::max(a, b), std::max(c, d))};
}

CertifiedInterval CertifiedInterval::operator*(const mpq_class& v) const {
    if (v >= 0) return {lo * v, hi * v};
    return {hi * v, lo * v};
}

CertifiedInterval CertifiedInterval::abs() const {
    if (lo >= 0) return *this;
    if (hi <= 0) return -*this;
    return {mpq_class(0), std::max(mpq_class(-lo), hi)};
}

CertifiedInterval CertifiedInterval::dist_to_nearest_int_image() const {
    if (width() >= 1) return {mpq_class(0), mpq_class(1, 2)};
    const mpq_class dlo = norm_dist_q(lo), dhi = norm_dist_q(hi);
    // ||.|| is piecewise linear with minima 0 at integers and maxima 1/2 at
    // half-integers; between critical points it is monotone, so the image is
    // determined by the endpoint values plus any critical point spanned.
    mpq_class mn = integer_in(lo, hi) ? mpq_class(0) : std::min(dlo, dhi);
    mpq_class mx = half_integer_in(lo, hi) ? mpq_class(1, 2) : std::max(dlo, dhi);
    return {std::move(mn), std::move(mx)};
}

std::string CertifiedInterval::str(unsigned digits) const {
    if (is_point()) return compact_decimal_string(lo, digits);
    return "[" + compact_decimal_string(lo, digits) + ", " +
           compact_decimal_string(hi, digits) + "]";
}

FracImage frac_mod1_image(const CertifiedInterval& x) {
    if (x.width() >= 1)
        throw InsufficientPrecisionError("interval too wide for a fractional part");
    const mpz_class flo = floor_q(x.lo), fhi = floor_q(x.hi);
    if (flo == fhi) {
        return {{x.lo - flo, x.hi - flo}, false};
    }
    // hi's floor is flo + 1: the enclosure touches or spans an integer.
    // Anchor to the lower branch, so hi may reach or slightly exceed 1.
    return {{x.lo - flo, x.hi - flo}, true};
}

}  // namespace modone

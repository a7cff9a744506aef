#pragma once

#include <gmpxx.h>

#include "modone/interval.hpp"

namespace modone {

// Certified enclosures of transcendental quantities, computed with MPFR
// under directed rounding.  Every function returns a rational interval that
// provably contains the exact value; widths shrink as `bits` grows.

CertifiedInterval ln_enclosure(const mpq_class& x, unsigned bits);
CertifiedInterval ln_enclosure(const mpz_class& x, unsigned bits);
CertifiedInterval exp_enclosure(const mpq_class& x, unsigned bits);

// base^e for a positive certified base and rational exponent, via
// exp(e * ln base) with outward rounding at every step.
CertifiedInterval pow_enclosure(const CertifiedInterval& base, const mpq_class& exponent,
                                unsigned bits);

// (ln t)^(3+eps) / t for integer t >= 3.
CertifiedInterval lacunary_threshold(const mpz_class& t, const mpq_class& eps, unsigned bits);

// (ln ln n)^(3+eps) / ln n for integer n >= 16.
CertifiedInterval multiplicative_threshold(const mpz_class& n, const mpq_class& eps,
                                           unsigned bits);

// Exact integer square-root sandwich: returns [s, s+1] with s = isqrt(x),
// collapsing to a point for perfect squares.
void isqrt_bounds(const mpz_class& x, mpz_class& root_lo, mpz_class& root_hi);

// Enclosure of sqrt(d) with width <= 2^-bits, d > 0.
CertifiedInterval sqrt_enclosure(const mpz_class& d, unsigned bits);

}  // namespace modone

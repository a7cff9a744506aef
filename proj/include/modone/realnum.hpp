#pragma once

#include <gmpxx.h>

#include <optional>

#include "modone/interval.hpp"
#include "modone/quadratic.hpp"
#include "modone/real_spec.hpp"

namespace modone {

// Certified scalar operations used across the toolkit.  Each one returns an
// interval guaranteed to contain the exact value, refined until its width is
// at most `tol`; a decimal input whose budget cannot support the tolerance
// raises InsufficientPrecisionError rather than returning a wider answer.

// Distance from x to the nearest integer, in [0, 1/2].
CertifiedInterval dist_to_nearest_int(const RealSpec& x, const mpq_class& tol);

// Fractional part of x.  When the enclosure touches an integer the wrap
// resolves downward (values near 1 reported near 1, never split), so for
// inexact inputs hi may slightly exceed 1; `wrapped` flags that case.
struct FracResult {
    CertifiedInterval value;
    bool wrapped;
};
FracResult frac_mod1(const RealSpec& x, const mpq_class& tol);

// Distance from n*alpha - gamma to the nearest integer.  Internal precision
// scales with log|n| automatically; n of any magnitude is accepted (the
// tested envelope reaches 2^128 and the pipeline exercises far larger n).
CertifiedInterval linear_form_dist(const mpz_class& n, const RealSpec& alpha,
                                   const RealSpec& gamma, const mpq_class& tol);

// Raw enclosure of n*alpha - gamma at a fixed working precision, for callers
// running their own refinement loops.
CertifiedInterval linear_form_enclosure(const mpz_class& n, const RealSpec& alpha,
                                        const RealSpec& gamma, unsigned bits);

// Exact value of n*alpha - gamma when alpha and gamma fit in one quadratic
// field (or are both rational, embedded with b = 0); nullopt otherwise.
std::optional<QuadVal> linear_form_exact(const mpz_class& n, const RealSpec& alpha,
                                         const RealSpec& gamma);

// Embeds x into Q(sqrt(d)) when possible: rationals always, quadratics with
// matching d, and quadratics over d' when d*d' is a perfect square.
std::optional<QuadVal> lift_to_field(const RealSpec& x, const mpz_class& d);

// Working precision for a target tolerance and scale factor n, following the
// policy: tolerance bits plus log2|n| plus a guard margin, doubled on retry.
unsigned working_bits(const mpq_class& tol, const mpz_class& n);

}  // namespace modone

#pragma once

#include <gmpxx.h>

#include <map>
#include <string>
#include <vector>

#include "modone/interval.hpp"
#include "modone/kronecker.hpp"

namespace modone {

// Exhaustive counting oracles for small-coefficient linear forms, together
// with the explicit bounds they are certified against.  Counts are exact
// (full enumeration, never sampling); bounds are certified intervals, and a
// pass means the exact count is at most the bound's lower end.

inline constexpr long kDefaultEnumerationBudget = 1000000000L;

// Integer vectors y in [-Y, Y]^s weighted by nonincreasing positive
// coefficients: how many satisfy |A_1 y_1 + ... + A_s y_s + b| <= A_1?
struct BoxFormInstance {
    std::vector<mpz_class> coefficients;  // A_1 >= A_2 >= ... >= A_s >= 1
    mpz_class shift;                      // b
    long radius = 1;                      // Y >= 1
};

struct CountReport {
    mpz_class count;
    CertifiedInterval bound;
    bool passes = false;  // certified: count <= bound.lo
    mpz_class space;      // tuples enumerated

    std::string to_json() const;
};

// Exact count with bound 8^s Y^(s-1).  Enumeration cost s*(2Y+1)^s must stay
// within `budget` or BudgetExceededError is thrown.
CountReport box_form_count(const BoxFormInstance& inst,
                           long budget = kDefaultEnumerationBudget);

// Explicit bound s! * R^s * max{(Y Z ln Z)^(s/2), Y^(s-1) Z (ln Z)^(s-1)}
// with R = 480 / ln(ratio); natural logs.  Both branches of the max and the
// growth constant are reported alongside the value.
struct FormBoundReport {
    CertifiedInterval value;
    CertifiedInterval sqrt_branch;    // (Y Z ln Z)^(s/2)
    CertifiedInterval linear_branch;  // Y^(s-1) Z (ln Z)^(s-1)
    CertifiedInterval growth_constant;  // R
};

// Requires Z >= Y >= 2, 4s <= Z, and ratio in (1, 2].
FormBoundReport lacunary_form_bound(long s, long Y, long Z, const mpq_class& ratio,
                                    unsigned bits = 128);

// Combinations y_1 a(z_1) + ... + y_s a(z_s) with 0 < |y_j| <= Y and
// Z < z_j <= 2Z: how many land in [-K, K]?
struct LacunaryFormInstance {
    LacunarySequence sequence;  // needs terms up to index 2Z
    long s = 1;
    long Y = 2;
    long Z = 2;
    mpz_class K;  // 0 <= K <= a(Z)/8
};

// Exact count against lacunary_form_bound.  A certified ratio above 2 is
// clamped to 2 for the bound (a sequence growing faster than 2 per step also
// grows faster than any smaller ratio, so the bound stays valid).
CountReport lacunary_form_count(const LacunaryFormInstance& inst,
                                long budget = kDefaultEnumerationBudget);

// Exact count of tuples (l_1..l_2s, t_1..t_2s) with 0 < |l_j| <= L,
// T < t_j <= 2T and sum_{j<=s} l_j n_{t_j} - sum_{j>s} l_j n_{t_j} = k.
mpz_class moment_count(const LacunarySequence& seq, long s, long L, long T,
                       const mpz_class& k, long budget = kDefaultEnumerationBudget);

// Full distribution k -> count over the same tuple space; values sum to
// (2L)^(2s) T^(2s).
std::map<mpz_class, mpz_class> moment_histogram(const LacunarySequence& seq, long s, long L,
                                                long T,
                                                long budget = kDefaultEnumerationBudget);

}  // namespace modone

#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "modone/interval.hpp"
#include "modone/real_spec.hpp"

namespace modone {

// Continued fraction expansion x = a0 + 1/(a1 + 1/(a2 + ...)) together with
// the convergents p_j/q_j (indexing p[0]/q[0] = a0/1).  Every emitted
// quotient is certified: exact inputs by construction, decimals only as far
// as their digit budget proves the quotients.
struct CFExpansion {
    mpz_class a0;
    std::vector<mpz_class> quotients;  // a_1 .. a_k, all >= 1
    std::vector<mpz_class> p;          // p_0 .. p_k
    std::vector<mpz_class> q;          // q_0 .. q_k
    long certified_depth = 0;          // == quotients.size()
    bool terminated = false;           // exact rational fully expanded
    bool budget_truncated = false;     // decimal budget ran out before depth

    std::string to_json() const;
};

// Expands x to at most `depth` partial quotients.
CFExpansion expand(const RealSpec& x, long depth);

// Growth exponent of the continuant sequence: max over 1 <= k <= depth of
// ln(q_k)/k, with the attaining index (the enclosure is a certified bracket
// of the maximum).
struct LevyReport {
    long depth = 0;
    CertifiedInterval lambda;
    long argmax_k = 0;
    mpz_class q_argmax;
};

LevyReport levy_exponent(const CFExpansion& cf, long depth);

// Checks whether all partial quotients a_1..a_depth are <= bound; the
// witness is the first violating index (1-based), 0 if none.
struct BadnessReport {
    bool bounded = false;
    long witness = 0;
};

BadnessReport is_bad_at_depth(const CFExpansion& cf, long depth, const mpz_class& bound);

}  // namespace modone

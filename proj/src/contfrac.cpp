#include "modone/contfrac.hpp"

#include <json.hpp>

#include "modone/errors.hpp"
#include "modone/numeric.hpp"
#include "modone/quadratic.hpp"
#include "modone/transcend.hpp"

namespace modone {

namespace {

constexpr long kMaxDepth = 1000000;

void push_quotient(CFExpansion& cf, const mpz_class& a) {
    cf.quotients.push_back(a);
    const std::size_t j = cf.p.size();
    cf.p.push_back(a * cf.p[j - 1] + (j >= 2 ? cf.p[j - 2] : mpz_class(1)));
    cf.q.push_back(a * cf.q[j - 1] + (j >= 2 ? cf.q[j - 2] : mpz_class(0)));
}

void expand_rational(CFExpansion& cf, mpq_class x, long depth) {
    x -= cf.a0;
    // x in [0, 1): Euclid on the reciprocal, one quotient per step.
    while (cf.certified_depth < depth) {
        if (x == 0) {
            cf.terminated = true;
            return;
        }
        mpq_class inv = mpq_class(1) / x;
        const mpz_class a = floor_q(inv);
        push_quotient(cf, a);
        ++cf.certified_depth;
        x = inv - a;
    }
    cf.terminated = x == 0;
}

void expand_quadratic(CFExpansion& cf, QuadVal x, long depth) {
    QuadVal rem = x - mpq_class(cf.a0);
    while (cf.certified_depth < depth) {
        // rem irrational in (0, 1): the reciprocal stays in the field.
        QuadVal inv = rem.inverse();
        const mpz_class a = inv.floor();
        push_quotient(cf, a);
        ++cf.certified_depth;
        rem = inv - mpq_class(a);
    }
}

void expand_decimal(CFExpansion& cf, const CertifiedInterval& enc, long depth) {
    mpq_class lo = enc.lo, hi = enc.hi;
    if (floor_q(lo) != floor_q(hi)) {
        // Not even the integer part is certified.
        cf.budget_truncated = true;
        return;
    }
    lo -= cf.a0;
    hi -= cf.a0;
    // Interval Euclid: a quotient is certified only when the whole enclosure
    // agrees on it.  Reciprocals swap the endpoints.
    while (cf.certified_depth < depth) {
        if (lo <= 0) {
            // The value may be exactly the emitted convergent; the budget
            // cannot distinguish, so stop here.
            cf.budget_truncated = true;
            return;
        }
        mpq_class inv_lo = mpq_class(1) / hi;
        mpq_class inv_hi = mpq_class(1) / lo;
        const mpz_class flo = floor_q(inv_lo), fhi = floor_q(inv_hi);
        if (flo != fhi) {
            cf.budget_truncated = true;
            return;
        }
        push_quotient(cf, flo);
        ++cf.certified_depth;
        lo = inv_lo - flo;
        hi = inv_hi - flo;
    }
}

}  // namespace

CFExpansion expand(const RealSpec& x, long depth) {
    if (depth < 0 || depth > kMaxDepth)
        throw InvalidArgumentError("expansion depth out of range");
    CFExpansion cf;
    cf.p.reserve(static_cast<std::size_t>(depth) + 1);
    cf.q.reserve(static_cast<std::size_t>(depth) + 1);
    // Each branch sets a0, then the caller seeds p_0/q_0 = a0/1 before the
    // quotient loop runs.
    if (x.is_rational()) {
        mpq_class v = x.rational_value();
        cf.a0 = floor_q(v);
        cf.p.push_back(cf.a0);
        cf.q.push_back(1);
        expand_rational(cf, v, depth);
    } else if (x.is_quadratic()) {
        QuadVal v = x.quad_value();
        cf.a0 = v.floor();
        cf.p.push_back(cf.a0);
        cf.q.push_back(1);
        expand_quadratic(cf, v, depth);
    } else {
        const CertifiedInterval enc = x.enclose(0);
        cf.a0 = floor_q(enc.lo);
        cf.p.push_back(cf.a0);
        cf.q.push_back(1);
        expand_decimal(cf, enc, depth);
    }
    return cf;
}

LevyReport levy_exponent(const CFExpansion& cf, long depth) {
    if (depth < 1 || depth > cf.certified_depth)
        throw InvalidArgumentError("growth exponent depth exceeds certified expansion");
    LevyReport report;
    report.depth = depth;
    mpq_class best_lo(-1), best_hi(-1);
    for (long k = 1; k <= depth; ++k) {
        const CertifiedInterval lnq = ln_enclosure(cf.q[k], 96);
        const mpq_class lo = lnq.lo / k, hi = lnq.hi / k;
        if (lo > best_lo) best_lo = lo;
        if (hi > best_hi) {
            best_hi = hi;
            report.argmax_k = k;
            report.q_argmax = cf.q[k];
        }
    }
    report.lambda = CertifiedInterval{best_lo, best_hi};
    return report;
}

BadnessReport is_bad_at_depth(const CFExpansion& cf, long depth, const mpz_class& bound) {
    if (depth < 1 || depth > cf.certified_depth)
        throw InvalidArgumentError("badness depth exceeds certified expansion");
    if (bound < 1) throw InvalidArgumentError("partial quotient bound must be >= 1");
    for (long k = 1; k <= depth; ++k) {
        if (cf.quotients[k - 1] > bound) return {false, k};
    }
    return {true, 0};
}

std::string CFExpansion::to_json() const {
    nlohmann::ordered_json j;
    j["quotients"] = nlohmann::ordered_json::array();
    for (const auto& a : quotients) j["quotients"].push_back(a.get_str());
    j["p"] = nlohmann::ordered_json::array();
    for (const auto& v : p) j["p"].push_back(v.get_str());
    j["q"] = nlohmann::ordered_json::array();
    for (const auto& v : q) j["q"].push_back(v.get_str());
    j["certified_depth"] = certified_depth;
    return j.dump();
}

}  // namespace modone

#include "modone/kronecker.hpp"

#include <json.hpp>

#include <algorithm>
#include <numeric>
#include <sstream>
#include <utility>

#include "modone/errors.hpp"
#include "modone/numeric.hpp"
#include "modone/realnum.hpp"
#include "modone/transcend.hpp"

namespace modone {

namespace {

constexpr unsigned kCompareBitsCap = 1u << 22;
constexpr long kMaxInhomDepth = 1000000;  // matches the expansion depth cap

// Sorts values and origins together by the given exact comparator.
template <typename V, typename Less>
void sort_with_origins(std::vector<V>& values, std::vector<long>& origins, Less less) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (less(values[a], values[b])) return true;
        if (less(values[b], values[a])) return false;
        return origins[a] < origins[b];
    });
    std::vector<V> sorted_values;
    std::vector<long> sorted_origins;
    sorted_values.reserve(values.size());
    sorted_origins.reserve(values.size());
    for (std::size_t idx : order) {
        sorted_values.push_back(std::move(values[idx]));
        sorted_origins.push_back(origins[idx]);
    }
    values = std::move(sorted_values);
    origins = std::move(sorted_origins);
}

// Gap multiset of a sorted cycle, wrap gap last.
std::vector<mpq_class> rational_gaps(const std::vector<mpq_class>& pts) {
    std::vector<mpq_class> gaps;
    gaps.reserve(pts.size());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) gaps.push_back(pts[i + 1] - pts[i]);
    gaps.push_back(pts.front() + 1 - pts.back());
    return gaps;
}

std::vector<QuadVal> quadratic_gaps(const std::vector<QuadVal>& pts) {
    std::vector<QuadVal> gaps;
    gaps.reserve(pts.size());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) gaps.push_back(pts[i + 1] - pts[i]);
    gaps.push_back((pts.front() + mpq_class(1)) - pts.back());
    return gaps;
}

unsigned bits_for_tolerance(const mpq_class& tol) {
    return working_bits(tol, 1);
}

}  // namespace

const std::vector<mpq_class>* PointBlock::rational_layer() const {
    return std::get_if<std::vector<mpq_class>>(&exact_);
}

const std::vector<QuadVal>* PointBlock::quadratic_layer() const {
    return std::get_if<std::vector<QuadVal>>(&exact_);
}

PointBlock PointBlock::from_rationals(std::vector<mpq_class> values, std::vector<long> origins,
                                      const mpq_class& tolerance) {
    if (values.empty()) throw InvalidArgumentError("point block cannot be empty");
    if (values.size() != origins.size())
        throw InvalidArgumentError("origin tags must match point count");
    if (tolerance <= 0) throw InvalidArgumentError("tolerance must be positive");
    for (const auto& v : values)
        if (v < 0 || v >= 1) throw InvalidArgumentError("block points must lie in [0, 1)");
    sort_with_origins(values, origins, [](const mpq_class& a, const mpq_class& b) { return a < b; });
    PointBlock block;
    block.points_.reserve(values.size());
    for (const auto& v : values) block.points_.push_back(CertifiedInterval::point(v));
    block.exact_ = std::move(values);
    block.origins_ = std::move(origins);
    block.tolerance_ = tolerance;
    return block;
}

PointBlock PointBlock::from_quadratics(std::vector<QuadVal> values, std::vector<long> origins,
                                       const mpq_class& tolerance) {
    if (values.empty()) throw InvalidArgumentError("point block cannot be empty");
    if (values.size() != origins.size())
        throw InvalidArgumentError("origin tags must match point count");
    if (tolerance <= 0) throw InvalidArgumentError("tolerance must be positive");
    for (const auto& v : values)
        if (v.sign() < 0 || (v - mpq_class(1)).sign() >= 0)
            throw InvalidArgumentError("block points must lie in [0, 1)");
    sort_with_origins(values, origins,
                      [](const QuadVal& a, const QuadVal& b) { return a.cmp(b) < 0; });
    PointBlock block;
    const unsigned bits = bits_for_tolerance(tolerance) + 2;
    block.points_.reserve(values.size());
    for (const auto& v : values) block.points_.push_back(v.enclose(bits));
    block.exact_ = std::move(values);
    block.origins_ = std::move(origins);
    block.tolerance_ = tolerance;
    return block;
}

PointBlock PointBlock::from_intervals(std::vector<CertifiedInterval> values,
                                      std::vector<long> origins, const mpq_class& tolerance) {
    if (values.empty()) throw InvalidArgumentError("point block cannot be empty");
    if (values.size() != origins.size())
        throw InvalidArgumentError("origin tags must match point count");
    if (tolerance <= 0) throw InvalidArgumentError("tolerance must be positive");
    for (const auto& v : values) {
        if (v.width() > tolerance)
            throw InsufficientPrecisionError("block point wider than the block tolerance");
    }
    sort_with_origins(values, origins,
                      [](const CertifiedInterval& a, const CertifiedInterval& b) {
                          if (a.lo != b.lo) return a.lo < b.lo;
                          return a.hi < b.hi;
                      });
    // Order is certified only when enclosures are pairwise disjoint or
    // literally identical.
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        const bool disjoint = values[i].hi < values[i + 1].lo;
        const bool identical = values[i] == values[i + 1];
        if (!disjoint && !identical)
            throw InsufficientPrecisionError("block points cannot be ordered at this precision");
    }
    PointBlock block;
    block.points_ = std::move(values);
    block.origins_ = std::move(origins);
    block.tolerance_ = tolerance;
    return block;
}

std::string PointBlock::to_csv() const {
    std::ostringstream out;
    out << "index,point_lo,point_hi\n";
    for (std::size_t i = 0; i < points_.size(); ++i) {
        out << origins_[i] << "," << decimal_string(points_[i].lo, 30) << ","
            << decimal_string(points_[i].hi, 30) << "\n";
    }
    return out.str();
}

PointBlock orbit_block(const RealSpec& alpha, long N, const mpq_class& tolerance) {
    if (N < 1) throw InvalidArgumentError("orbit length must be >= 1");
    std::vector<long> origins(N);
    std::iota(origins.begin(), origins.end(), 1);
    if (alpha.is_rational()) {
        const mpq_class& a = alpha.rational_value();
        std::vector<mpq_class> pts;
        pts.reserve(N);
        mpq_class x = 0;
        for (long n = 1; n <= N; ++n) {
            x = frac_q(x + a);
            pts.push_back(x);
        }
        return PointBlock::from_rationals(std::move(pts), std::move(origins), tolerance);
    }
    if (alpha.is_quadratic()) {
        const QuadVal a = alpha.quad_value();
        std::vector<QuadVal> pts;
        pts.reserve(N);
        QuadVal x = QuadVal::from_rational(mpq_class(0), a.d());
        for (long n = 1; n <= N; ++n) {
            x = (x + a).frac();
            pts.push_back(x);
        }
        return PointBlock::from_quadratics(std::move(pts), std::move(origins), tolerance);
    }
    std::vector<CertifiedInterval> pts;
    pts.reserve(N);
    for (long n = 1; n <= N; ++n) {
        const CertifiedInterval enc = alpha.enclose(0) * mpq_class(n);
        pts.push_back(frac_mod1_image(enc).value);
    }
    return PointBlock::from_intervals(std::move(pts), std::move(origins), tolerance);
}

PointBlock block_from_multiples(const std::vector<mpz_class>& multipliers,
                                const std::vector<long>& origins, const RealSpec& beta,
                                const mpq_class& tolerance) {
    if (multipliers.empty()) throw InvalidArgumentError("no multipliers given");
    if (multipliers.size() != origins.size())
        throw InvalidArgumentError("origin tags must match multiplier count");
    if (beta.is_rational()) {
        // m*beta mod 1 depends only on m mod den, so huge multipliers reduce
        // before any rational arithmetic happens.
        const mpq_class& b = beta.rational_value();
        const mpz_class& den = b.get_den();
        std::vector<mpq_class> pts;
        pts.reserve(multipliers.size());
        for (const auto& m : multipliers) {
            mpz_class r;
            mpz_mod(r.get_mpz_t(), m.get_mpz_t(), den.get_mpz_t());
            mpz_class num = r * b.get_num();
            mpz_mod(num.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
            mpq_class v(num, den);
            v.canonicalize();
            pts.push_back(std::move(v));
        }
        return PointBlock::from_rationals(std::move(pts), origins, tolerance);
    }
    if (beta.is_quadratic()) {
        const QuadVal b = beta.quad_value();
        std::vector<QuadVal> pts;
        pts.reserve(multipliers.size());
        for (const auto& m : multipliers) pts.push_back((b * m).frac());
        return PointBlock::from_quadratics(std::move(pts), origins, tolerance);
    }
    std::vector<CertifiedInterval> pts;
    pts.reserve(multipliers.size());
    for (const auto& m : multipliers) {
        const CertifiedInterval enc = beta.enclose(0) * mpq_class(m);
        pts.push_back(frac_mod1_image(enc).value);
    }
    return PointBlock::from_intervals(std::move(pts), origins, tolerance);
}

namespace {

GapReport report_from_rational(const PointBlock& block) {
    const auto& pts = *block.rational_layer();
    std::vector<mpq_class> gaps = rational_gaps(pts);
    std::sort(gaps.begin(), gaps.end());
    GapReport report;
    report.exact = true;
    for (std::size_t i = 0; i < gaps.size();) {
        std::size_t j = i;
        while (j < gaps.size() && gaps[j] == gaps[i]) ++j;
        report.distinct.push_back({CertifiedInterval::point(gaps[i]),
                                   static_cast<long>(j - i)});
        i = j;
    }
    report.dispersion = CertifiedInterval::point(gaps.back());
    return report;
}

GapReport report_from_quadratic(const PointBlock& block) {
    const auto& pts = *block.quadratic_layer();
    std::vector<QuadVal> gaps = quadratic_gaps(pts);
    std::sort(gaps.begin(), gaps.end(),
              [](const QuadVal& a, const QuadVal& b) { return a.cmp(b) < 0; });
    const unsigned bits = bits_for_tolerance(block.tolerance()) + 2;
    GapReport report;
    report.exact = true;
    for (std::size_t i = 0; i < gaps.size();) {
        std::size_t j = i;
        while (j < gaps.size() && gaps[j].cmp(gaps[i]) == 0) ++j;
        report.distinct.push_back({gaps[i].enclose(bits), static_cast<long>(j - i)});
        i = j;
    }
    report.dispersion = gaps.back().enclose(bits);
    return report;
}

GapReport report_from_intervals(const PointBlock& block) {
    const auto& pts = block.points();
    std::vector<CertifiedInterval> gaps;
    gaps.reserve(pts.size());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        mpq_class lo = pts[i + 1].lo - pts[i].hi;
        if (lo < 0) lo = 0;
        gaps.push_back({std::move(lo), pts[i + 1].hi - pts[i].lo});
    }
    {
        mpq_class lo = pts.front().lo + 1 - pts.back().hi;
        if (lo < 0) lo = 0;
        gaps.push_back({std::move(lo), pts.front().hi + 1 - pts.back().lo});
    }
    std::sort(gaps.begin(), gaps.end(),
              [](const CertifiedInterval& a, const CertifiedInterval& b) {
                  return a.lo + a.hi < b.lo + b.hi;
              });
    // Consecutive overlapping enclosures cannot be told apart; group them
    // and report the hull.  The result is honest but not exact.
    GapReport report;
    report.exact = false;
    mpq_class disp_lo = 0, disp_hi = 0;
    for (const auto& g : gaps) {
        if (g.lo > disp_lo) disp_lo = g.lo;
        if (g.hi > disp_hi) disp_hi = g.hi;
    }
    for (std::size_t i = 0; i < gaps.size();) {
        std::size_t j = i;
        mpq_class hull_lo = gaps[i].lo, hull_hi = gaps[i].hi;
        while (j + 1 < gaps.size() && gaps[j + 1].lo <= hull_hi) {
            ++j;
            if (gaps[j].hi > hull_hi) hull_hi = gaps[j].hi;
            if (gaps[j].lo < hull_lo) hull_lo = gaps[j].lo;
        }
        report.distinct.push_back({CertifiedInterval{hull_lo, hull_hi},
                                   static_cast<long>(j - i + 1)});
        i = j + 1;
    }
    report.dispersion = CertifiedInterval{disp_lo, disp_hi};
    return report;
}

}  // namespace

GapReport gap_report(const PointBlock& block) {
    if (block.rational_layer()) return report_from_rational(block);
    if (block.quadratic_layer()) return report_from_quadratic(block);
    return report_from_intervals(block);
}

CertifiedInterval dispersion(const PointBlock& block) {
    return gap_report(block).dispersion;
}

ThreeDistanceReport three_distance_check(const RealSpec& alpha, long N,
                                         const mpq_class& tolerance) {
    const PointBlock block = orbit_block(alpha, N, tolerance);
    ThreeDistanceReport report;
    report.gaps = gap_report(block);
    report.distinct_count = static_cast<long>(report.gaps.distinct.size());
    report.at_most_three = report.distinct_count <= 3;
    report.exact = report.gaps.exact;
    report.largest_is_sum = true;
    if (report.distinct_count == 3) {
        if (const auto* rat = block.rational_layer()) {
            std::vector<mpq_class> gaps = rational_gaps(*rat);
            std::sort(gaps.begin(), gaps.end());
            std::vector<mpq_class> distinct;
            for (const auto& g : gaps)
                if (distinct.empty() || distinct.back() != g) distinct.push_back(g);
            report.largest_is_sum = distinct[2] == distinct[0] + distinct[1];
        } else if (const auto* quad = block.quadratic_layer()) {
            std::vector<QuadVal> gaps = quadratic_gaps(*quad);
            std::sort(gaps.begin(), gaps.end(),
                      [](const QuadVal& a, const QuadVal& b) { return a.cmp(b) < 0; });
            std::vector<QuadVal> distinct;
            for (const auto& g : gaps)
                if (distinct.empty() || distinct.back().cmp(g) != 0) distinct.push_back(g);
            report.largest_is_sum = (distinct[2] - distinct[0] - distinct[1]).sign() == 0;
        } else {
            // Interval layer: consistency check only.
            const auto& d = report.gaps.distinct;
            const CertifiedInterval sum = d[0].length + d[1].length;
            report.largest_is_sum = !(d[2].length.hi < sum.lo || sum.hi < d[2].length.lo);
        }
    }
    return report;
}

const mpz_class& LacunarySequence::term(long t) const {
    if (t < 1 || t > count()) throw InvalidArgumentError("sequence index out of range");
    return terms[static_cast<std::size_t>(t - 1)];
}

std::string LacunarySequence::to_json() const {
    nlohmann::ordered_json j;
    j["terms"] = nlohmann::ordered_json::array();
    for (const auto& t : terms) j["terms"].push_back(t.get_str());
    j["ratio"] = ratio.get_num().get_str() + "/" + ratio.get_den().get_str();
    j["provenance"] = nlohmann::ordered_json::parse(provenance);
    return j.dump();
}

mpq_class validate_lacunary(const std::vector<mpz_class>& terms) {
    if (terms.size() < 2)
        throw InvalidArgumentError("lacunary validation needs at least two terms");
    if (terms.front() < 1) throw NotLacunaryError("terms must be positive");
    mpq_class min_ratio;
    bool first = true;
    for (std::size_t i = 0; i + 1 < terms.size(); ++i) {
        if (terms[i + 1] <= terms[i])
            throw NotLacunaryError("terms must be strictly increasing");
        mpq_class r(terms[i + 1], terms[i]);
        r.canonicalize();
        if (first || r < min_ratio) {
            min_ratio = r;
            first = false;
        }
    }
    if (min_ratio <= 1) throw NotLacunaryError("minimum successive ratio is <= 1");
    // Strict inequality n_{t+1} > r n_t requires r strictly below the
    // minimum ratio; shave a representable margin.
    mpq_class margin(1048575, 1048576);  // 1 - 2^-20
    mpq_class r = min_ratio * margin;
    if (r <= 1) r = (min_ratio + 1) / 2;
    return r;
}

LacunarySequence sequence_from_terms(std::vector<mpz_class> terms) {
    LacunarySequence seq;
    seq.ratio = validate_lacunary(terms);
    seq.terms = std::move(terms);
    seq.provenance = "{\"kind\":\"user\"}";
    return seq;
}

LacunarySequence geometric_sequence(const mpz_class& base, long count) {
    if (base < 2) throw InvalidArgumentError("geometric base must be >= 2");
    if (count < 1 || count > 16384) throw InvalidArgumentError("geometric length out of range");
    LacunarySequence seq;
    seq.terms.reserve(count);
    mpz_class term = base;
    for (long t = 1; t <= count; ++t) {
        seq.terms.push_back(term);
        term *= base;
    }
    // Exact powers satisfy a strict ratio of 2 only for base >= 3; base 2
    // gets 3/2 (the successive ratio is exactly 2, so 2 itself fails the
    // strict inequality).
    seq.ratio = base >= 3 ? mpq_class(2) : mpq_class(3, 2);
    seq.provenance = std::string("{\"kind\":\"geometric\",\"base\":\"") + base.get_str() + "\"}";
    return seq;
}

namespace {

// Certified check n <= 4 exp(6 lambda t).  lambda comes either from an
// expansion (ln(q)/k, enabling an exact integer fallback) or as an explicit
// rational override.
class WindowTop {
public:
    WindowTop(const LevyReport& levy, const std::optional<mpq_class>& override_value)
        : q_(levy.q_argmax), k_(levy.argmax_k), override_(override_value) {}

    bool admits(const mpz_class& n, long t) const {
        if (n <= 4) return true;
        for (unsigned bits = 96; bits <= 4096; bits *= 2) {
            // sign of ln(n/4) - 6 lambda t, scaled by k for the exact form.
            CertifiedInterval s = override_
                ? ln_enclosure(n, bits) - ln_enclosure(mpz_class(4), bits) -
                      CertifiedInterval::point(mpq_class(6 * t) * (*override_))
                : (ln_enclosure(n, bits) - ln_enclosure(mpz_class(4), bits)) * mpq_class(k_) -
                      ln_enclosure(q_, bits) * mpq_class(6 * t);
            if (s.hi <= 0) return true;
            if (s.lo > 0) return false;
        }
        if (override_)
            throw InsufficientPrecisionError("window comparison did not resolve");
        // Exact integer fallback: n^k <= 4^k q^{6t}.
        const unsigned long uk = static_cast<unsigned long>(k_);
        const mpz_class lhs = pow_z(n, uk);
        const mpz_class rhs = pow_z(mpz_class(4), uk) * pow_z(q_, 6 * static_cast<unsigned long>(t));
        return lhs <= rhs;
    }

private:
    mpz_class q_;
    long k_;
    std::optional<mpq_class> override_;
};

// Decides n ||n alpha - gamma|| <= 8 with certainty; returns the certified
// product enclosure on success, refined toward `tolerance` as far as the
// inputs allow.
std::optional<CertifiedInterval> certify_scaled_dist(const mpz_class& n, const RealSpec& alpha,
                                                     const RealSpec& gamma,
                                                     const mpq_class& tolerance) {
    const mpq_class floor_width =
        (alpha.best_width() * n + gamma.best_width()) * n;  // product-scale budget floor
    unsigned bits = working_bits(tolerance, n);
    std::optional<CertifiedInterval> accepted;
    for (;;) {
        const CertifiedInterval form = linear_form_enclosure(n, alpha, gamma, bits);
        const CertifiedInterval scaled = form.dist_to_nearest_int_image() * mpq_class(n);
        if (scaled.hi <= 8) {
            accepted = scaled;
            if (scaled.width() <= tolerance) return accepted;
        } else if (scaled.lo > 8) {
            return std::nullopt;
        }
        const bool at_budget =
            floor_width > 0 && scaled.width() <= floor_width * mpq_class(33, 32);
        if (at_budget || bits >= kCompareBitsCap) {
            // Cannot refine further: keep an accepted enclosure if any,
            // otherwise give up on this candidate.
            return accepted;
        }
        bits *= 2;
    }
}

mpq_class gamma_midpoint(const RealSpec& gamma) {
    if (gamma.is_rational()) return gamma.rational_value();
    if (gamma.is_quadratic()) return gamma.quad_value().enclose(96).midpoint();
    return gamma.decimal_value();
}

}  // namespace

InhomSequence build_inhom_sequence(const RealSpec& alpha, const RealSpec& gamma, long T,
                                   const std::optional<mpq_class>& lambda_override,
                                   const mpq_class& tolerance) {
    if (T < 1 || T > 4096) throw InvalidArgumentError("window count out of range");
    if (alpha.is_rational())
        throw InvalidArgumentError("inhomogeneous windows need an irrational alpha");
    if (lambda_override && *lambda_override <= 0)
        throw InvalidArgumentError("lambda override must be positive");
    if (tolerance <= 0) throw InvalidArgumentError("tolerance must be positive");

    // Expand deep enough that continuants pass the top of the largest
    // window; the growth exponent can only grow with depth, so re-check
    // after every extension.
    long depth = std::max<long>(32, 2 * T);
    CFExpansion cf;
    LevyReport levy;
    for (;;) {
        cf = expand(alpha, depth);
        if (cf.terminated)
            throw InvalidArgumentError("alpha resolved to a rational; windows undefined");
        if (cf.certified_depth < 1)
            throw InsufficientPrecisionError("expansion produced no certified quotients");
        levy = levy_exponent(cf, cf.certified_depth);
        const mpq_class lambda_hi = lambda_override ? *lambda_override : levy.lambda.hi;
        // Need ln q_depth >= ln 32 + ln 4 + 6 lambda T.
        const CertifiedInterval lhs = ln_enclosure(cf.q[cf.certified_depth], 96);
        const mpq_class rhs = ln_enclosure(mpz_class(128), 96).hi + mpq_class(6 * T) * lambda_hi;
        if (lhs.lo >= rhs) break;
        if (cf.budget_truncated && cf.certified_depth < depth)
            throw InsufficientPrecisionError(
                "decimal budget cannot certify an expansion deep enough for the windows");
        if (depth >= kMaxInhomDepth)
            throw InsufficientPrecisionError("expansion depth cap reached before windows closed");
        depth = std::min(2 * depth, kMaxInhomDepth);
    }

    const WindowTop window(levy, lambda_override);
    const mpq_class gmid = gamma_midpoint(gamma);

    InhomSequence out;
    out.levy = levy;
    out.lambda_override = lambda_override;
    out.witnesses.reserve(T);

    mpz_class prev = 0;
    for (long t = 1; t <= T; ++t) {
        const mpz_class window_lo = pow_z(8, static_cast<unsigned long>(t));
        mpz_class lower = window_lo;
        if (prev > 0) lower = std::max(lower, mpz_class(2 * prev + 1));

        // Candidates n = n0 + j q_k taken level by level; n p_k = m (mod q_k)
        // points n alpha near gamma up to the convergent error.
        std::vector<mpz_class> candidates;
        for (long k = 1; k + 1 <= cf.certified_depth; ++k) {
            const mpz_class& qk = cf.q[k];
            const mpz_class& qk1 = cf.q[k + 1];
            if (qk1 * 32 < lower) continue;   // spacing too fine to matter
            if (!window.admits(qk, t) && qk > lower) break;  // level beyond the window
            mpz_class m = round_q(gmid * qk);
            mpz_mod(m.get_mpz_t(), m.get_mpz_t(), qk.get_mpz_t());
            mpz_class n0;
            if (qk == 1) {
                n0 = 0;
            } else {
                mpz_class pk_mod;
                mpz_mod(pk_mod.get_mpz_t(), cf.p[k].get_mpz_t(), qk.get_mpz_t());
                mpz_class inv;
                if (mpz_invert(inv.get_mpz_t(), pk_mod.get_mpz_t(), qk.get_mpz_t()) == 0)
                    continue;  // cannot happen for convergents; defensive
                n0 = inv * m;
                mpz_mod(n0.get_mpz_t(), n0.get_mpz_t(), qk.get_mpz_t());
            }
            // First candidate at or above the lower bound.
            mpz_class j = (lower - n0 + qk - 1) / qk;
            if (j < 0) j = 0;
            for (int step = 0; step < 96; ++step) {
                mpz_class n = n0 + j * qk;
                if (n >= lower && window.admits(n, t)) candidates.push_back(n);
                else if (n >= lower) break;
                ++j;
            }
            if (candidates.size() > 8192) break;
        }
        std::sort(candidates.begin(), candidates.end());
        candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

        bool found = false;
        for (const auto& n : candidates) {
            const auto scaled = certify_scaled_dist(n, alpha, gamma, tolerance);
            if (!scaled) continue;
            out.witnesses.push_back({t, n, *scaled, window_lo});
            prev = n;
            found = true;
            break;
        }
        if (!found)
            throw ConstructionFailedError(
                t, "no certified witness in window " + std::to_string(t));
    }

    std::vector<mpz_class> terms;
    terms.reserve(out.witnesses.size());
    for (const auto& w : out.witnesses) terms.push_back(w.n);
    // The doubling constraint certifies ratio 2 directly; a single window
    // has no successive pair to validate.
    out.seq.ratio = terms.size() >= 2 ? validate_lacunary(terms) : mpq_class(2);
    out.seq.terms = std::move(terms);
    {
        nlohmann::ordered_json prov;
        prov["kind"] = "inhom";
        prov["alpha"] = alpha.to_string();
        prov["gamma"] = gamma.to_string();
        prov["T"] = T;
        prov["lambda_k"] = levy.argmax_k;
        prov["lambda_q"] = levy.q_argmax.get_str();
        if (lambda_override)
            prov["lambda_override"] = lambda_override->get_num().get_str() + "/" +
                                      lambda_override->get_den().get_str();
        out.seq.provenance = prov.dump();
    }
    return out;
}

bool verify_inhom_certificates(const InhomSequence& seq, const RealSpec& alpha,
                               const RealSpec& gamma, const mpq_class& tolerance,
                               long* failed_t) {
    const WindowTop window(seq.levy, seq.lambda_override);
    mpz_class prev = 0;
    for (const auto& w : seq.witnesses) {
        bool ok = w.n >= w.window_lo && w.window_lo == pow_z(8, static_cast<unsigned long>(w.t));
        ok = ok && (prev == 0 || w.n > 2 * prev);
        ok = ok && window.admits(w.n, w.t);
        if (ok) {
            const auto scaled = certify_scaled_dist(w.n, alpha, gamma, tolerance);
            ok = scaled.has_value() && scaled->hi <= 8;
        }
        if (!ok) {
            if (failed_t) *failed_t = w.t;
            return false;
        }
        prev = w.n;
    }
    return true;
}

std::vector<RealSpec> bundled_quadratics() {
    return {
        RealSpec::quadratic(-1, 1, 2, 1),   // sqrt2 - 1
        RealSpec::quadratic(-1, 1, 5, 2),   // (sqrt5 - 1)/2
        RealSpec::quadratic(-1, 1, 3, 1),   // sqrt3 - 1
        RealSpec::quadratic(-2, 1, 5, 1),   // sqrt5 - 2
        RealSpec::quadratic(-2, 1, 7, 1),   // sqrt7 - 2
        RealSpec::quadratic(-3, 1, 10, 1),  // sqrt10 - 3
        RealSpec::quadratic(-3, 1, 13, 1),  // sqrt13 - 3
        RealSpec::quadratic(1, 1, 2, 4),    // (1 + sqrt2)/4
        RealSpec::quadratic(-1, 1, 2, 2),   // (sqrt2 - 1)/2
        RealSpec::quadratic(1, 1, 5, 8),    // (1 + sqrt5)/8
        RealSpec::quadratic(-1, 2, 3, 4),   // (2 sqrt3 - 1)/4
        RealSpec::quadratic(3, -1, 2, 2),   // (3 - sqrt2)/2
    };
}

}  // namespace modone

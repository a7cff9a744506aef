#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "modone/contfrac.hpp"
#include "modone/interval.hpp"
#include "modone/quadratic.hpp"
#include "modone/real_spec.hpp"

namespace modone {

// A sorted multiset of points in [0, 1) with certified enclosures at a
// common tolerance.  Exact sources keep an exact layer (rational values or
// quadratic field elements) alongside the intervals, which makes gap
// comparisons exact; interval-only blocks certify order only when the
// enclosures are pairwise disjoint.
class PointBlock {
public:
    static PointBlock from_rationals(std::vector<mpq_class> values, std::vector<long> origins,
                                     const mpq_class& tolerance);
    static PointBlock from_quadratics(std::vector<QuadVal> values, std::vector<long> origins,
                                      const mpq_class& tolerance);
    static PointBlock from_intervals(std::vector<CertifiedInterval> values,
                                     std::vector<long> origins, const mpq_class& tolerance);

    const std::vector<CertifiedInterval>& points() const { return points_; }
    const std::vector<long>& origins() const { return origins_; }
    const mpq_class& tolerance() const { return tolerance_; }
    std::size_t size() const { return points_.size(); }
    bool is_exact() const { return !std::holds_alternative<std::monostate>(exact_); }

    const std::vector<mpq_class>* rational_layer() const;
    const std::vector<QuadVal>* quadratic_layer() const;

    std::string to_csv() const;  // columns: index, point_lo, point_hi

private:
    PointBlock() = default;

    std::variant<std::monostate, std::vector<mpq_class>, std::vector<QuadVal>> exact_;
    std::vector<CertifiedInterval> points_;
    std::vector<long> origins_;
    mpq_class tolerance_;
};

// Orbit block {n*alpha mod 1 : 1 <= n <= N} with origin tags n.
PointBlock orbit_block(const RealSpec& alpha, long N, const mpq_class& tolerance);

// Block {m*beta mod 1} for explicit multipliers (sequence windows); origins
// parallel to multipliers.
PointBlock block_from_multiples(const std::vector<mpz_class>& multipliers,
                                const std::vector<long>& origins, const RealSpec& beta,
                                const mpq_class& tolerance);

// Sorted gap-length census of a block, wrap gap included (the gap from the
// last point back around to the first).  Multiplicities sum to the block
// size.  Duplicated points contribute zero-length gaps; a block with fewer
// than two distinct points has dispersion 1 by the wrap convention.
struct GapReport {
    struct Entry {
        CertifiedInterval length;
        long multiplicity;
    };
    std::vector<Entry> distinct;   // ascending by length
    CertifiedInterval dispersion;  // largest gap
    bool exact;                    // grouping certified exactly
};

GapReport gap_report(const PointBlock& block);

// Largest gap of the block; exact blocks yield an enclosure at the block
// tolerance around the exact value.
CertifiedInterval dispersion(const PointBlock& block);

// Gap structure of {n*alpha mod 1 : n <= N}: at most three distinct lengths,
// and with exactly three the largest equals the sum of the other two.
struct ThreeDistanceReport {
    GapReport gaps;
    long distinct_count = 0;
    bool at_most_three = false;
    bool largest_is_sum = false;  // vacuously true unless three distinct
    bool exact = false;
};

ThreeDistanceReport three_distance_check(const RealSpec& alpha, long N,
                                         const mpq_class& tolerance);

// Strictly increasing positive integers with certified geometric growth:
// terms[i+1] > ratio * terms[i] with ratio > 1.
struct LacunarySequence {
    std::vector<mpz_class> terms;
    mpq_class ratio;
    std::string provenance;  // JSON object describing the construction

    const mpz_class& term(long t) const;  // 1-based
    long count() const { return static_cast<long>(terms.size()); }
    std::string to_json() const;
};

// Largest certified ratio for the given terms (min successive ratio shrunk
// by a representable margin, kept > 1); throws NotLacunaryError when the
// minimum ratio is <= 1.
mpq_class validate_lacunary(const std::vector<mpz_class>& terms);

LacunarySequence sequence_from_terms(std::vector<mpz_class> terms);
LacunarySequence geometric_sequence(const mpz_class& base, long count);

// Inhomogeneous witness sequence: for each 1 <= t <= T a certified n_t with
//   8^t <= n_t <= 4 exp(6 lambda t),   n_t ||n_t alpha - gamma|| <= 8,
//   n_{t+1} > 2 n_t,
// taking the smallest certified candidate from a deterministic lattice of
// convergent multiples, so reruns reproduce the same sequence.  The growth
// exponent lambda is ln(q_K)/K from the expansion unless overridden.
struct InhomWitness {
    long t = 0;
    mpz_class n;
    CertifiedInterval scaled_dist;  // n * ||n alpha - gamma||
    mpz_class window_lo;            // 8^t
};

struct InhomSequence {
    LacunarySequence seq;
    std::vector<InhomWitness> witnesses;
    LevyReport levy;                        // lambda actually used
    std::optional<mpq_class> lambda_override;
};

InhomSequence build_inhom_sequence(const RealSpec& alpha, const RealSpec& gamma, long T,
                                   const std::optional<mpq_class>& lambda_override,
                                   const mpq_class& tolerance);

// Re-checks every witness certificate at the given tolerance; returns false
// with `failed_t` set when any leg cannot be re-certified.
bool verify_inhom_certificates(const InhomSequence& seq, const RealSpec& alpha,
                               const RealSpec& gamma, const mpq_class& tolerance,
                               long* failed_t = nullptr);

// Curated quadratic irrationals in (0, 1) for survey-style experiments.
std::vector<RealSpec> bundled_quadratics();

}  // namespace modone

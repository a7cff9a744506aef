#ifndef MODONE_EXPERIMENTS_HPP
#define MODONE_EXPERIMENTS_HPP

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "modone/interval.hpp"
#include "modone/kronecker.hpp"
#include "modone/measures.hpp"
#include "modone/real_spec.hpp"

namespace modone {

// One certified comparison of a decay scan.  is_hit is set only when the
// enclosures prove strict order (lhs.hi < threshold.lo); a comparison the
// precision ladder cannot resolve is recorded as skipped, never guessed.
struct HitRecord {
    mpz_class index;  // n for multiplicative scans, t for sequence scans
    CertifiedInterval lhs;
    CertifiedInterval threshold;
    bool is_hit = false;
    bool skipped = false;
};

// Cumulative hit count at a scan checkpoint, normalized by the growth rate
// the count is expected to track (ln ln N resp. ln T).
struct TrendPoint {
    mpz_class checkpoint;
    long cumulative_hits = 0;
    double normalizer = 0;
    double ratio = 0;
};

struct HitScan {
    std::vector<HitRecord> records;  // one per scanned index, in order
    std::vector<TrendPoint> trend;   // dyadic checkpoints plus the endpoint
    long hit_count = 0;
    long skip_count = 0;
    long scanned = 0;

    std::vector<mpz_class> hit_indices() const;
    std::string hits_csv() const;   // n_or_t,lhs_lo,lhs_hi,threshold,is_hit
    std::string trend_csv() const;  // checkpoint,cumulative_hits,normalizer,ratio
};

// Single certified comparison n*||n*alpha - gamma||*||n*beta - delta|| vs
// (ln ln n)^(3+eps)/ln n at one precision level (distance tolerance 2^-bits,
// threshold working precision `bits`).  A precision failure is reported as a
// skipped record, not an exception.
HitRecord certify_multiplicative_hit(const RealSpec& alpha, const RealSpec& gamma,
                                     const RealSpec& beta, const RealSpec& delta,
                                     const mpz_class& n, const mpq_class& eps, unsigned bits);

// Single certified comparison ||term*beta - delta|| vs (ln t)^(3+eps)/t.
HitRecord certify_lacunary_hit(const mpz_class& term, long t, const RealSpec& beta,
                               const RealSpec& delta, const mpq_class& eps, unsigned bits);

// Scan n = 16..n_max.  Undecided comparisons climb a fixed precision ladder;
// stragglers are recorded as skipped and excluded from both hits and misses,
// and the scan aborts when skips exceed 0.1% of the range.
HitScan multiplicative_hits(const RealSpec& alpha, const RealSpec& gamma, const RealSpec& beta,
                            const RealSpec& delta, long n_max, const mpq_class& eps);

// Same scan restricted to the sequence terms inside [16, n_max].
HitScan multiplicative_hits(const RealSpec& alpha, const RealSpec& gamma, const RealSpec& beta,
                            const RealSpec& delta, long n_max, const mpq_class& eps,
                            const LacunarySequence& within);

// Scan t = 3..t_max over the sequence terms.
HitScan lacunary_hits(const LacunarySequence& seq, const RealSpec& beta, const RealSpec& delta,
                      long t_max, const mpq_class& eps);

// One lacunary hit at index t carried over to the multiplicative rate at
// n = n_t, with the product re-verified from scratch.
struct TranslatedHit {
    long t = 0;
    mpz_class n;
    CertifiedInterval product;           // n*||n*alpha-gamma||*||n*beta-delta||
    CertifiedInterval slack_threshold;   // 8*(ln t)^(3+eps)/t
    CertifiedInterval direct_threshold;  // (ln ln n)^(3+eps)/ln n
    bool chain_certified = false;        // product < slack_threshold
    bool direct_hit = false;             // product < direct_threshold
};

struct PipelineRow {
    long beta_id = 0;
    std::string beta_repr;
    long lacunary_count = 0;
    long translated_count = 0;
    long direct_count = 0;
    long skipped = 0;
    std::vector<TranslatedHit> hits;
};

// End-to-end report: witness construction, per-sample scans, translations.
// The factor 8 carried by every translation is reported explicitly as
// slack_factor instead of being folded into the exponent.
struct PipelineReport {
    std::string alpha_repr, gamma_repr, delta_repr;
    mpq_class epsilon;
    long t_max = 0;
    long samples = 0;
    std::uint64_t seed = 0;
    double slack_factor = 8.0;
    std::string note;  // nonempty when construction aborted early
    InhomSequence construction;
    std::vector<PipelineRow> rows;

    double translated_fraction() const;  // rows with >= 1 certified translation
    std::string to_json() const;
    std::string hits_csv() const;
};

// Builds the witness sequence for (alpha, gamma), samples beta from the
// sampler, scans ||n_t*beta - delta|| against (ln t)^(3+eps)/t, and carries
// each hit to the multiplicative rate at n_t.  A failed witness construction
// returns a partial report with the note set instead of throwing.
PipelineReport pipeline_theorem_cor2(const RealSpec& alpha, const RealSpec& gamma,
                                     const RealSpec& delta, const MeasureModel& sampler,
                                     const mpq_class& eps, long t_max, long sample_count,
                                     std::uint64_t seed);

// Flat, order-stable description of one experiment invocation.  Serializes
// to versioned JSON; replaying a stored config byte-reproduces artifacts.
struct ExperimentConfig {
    std::string kind;
    std::map<std::string, std::string> params;

    std::string to_json() const;
    static ExperimentConfig from_json(const std::string& text);
};

}  // namespace modone

#endif

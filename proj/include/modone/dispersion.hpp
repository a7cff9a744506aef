#ifndef MODONE_DISPERSION_HPP
#define MODONE_DISPERSION_HPP

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "modone/interval.hpp"
#include "modone/kronecker.hpp"
#include "modone/measures.hpp"
#include "modone/real_spec.hpp"

namespace modone {

// The standard smooth bump c0*exp(-1/(1-x^2)) on (-1,1), normalized to unit
// mass.  All derivatives vanish at the endpoints, so plain trapezoid sums
// converge spectrally; c0 and every transform value carry a radius bounding
// truncation plus rounding.
class BumpFunction {
public:
    BumpFunction();

    double normalization() const { return c0_; }
    // Radius for the unit-mass claim: |integral(omega) - 1| <= mass_error().
    double mass_error() const { return mass_err_; }

    double operator()(double x) const;

    // Transform integral(omega(x) e(-xi x) dx) at real frequency xi.  Even
    // symmetry makes it real; im is identically 0.
    FourierCoeff transform(double xi) const;

private:
    double c0_ = 0;
    double mass_err_ = 0;
};

// Shared instance; the bump is immutable after construction.
const BumpFunction& standard_bump();

double bump_eval(double x);
FourierCoeff bump_fourier(double xi);

// Window and harmonic scales D = (ln T)^(3+2e), L = T/(ln T)^(3+e).  Both
// derive from the single epsilon; L may fall below 1 at small T, which
// empties the harmonic sum downstream.
struct SmoothingScales {
    double d_value = 0;
    double l_value = 0;
};
SmoothingScales smoothing_scales(long T, double epsilon);

// Dispersion of the dyadic block {n_t beta mod 1 : T < t <= 2T}.  Exact for
// rational and quadratic beta; decimal beta is certified at `tolerance` or
// rejected.  A block with fewer than two distinct values reports 1.
CertifiedInterval block_dispersion(const LacunarySequence& seq, const RealSpec& beta, long T,
                                   const mpq_class& tolerance);
CertifiedInterval block_dispersion(const LacunarySequence& seq, const RealSpec& beta, long T);

// C_T(beta): block orbit points counted through the bump window of
// half-width D/T around shift c, all integer translates included.
struct SmoothedCount {
    double value = 0;
    long support = 0;               // t with nonzero window contribution
    std::optional<long> witness_t;  // largest contribution when support > 0
};
SmoothedCount smoothed_count(const LacunarySequence& seq, const RealSpec& beta,
                             const mpq_class& shift, long T, double epsilon);

// C_0(beta): the harmonic part of C_T - D truncated to 0 < |l| <= L,
// returned with an envelope bounding everything discarded, so that
// |c0_value + d_value - C_T(beta)| <= envelope on every instance.
struct TruncationReport {
    double c0_value = 0;
    double envelope = 0;
    double d_value = 0;
    double l_value = 0;
    long harmonics = 0;  // positive frequencies kept; 0 when L < 1
};
TruncationReport truncated_count(const LacunarySequence& seq, const RealSpec& beta,
                                 const mpq_class& shift, long T, double epsilon);

// Monte-Carlo estimate of the 2s-th moment of |C_0| under the sampler.
// Deterministic for a fixed seed; the same draws feed every power.
struct MomentReport {
    double mean = 0;
    double std_error = 0;
    long samples = 0;
    long power = 0;  // the s in |C_0|^(2s)
    double d_value = 0;
};
MomentReport moment_estimate(const LacunarySequence& seq, const MeasureModel& sampler, long s,
                             long T, double epsilon, const mpq_class& shift, long sample_count,
                             std::uint64_t seed);

// One surveyed draw: certified block dispersion plus window counts over the
// whole cover.
struct SurveySample {
    long beta_id = 0;
    std::string beta_repr;
    CertifiedInterval block_disp = CertifiedInterval::point(0);
    double min_ct = 0;
    double max_ct = 0;
    bool covered = false;     // every cover point sees mass: min_ct > 0
    bool bc_outlier = false;  // some cover point has |C_T - D| > D/2

    // Deficient = some cover ball is empty.
    bool deficient() const { return !covered; }
};

struct DispersionSurvey {
    long T = 0;
    double epsilon = 0;
    double d_value = 0;
    double l_value = 0;
    long cover_size = 0;
    std::vector<SurveySample> samples;

    double covered_fraction() const;
    double deficiency_fraction() const;
    double outlier_fraction() const;
    std::string to_csv() const;
    std::string to_json() const;
};

// Evaluates C_T over the cover {j/M : j < M}, M = ceil(T/D), for seeded
// draws from the sampler.  Sample i depends only on (seed, i) and rows are
// merged in index order, so output is identical for any worker count.
DispersionSurvey concentration_survey(const LacunarySequence& seq, const MeasureModel& sampler,
                                      long T, double epsilon, long sample_count,
                                      std::uint64_t seed);

}  // namespace modone

#endif

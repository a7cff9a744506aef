#ifndef MODONE_MEASURES_HPP
#define MODONE_MEASURES_HPP

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "modone/real_spec.hpp"

namespace modone {

// A computable probability measure on [0,1]: the uniform measure, a Cantor
// set built from a restricted digit alphabet in base m, or a finite atomic
// combination.  Models are immutable once constructed.
class MeasureModel {
public:
    enum class Kind { Lebesgue, Cantor, Atomic };

    struct Atom {
        mpq_class point;   // in [0,1]
        mpq_class weight;  // nonnegative; weights sum to 1
    };

    static MeasureModel lebesgue();
    static MeasureModel cantor_ifs(long base, std::vector<long> digits);
    static MeasureModel atomic(std::vector<Atom> atoms);

    // Accepts "lebesgue", "cantor:m=3,digits=0;2", "atomic:1/4:1/2,3/4:1/2".
    // Point and weight tokens may be fractions or decimal literals.
    static MeasureModel parse(const std::string& text);

    Kind kind() const { return kind_; }
    bool is_lebesgue() const { return kind_ == Kind::Lebesgue; }
    long base() const;
    const std::vector<long>& digits() const;
    const std::vector<Atom>& atoms() const;

    // Informational decay exponent attached by the caller; never used in
    // computations.
    const std::optional<mpq_class>& claimed_decay() const { return tau_; }
    void set_claimed_decay(const mpq_class& tau) { tau_ = tau; }

    // Round-trips through parse().
    std::string to_string() const;

private:
    explicit MeasureModel(Kind kind) : kind_(kind) {}

    Kind kind_;
    long base_ = 0;
    std::vector<long> digits_;
    std::vector<Atom> atoms_;
    std::optional<mpq_class> tau_;
};

// One Fourier coefficient integral(e(-xi x) dmu(x)) together with a radius
// that bounds the distance to the true value (truncation plus rounding).
struct FourierCoeff {
    double re = 0;
    double im = 0;
    double err = 0;

    double magnitude() const;
};

// Coefficient of the measure at integer frequency xi.  Exact (up to rounding
// slop) for Lebesgue and atomic models; for Cantor models the self-similarity
// product is unrolled `depth` times and the discarded tail contributes at
// most 2*pi*|xi|/base^depth to err.  Phases are reduced mod 1 in exact
// rational arithmetic before any floating-point rounding.
FourierCoeff fourier_coeff(const MeasureModel& m, const mpz_class& xi, long depth = 40);

// `count` deterministic draws.  Draw i depends only on (seed, i), so a prefix
// of a longer run equals the shorter run and parallel callers see the same
// multiset.  Lebesgue draws are uniform rationals with 64 guaranteed decimal
// digits; Cantor draws pick digits to a depth certifying the point to 1e-30;
// atomic draws are categorical.
std::vector<RealSpec> sample(const MeasureModel& m, std::uint64_t seed, long count);

// Magnitude-versus-frequency probe of the decay hypothesis.  tau_hat is the
// least-squares slope of log|coeff| against -log(1+|xi|) over frequencies
// with |xi| >= 2 whose magnitude exceeds 10x its error radius; degenerate
// fits leave tau_hat empty and explain why in `note`.
struct DecayProfile {
    std::vector<mpz_class> frequencies;
    std::vector<FourierCoeff> coefficients;
    std::optional<double> tau_hat;
    double residual = 0;  // rms residual of the fit, 0 when tau_hat is empty
    long usable = 0;      // frequencies admitted to the fit
    std::string note;     // empty when the fit succeeded

    std::string to_csv() const;   // columns xi, mag, err
    std::string to_json() const;  // summary object
};

DecayProfile decay_profile(const MeasureModel& m, const std::vector<mpz_class>& frequencies,
                           long depth = 40);

}  // namespace modone

#endif

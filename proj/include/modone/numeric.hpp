#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace modone {

// Small exact-arithmetic helpers on top of gmpxx.  Everything here is
// deterministic and platform independent.

mpz_class floor_q(const mpq_class& x);
mpz_class ceil_q(const mpq_class& x);

// Nearest integer; exact half rounds up.  The callers only care about the
// distance |x - round_q(x)|, which a tie leaves unchanged.
mpz_class round_q(const mpq_class& x);

// True iff [lo, hi] contains an integer (closed interval, lo <= hi).
bool integer_in(const mpq_class& lo, const mpq_class& hi);

// True iff [lo, hi] contains a half-integer z + 1/2.
bool half_integer_in(const mpq_class& lo, const mpq_class& hi);

mpz_class pow10_z(unsigned long n);
mpz_class pow_z(const mpz_class& base, unsigned long e);

// Distance from x to the nearest integer, exact.
mpq_class norm_dist_q(const mpq_class& x);

// Fractional part in [0, 1), exact.
mpq_class frac_q(const mpq_class& x);

// Parses decimal literals like "-12", "0.7", "3.25e-4" to an exact rational.
// Throws InvalidArgumentError on malformed input.
mpq_class rational_from_decimal(const std::string& text);

// Fixed-point decimal rendering with round-to-nearest (ties away from zero).
// digits is the count after the decimal point.
std::string decimal_string(const mpq_class& x, unsigned digits);

// Decimal rendering that keeps enough digits to distinguish values that
// differ by more than 10^-digits, trimming trailing zeros.
std::string compact_decimal_string(const mpq_class& x, unsigned digits);

// Number of fractional digits in a decimal literal ("0.250" -> 3).
unsigned fractional_digit_count(const std::string& text);

// splitmix64: tiny, seedable, platform independent.  Used for every random
// draw in the toolkit; per-index substreams keep parallel runs deterministic.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Independent stream for element `index` of a seeded experiment.
    static SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
        SplitMix64 mix(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
        mix.next();
        return mix;
    }

    // Uniform integer in [0, bound) by rejection; exact, no float involved.
    mpz_class below(const mpz_class& bound);
};

}  // namespace modone

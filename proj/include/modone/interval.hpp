#pragma once

#include <gmpxx.h>

#include <string>

namespace modone {

// Closed rational interval [lo, hi] guaranteed to contain the exact value it
// stands for.  All operations round outward, so enclosures stay sound under
// composition.  A point interval (lo == hi) represents an exactly known
// rational.
struct CertifiedInterval {
    mpq_class lo;
    mpq_class hi;

    CertifiedInterval() : lo(0), hi(0) {}
    CertifiedInterval(mpq_class lo, mpq_class hi);

    static CertifiedInterval point(const mpq_class& v) { return {v, v}; }

    mpq_class width() const { return hi - lo; }
    mpq_class midpoint() const { return (lo + hi) / 2; }
    bool is_point() const { return lo == hi; }
    bool contains(const mpq_class& v) const { return lo <= v && v <= hi; }
    bool contains(const CertifiedInterval& other) const {
        return lo <= other.lo && other.hi <= hi;
    }

    bool operator==(const CertifiedInterval& o) const { return lo == o.lo && hi == o.hi; }

    // Certified comparisons: true only when the relation holds for every
    // pair of representatives.
    bool certainly_less(const CertifiedInterval& o) const { return hi < o.lo; }
    bool certainly_leq(const CertifiedInterval& o) const { return hi <= o.lo; }
    bool certainly_positive() const { return lo > 0; }

    CertifiedInterval operator-() const { return {-hi, -lo}; }
    CertifiedInterval operator+(const CertifiedInterval& o) const { return {lo + o.lo, hi + o.hi}; }
    CertifiedInterval operator-(const CertifiedInterval& o) const { return {lo - o.hi, hi - o.lo}; }
    CertifiedInterval operator*(const CertifiedInterval& o) const;
    CertifiedInterval operator+(const mpq_class& v) const { return {lo + v, hi + v}; }
    CertifiedInterval operator-(const mpq_class& v) const { return {lo - v, hi - v}; }
    CertifiedInterval operator*(const mpq_class& v) const;

    // Image of |.| over the interval.
    CertifiedInterval abs() const;

    // Exact image of x |-> distance from x to the nearest integer.  Total:
    // an interval spanning an integer maps to a range starting at 0, one
    // spanning a half-integer to a range ending at 1/2.
    CertifiedInterval dist_to_nearest_int_image() const;

    std::string str(unsigned digits = 12) const;
};

// Image of x |-> x - floor(x) when the interval does not span an integer in
// its interior; when it does and the width is small the wrap resolves to the
// branch below the integer (values near 1 reported near 1, never split), so
// hi may slightly exceed 1.  `wrapped` reports that case.
struct FracImage {
    CertifiedInterval value;
    bool wrapped;
};

FracImage frac_mod1_image(const CertifiedInterval& x);

}  // namespace modone

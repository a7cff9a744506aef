#pragma once

#include <gmpxx.h>

#include "modone/interval.hpp"

namespace modone {

// Exact element (a + b*sqrt(d)) / c of a real quadratic field, canonical form
// c > 0 and gcd(a, b, c) = 1.  d is a fixed positive non-square carried by
// the value; binary operations require matching d.  b may be zero, so the
// type also embeds rationals, which keeps orbit arithmetic closed.
class QuadVal {
public:
    QuadVal();  // zero over d = 2
    QuadVal(mpz_class a, mpz_class b, mpz_class d, mpz_class c);
    static QuadVal from_rational(const mpq_class& r, const mpz_class& d);

    const mpz_class& a() const { return a_; }
    const mpz_class& b() const { return b_; }
    const mpz_class& c() const { return c_; }
    const mpz_class& d() const { return d_; }

    bool is_rational() const { return b_ == 0; }
    mpq_class rational_value() const;  // requires is_rational()

    QuadVal operator+(const QuadVal& o) const;
    QuadVal operator-(const QuadVal& o) const;
    QuadVal operator*(const mpz_class& n) const;
    QuadVal operator+(const mpq_class& r) const;
    QuadVal operator-(const mpq_class& r) const;
    QuadVal inverse() const;  // requires nonzero

    // Exact sign via integer arithmetic only.
    int sign() const;
    int cmp(const QuadVal& o) const { return (*this - o).sign(); }
    bool operator<(const QuadVal& o) const { return cmp(o) < 0; }
    bool operator==(const QuadVal& o) const { return cmp(o) == 0; }

    mpz_class floor() const;
    QuadVal frac() const;  // this - floor(), in [0, 1)

    // Distance to the nearest integer as an exact QuadVal (nonnegative).
    QuadVal dist_to_nearest_int() const;

    // Enclosure of width <= 2^-bits.
    CertifiedInterval enclose(unsigned bits) const;

    std::string str() const;

private:
    void normalize();

    mpz_class a_, b_, c_, d_;
};

}  // namespace modone

#include "modone/quadratic.hpp"

#include <utility>

#include "modone/errors.hpp"
#include "modone/numeric.hpp"
#include "modone/transcend.hpp"

namespace modone {

namespace {

void require_same_field(const QuadVal& x, const QuadVal& y) {
    if (x.d() != y.d())
        throw InvalidArgumentError("quadratic values live in different fields");
}

}  // namespace

QuadVal::QuadVal() : a_(0), b_(0), c_(1), d_(2) {}

QuadVal::QuadVal(mpz_class a, mpz_class b, mpz_class d, mpz_class c)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
    if (d_ <= 0) throw InvalidArgumentError("quadratic radicand must be positive");
    if (c_ == 0) throw InvalidArgumentError("quadratic denominator must be nonzero");
    if (mpz_perfect_square_p(d_.get_mpz_t()))
        throw InvalidArgumentError("quadratic radicand must not be a perfect square");
    normalize();
}

QuadVal QuadVal::from_rational(const mpq_class& r, const mpz_class& d) {
    return QuadVal(r.get_num(), 0, d, r.get_den());
}

void QuadVal::normalize() {
    if (c_ < 0) {
        c_ = -c_;
        a_ = -a_;
        b_ = -b_;
    }
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a_.get_mpz_t(), b_.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c_.get_mpz_t());
    if (g > 1) {
        a_ /= g;
        b_ /= g;
        c_ /= g;
    }
}

mpq_class QuadVal::rational_value() const {
    if (!is_rational()) throw InvalidArgumentError("value is irrational");
    mpq_class r(a_, c_);
    r.canonicalize();
    return r;
}

QuadVal QuadVal::operator+(const QuadVal& o) const {
    require_same_field(*this, o);
    return QuadVal(a_ * o.c_ + o.a_ * c_, b_ * o.c_ + o.b_ * c_, d_, c_ * o.c_);
}

QuadVal QuadVal::operator-(const QuadVal& o) const {
    require_same_field(*this, o);
    return QuadVal(a_ * o.c_ - o.a_ * c_, b_ * o.c_ - o.b_ * c_, d_, c_ * o.c_);
}

QuadVal QuadVal::operator*(const mpz_class& n) const {
    return QuadVal(a_ * n, b_ * n, d_, c_);
}

QuadVal QuadVal::operator+(const mpq_class& r) const {
    return QuadVal(a_ * r.get_den() + r.get_num() * c_, b_ * r.get_den(), d_, c_ * r.get_den());
}

QuadVal QuadVal::operator-(const mpq_class& r) const {
    return *this + mpq_class(-r);
}

QuadVal QuadVal::inverse() const {
    // 1/((a + b sqrt d)/c) = c(a - b sqrt d)/(a^2 - b^2 d)
    const mpz_class norm = a_ * a_ - b_ * b_ * d_;
    if (norm == 0 && a_ == 0 && b_ == 0)
        throw InvalidArgumentError("cannot invert zero");
    // norm == 0 with b != 0 would make sqrt(d) rational; excluded by ctor.
    return QuadVal(c_ * a_, -c_ * b_, d_, norm);
}

int QuadVal::sign() const {
    // sign of a + b sqrt(d); c > 0 never flips it.
    const int sa = mpz_sgn(a_.get_mpz_t());
    const int sb = mpz_sgn(b_.get_mpz_t());
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // Opposite signs: compare a^2 against b^2 d; sign follows the larger.
    const mpz_class lhs = a_ * a_, rhs = b_ * b_ * d_;
    const int c = mpz_cmp(lhs.get_mpz_t(), rhs.get_mpz_t());
    if (c == 0) return 0;  // unreachable for non-square d
    return c > 0 ? sa : sb;
}

mpz_class QuadVal::floor() const {
    if (is_rational()) {
        mpz_class r;
        mpz_fdiv_q(r.get_mpz_t(), a_.get_mpz_t(), c_.get_mpz_t());
        return r;
    }
    // floor((a + b sqrt d)/c) with sqrt(d) in [s/2^k, (s+1)/2^k]; widen k
    // until the bracket pins a single integer.  Terminates: the value is
    // irrational, hence never equal to an integer.
    for (unsigned bits = 32;; bits *= 2) {
        const CertifiedInterval s = sqrt_enclosure(d_, bits);
        const CertifiedInterval scaled = (b_ > 0)
            ? CertifiedInterval{s.lo * b_, s.hi * b_}
            : CertifiedInterval{s.hi * b_, s.lo * b_};
        mpq_class lo = (mpq_class(a_) + scaled.lo) / c_;
        mpq_class hi = (mpq_class(a_) + scaled.hi) / c_;
        const mpz_class flo = floor_q(lo), fhi = floor_q(hi);
        if (flo == fhi) return flo;
    }
}

QuadVal QuadVal::frac() const {
    return *this - mpq_class(floor());
}

QuadVal QuadVal::dist_to_nearest_int() const {
    const QuadVal f = frac();  // in [0, 1)
    const QuadVal complement = (f * mpz_class(-1)) + mpq_class(1);
    const QuadVal& nearer = f.cmp(complement) <= 0 ? f : complement;
    return nearer;
}

CertifiedInterval QuadVal::enclose(unsigned bits) const {
    if (is_rational()) return CertifiedInterval::point(rational_value());
    // Request extra sqrt precision to absorb the multiplication by b/c.
    const unsigned extra = static_cast<unsigned>(mpz_sizeinbase(b_.get_mpz_t(), 2)) + 4;
    const CertifiedInterval s = sqrt_enclosure(d_, bits + extra);
    const CertifiedInterval scaled = (b_ > 0)
        ? CertifiedInterval{s.lo * b_, s.hi * b_}
        : CertifiedInterval{s.hi * b_, s.lo * b_};
    return {(a_ + scaled.lo) / c_, (a_ + scaled.hi) / c_};
}

std::string QuadVal::str() const {
    return "(" + a_.get_str() + " + " + b_.get_str() + "*sqrt(" + d_.get_str() + "))/" +
           c_.get_str();
}

}  // namespace modone

#include <doctest.h>
#include <gmpxx.h>

#include <cmath>

#include "modone/errors.hpp"
#include "modone/numeric.hpp"
#include "modone/realnum.hpp"
#include "modone/real_spec.hpp"
#include "modone/transcend.hpp"

using namespace modone;

namespace {

mpq_class Q(long num, long den) {
    mpq_class q(num, den);
    q.canonicalize();
    return q;
}

mpq_class tol10(unsigned digits) {
    mpq_class t(1, pow10_z(digits));
    return t;
}

// Independent distance-to-nearest-integer: reduce mod 1 with mpz_fdiv_r and
// compare the two candidate distances.
mpq_class oracle_norm(const mpq_class& x) {
    mpz_class rem;
    mpz_fdiv_r(rem.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    mpq_class f(rem, x.get_den());
    f.canonicalize();
    return std::min(f, mpq_class(1 - f));
}

// sqrt(2) bracketed by scaled integer square roots: digit-level oracle that
// shares no code with QuadVal::enclose.
void oracle_sqrt2(unsigned digits, mpq_class& lo, mpq_class& hi) {
    const mpz_class scale = pow10_z(digits);
    mpz_class s;
    mpz_class target = 2 * scale * scale;
    mpz_sqrt(s.get_mpz_t(), target.get_mpz_t());
    lo = mpq_class(s) / scale;
    hi = mpq_class(s + 1) / scale;
}

}  // namespace

TEST_CASE("distance to nearest integer on rationals is exact") {
    CHECK(dist_to_nearest_int(RealSpec::rational(Q(1, 2)), tol10(6)) ==
          CertifiedInterval::point(Q(1, 2)));
    CHECK(dist_to_nearest_int(RealSpec::rational(Q(9, 4)), tol10(6)) ==
          CertifiedInterval::point(Q(1, 4)));
    CHECK(dist_to_nearest_int(RealSpec::rational(Q(-7, 3)), tol10(6)) ==
          CertifiedInterval::point(Q(1, 3)));
    CHECK(dist_to_nearest_int(RealSpec::rational(mpq_class(4)), tol10(6)) ==
          CertifiedInterval::point(mpq_class(0)));
}

TEST_CASE("fractional part on rationals is exact and wraps negatives up") {
    CHECK(frac_mod1(RealSpec::rational(Q(7, 4)), tol10(6)).value ==
          CertifiedInterval::point(Q(3, 4)));
    CHECK(frac_mod1(RealSpec::rational(Q(-1, 3)), tol10(6)).value ==
          CertifiedInterval::point(Q(2, 3)));
    CHECK(frac_mod1(RealSpec::rational(mpq_class(5)), tol10(6)).value ==
          CertifiedInterval::point(mpq_class(0)));
}

TEST_CASE("rational linear form kills exactly") {
    const auto out = linear_form_dist(3, RealSpec::rational(Q(1, 3)),
                                      RealSpec::rational(0), tol10(30));
    CHECK(out.is_point());
    CHECK(out.lo == 0);
}

TEST_CASE("sqrt2 distance matches an independent digit oracle at 1e-20") {
    const RealSpec sqrt2 = RealSpec::quadratic(0, 1, 2, 1);
    const auto out = dist_to_nearest_int(sqrt2, tol10(20));
    CHECK(out.width() <= tol10(20));

    mpq_class lo, hi;
    oracle_sqrt2(25, lo, hi);
    // ||sqrt 2|| = sqrt2 - 1; both enclosures must intersect and agree.
    CHECK(out.hi >= lo - 1);
    CHECK(out.lo <= hi - 1);
    const double mid = out.midpoint().get_d();
    CHECK(std::abs(mid - (std::sqrt(2.0) - 1.0)) < 1e-12);
}

TEST_CASE("large-scale fractional part stays certified") {
    // x = 10^6 * (sqrt 2 - 1); the integer part is six digits wide, so the
    // working precision has to scale with it.
    const RealSpec x = RealSpec::quadratic(-1000000, 1000000, 2, 1);
    const auto out = frac_mod1(x, tol10(20));
    CHECK_FALSE(out.wrapped);
    CHECK(out.value.width() <= tol10(20));

    mpq_class lo, hi;
    oracle_sqrt2(30, lo, hi);
    const mpq_class vlo = lo * 1000000 - 1000000, vhi = hi * 1000000 - 1000000;
    const mpz_class fl = floor_q(vlo);
    REQUIRE(fl == floor_q(vhi));
    CHECK(out.value.hi >= vlo - fl);
    CHECK(out.value.lo <= vhi - fl);
}

TEST_CASE("convergent denominators of sqrt2 - 1 give small distances") {
    // q_{k+1} = 2 q_k + q_{k-1} (Pell numbers); q_k * ||q_k alpha|| < 1.
    const RealSpec alpha = RealSpec::quadratic(-1, 1, 2, 1);
    mpz_class q_prev = 1, q = 2;
    for (int k = 1; k <= 20; ++k) {
        const auto d = linear_form_dist(q, alpha, RealSpec::rational(0), tol10(40));
        CHECK(d.hi * q < 1);
        const mpz_class q_next = 2 * q + q_prev;
        q_prev = q;
        q = q_next;
    }
}

TEST_CASE("distances agree with the reduction oracle on random rationals") {
    SplitMix64 rng(20240817);
    for (int i = 0; i < 1000; ++i) {
        const mpz_class den = rng.below(1000000) + 1;
        const mpz_class num = rng.below(2000000) - 1000000;
        mpq_class x(num, den);
        x.canonicalize();
        const auto out = dist_to_nearest_int(RealSpec::rational(x), tol10(9));
        REQUIRE(out.is_point());
        CHECK(out.lo == oracle_norm(x));

        // Symmetry and shift invariance.
        const auto neg = dist_to_nearest_int(RealSpec::rational(mpq_class(-x)), tol10(9));
        CHECK(neg.lo == out.lo);
        const mpz_class shift = rng.below(2001) - 1000;
        const auto shifted =
            dist_to_nearest_int(RealSpec::rational(x + mpq_class(shift)), tol10(9));
        CHECK(shifted.lo == out.lo);
    }
}

TEST_CASE("refinement is monotone for a quadratic irrational") {
    const RealSpec x = RealSpec::quadratic(-1, 1, 3, 1);
    const auto wide = dist_to_nearest_int(x, tol10(5));
    const auto mid = dist_to_nearest_int(x, tol10(10));
    const auto tight = dist_to_nearest_int(x, tol10(20));
    CHECK(wide.contains(mid.midpoint()));
    CHECK(mid.contains(tight.midpoint()));
    CHECK(tight.width() <= tol10(20));
    CHECK(wide.width() <= tol10(5));
}

TEST_CASE("random 64-bit multipliers stay certified at 1e-30") {
    const RealSpec alpha = RealSpec::quadratic(-1, 1, 2, 1);
    SplitMix64 rng(7);
    mpz_class cap;
    mpz_ui_pow_ui(cap.get_mpz_t(), 2, 64);
    for (int i = 0; i < 20; ++i) {
        const mpz_class n = rng.below(cap) + 1;
        const auto out = linear_form_dist(n, alpha, RealSpec::rational(0), tol10(30));
        CHECK(out.width() <= tol10(30));
        CHECK(out.lo >= 0);
        CHECK(out.hi <= Q(1, 2));
    }
}

TEST_CASE("same-field quadratic forms cancel exactly") {
    // 2*(sqrt2) - (1 + 2 sqrt2) = -1: an exact integer distance of zero.
    const RealSpec alpha = RealSpec::quadratic(0, 1, 2, 1);
    const RealSpec gamma = RealSpec::quadratic(1, 2, 2, 1);
    const auto out = linear_form_dist(2, alpha, gamma, tol10(30));
    CHECK(out.is_point());
    CHECK(out.lo == 0);
}

TEST_CASE("commensurable radicands reduce to one field") {
    // sqrt8 = 2 sqrt2, so sqrt2 - sqrt8 = -sqrt2 and the distance is sqrt2 - 1.
    const RealSpec alpha = RealSpec::quadratic(0, 1, 2, 1);
    const RealSpec gamma = RealSpec::quadratic(0, 1, 8, 1);
    const auto out = linear_form_dist(1, alpha, gamma, tol10(25));
    CHECK(out.width() <= tol10(25));
    const double mid = out.midpoint().get_d();
    CHECK(std::abs(mid - (std::sqrt(2.0) - 1.0)) < 1e-12);
}

TEST_CASE("incommensurable radicands fall back to interval refinement") {
    const RealSpec alpha = RealSpec::quadratic(0, 1, 2, 1);
    const RealSpec gamma = RealSpec::quadratic(0, 1, 3, 1);
    const auto out = linear_form_dist(1, alpha, gamma, tol10(25));
    CHECK(out.width() <= tol10(25));
    const double mid = out.midpoint().get_d();
    CHECK(std::abs(mid - std::abs(std::sqrt(2.0) - std::sqrt(3.0))) < 1e-12);
}

TEST_CASE("decimal budgets certify what they can and refuse what they cannot") {
    const RealSpec gamma = RealSpec::parse("0.7@3");
    // Form width is about 2e-3; a coarse tolerance passes.
    const auto ok = linear_form_dist(1, RealSpec::rational(Q(1, 3)), gamma, Q(1, 100));
    CHECK(ok.width() <= Q(1, 100));
    CHECK_THROWS_AS(
        linear_form_dist(1000000, RealSpec::rational(Q(1, 3)), gamma, tol10(9)),
        InsufficientPrecisionError);
}

TEST_CASE("decimal straddling an integer resolves the wrap downward") {
    const RealSpec x = RealSpec::parse("1.0000@4");
    const auto out = frac_mod1(x, Q(1, 1000));
    CHECK(out.wrapped);
    CHECK(out.value.lo == Q(9999, 10000));
    CHECK(out.value.hi == Q(10001, 10000));
    CHECK_THROWS_AS(frac_mod1(x, tol10(5)), InsufficientPrecisionError);
}

TEST_CASE("spec strings round-trip bit-exactly") {
    for (const char* text : {"2/3", "-7/10", "quad:-1,1,5,2", "quad:0,1,2,1", "0.7@20",
                             "0.61803398874989@14", "5/1"}) {
        const RealSpec s = RealSpec::parse(text);
        CHECK(RealSpec::parse(s.to_string()).to_string() == s.to_string());
    }
    CHECK(RealSpec::parse("4/6").to_string() == "2/3");
    CHECK(RealSpec::parse("0.25").to_string() == "0.25@2");
    CHECK(RealSpec::parse("42").to_string() == "42/1");
}

TEST_CASE("malformed specs are rejected") {
    CHECK_THROWS_AS(RealSpec::parse("quad:1,0,2,1"), InvalidArgumentError);
    CHECK_THROWS_AS(RealSpec::parse("quad:1,1,4,1"), InvalidArgumentError);
    CHECK_THROWS_AS(RealSpec::parse("quad:1,1,-2,1"), InvalidArgumentError);
    CHECK_THROWS_AS(RealSpec::parse("1/0"), InvalidArgumentError);
    CHECK_THROWS_AS(RealSpec::parse(""), InvalidArgumentError);
    CHECK_THROWS_AS(RealSpec::parse("abc"), InvalidArgumentError);
    CHECK_THROWS_AS(RealSpec::parse("0.5@0"), InvalidArgumentError);
}

TEST_CASE("interval distance image handles folds") {
    // Spans an integer: minimum pinned at zero.
    CertifiedInterval spans_int{Q(19, 10), Q(21, 10)};
    auto img = spans_int.dist_to_nearest_int_image();
    CHECK(img.lo == 0);
    CHECK(img.hi == Q(1, 10));
    // Spans a half-integer: maximum pinned at 1/2.
    CertifiedInterval spans_half{Q(24, 10), Q(26, 10)};
    img = spans_half.dist_to_nearest_int_image();
    CHECK(img.lo == Q(4, 10));
    CHECK(img.hi == Q(1, 2));
}

TEST_CASE("certified log and exp enclosures are ordered and tight") {
    const auto l = ln_enclosure(mpq_class(2), 128);
    CHECK(l.lo < l.hi);
    CHECK(l.width() < tol10(30));
    CHECK(std::abs(l.midpoint().get_d() - std::log(2.0)) < 1e-15);
    const auto e = exp_enclosure(mpq_class(1), 128);
    CHECK(std::abs(e.midpoint().get_d() - std::exp(1.0)) < 1e-15);
    const auto p = pow_enclosure(CertifiedInterval{Q(2, 1), Q(2, 1)}, Q(31, 10), 128);
    CHECK(std::abs(p.midpoint().get_d() - std::pow(2.0, 3.1)) < 1e-12);
}

#include <doctest.h>

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <vector>

#include "modone/errors.hpp"
#include "modone/measures.hpp"
#include "modone/numeric.hpp"

using namespace modone;

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

MeasureModel standard_cantor() { return MeasureModel::cantor_ifs(3, {0, 2}); }

MeasureModel dirac_at_zero() {
    return MeasureModel::atomic({{mpq_class(0), mpq_class(1)}});
}

std::complex<double> as_complex(const FourierCoeff& c) { return {c.re, c.im}; }

}  // namespace

TEST_CASE("uniform coefficients collapse to orthogonality") {
    const MeasureModel leb = MeasureModel::lebesgue();
    const FourierCoeff at0 = fourier_coeff(leb, 0);
    CHECK(at0.re == 1.0);
    CHECK(at0.im == 0.0);
    CHECK(at0.err == 0.0);
    for (long xi : {5L, -5L, 1L, 1000000L}) {
        const FourierCoeff c = fourier_coeff(leb, xi);
        CHECK(c.re == 0.0);
        CHECK(c.im == 0.0);
        CHECK(c.err == 0.0);
    }
}

TEST_CASE("digit-restricted base-3 coefficients match the cosine product") {
    const MeasureModel cantor = standard_cantor();
    // Power-of-3 frequencies reduce the depth-40 product to a closed form:
    // all integer-argument factors are 1 and the rest contribute
    // |cos(2 pi 3^-i)| for i = 1 .. 40-k.
    for (long k : {0L, 1L, 6L, 12L}) {
        double closed = 1;
        for (long i = 1; i <= 40 - k; ++i)
            closed *= std::fabs(std::cos(kTwoPi * std::pow(3.0, -i)));
        const FourierCoeff c = fourier_coeff(cantor, pow_z(3, static_cast<unsigned long>(k)), 40);
        CAPTURE(k);
        CHECK(std::fabs(c.magnitude() - closed) < 1e-12);
    }
    const FourierCoeff base = fourier_coeff(cantor, 1, 40);
    CHECK(std::fabs(base.magnitude() - 0.371437356708765) < 1e-12);
}

TEST_CASE("power-of-3 magnitudes are rigid for the base-3 measure") {
    const MeasureModel cantor = standard_cantor();
    std::vector<FourierCoeff> coeffs;
    for (long k = 0; k <= 13; ++k)
        coeffs.push_back(fourier_coeff(cantor, pow_z(3, static_cast<unsigned long>(k)), 40));
    for (long k = 0; k <= 12; ++k) {
        CAPTURE(k);
        // No decay along the scaling frequencies: consecutive magnitudes
        // agree within twice the summed certified radii.
        const double gap = std::fabs(coeffs[static_cast<std::size_t>(k + 1)].magnitude() -
                                     coeffs[static_cast<std::size_t>(k)].magnitude());
        CHECK(gap <= 2 * (coeffs[static_cast<std::size_t>(k)].err +
                          coeffs[static_cast<std::size_t>(k + 1)].err));
        CHECK(std::fabs(coeffs[static_cast<std::size_t>(k)].magnitude() -
                        coeffs[0].magnitude()) < 1e-9);
    }
}

TEST_CASE("atomic coefficients follow the finite exponential sum") {
    const MeasureModel two =
        MeasureModel::atomic({{mpq_class(1, 2), mpq_class(1, 2)}, {mpq_class(0), mpq_class(1, 2)}});
    for (long xi = -6; xi <= 6; ++xi) {
        const FourierCoeff c = fourier_coeff(two, xi);
        const double expect = xi % 2 == 0 ? 1.0 : 0.0;  // (1 + (-1)^xi) / 2
        CHECK(std::fabs(c.re - expect) <= c.err);
        CHECK(std::fabs(c.im) <= c.err);
    }
    const FourierCoeff quarter = fourier_coeff(
        MeasureModel::atomic({{mpq_class(1, 4), mpq_class(1)}}), 1);
    CHECK(std::fabs(quarter.re) <= 1e-12);
    CHECK(std::fabs(quarter.im + 1.0) <= 1e-12);  // e(-1/4) = -i
}

TEST_CASE("coefficients are hermitian and bounded by total mass") {
    const MeasureModel models[] = {
        MeasureModel::lebesgue(), standard_cantor(),
        MeasureModel::atomic({{mpq_class(1, 3), mpq_class(2, 5)}, {mpq_class(7, 9), mpq_class(3, 5)}})};
    for (const MeasureModel& m : models) {
        CHECK(fourier_coeff(m, 0).re == 1.0);
        for (long xi : {1L, 2L, 5L, 17L, 100L, 2187L}) {
            const FourierCoeff pos = fourier_coeff(m, xi);
            const FourierCoeff neg = fourier_coeff(m, -xi);
            CHECK(pos.magnitude() <= 1 + pos.err);
            CHECK(std::abs(as_complex(neg) - std::conj(as_complex(pos))) <=
                  pos.err + neg.err + 1e-12);
        }
    }
}

TEST_CASE("coefficient preconditions are enforced") {
    CHECK_THROWS_AS(fourier_coeff(standard_cantor(), 5, 0), InvalidArgumentError);
    CHECK_NOTHROW(fourier_coeff(MeasureModel::lebesgue(), 5, 0));  // depth unused
}

TEST_CASE("uniform sampling is reproducible with frozen draws") {
    const MeasureModel leb = MeasureModel::lebesgue();
    const auto draws = sample(leb, 42, 2);
    REQUIRE(draws.size() == 2);
    CHECK(decimal_string(draws[0].rational_value(), 20) == "0.59013541148252818917");
    CHECK(decimal_string(draws[1].rational_value(), 20) == "0.55842169601091716156");
    CHECK(draws[0].rational_value() != draws[1].rational_value());
    for (const auto& d : draws) {
        CHECK(d.rational_value() >= 0);
        CHECK(d.rational_value() < 1);
        CHECK(d.rational_value().get_den() <= pow10_z(64));
    }
    // Draw i depends only on (seed, i): shorter runs are prefixes.
    const auto more = sample(leb, 42, 5);
    CHECK(more[0].rational_value() == draws[0].rational_value());
    CHECK(more[1].rational_value() == draws[1].rational_value());
    const auto other = sample(leb, 43, 2);
    CHECK(other[0].rational_value() != draws[0].rational_value());
}

TEST_CASE("digit-restricted sampling stays on the allowed alphabet") {
    const MeasureModel cantor = standard_cantor();
    const auto draws = sample(cantor, 7, 4);
    for (const auto& d : draws) {
        mpq_class x = d.rational_value();
        CHECK(x >= 0);
        CHECK(x < 1);
        int steps = 0;
        while (x != 0) {
            x *= 3;
            const mpz_class digit(x.get_num() / x.get_den());
            const long val = digit.get_si();
            CHECK((val == 0 || val == 2));
            x -= mpq_class(digit);
            ++steps;
        }
        CHECK(steps <= 63);  // certified depth for base 3
    }
    // Regression anchor for the digit stream itself.
    mpq_class x = draws[0].rational_value();
    std::string prefix;
    for (int i = 0; i < 12; ++i) {
        x *= 3;
        const mpz_class digit(x.get_num() / x.get_den());
        prefix += static_cast<char>('0' + digit.get_si());
        x -= mpq_class(digit);
    }
    CHECK(prefix == "002222020020");
}

TEST_CASE("atomic sampling is categorical with the right frequencies") {
    const auto point = sample(MeasureModel::atomic({{mpq_class(1, 4), mpq_class(1)}}), 99, 3);
    for (const auto& d : point) CHECK(d.rational_value() == mpq_class(1, 4));

    const MeasureModel pair = MeasureModel::atomic(
        {{mpq_class(0), mpq_class(3, 4)}, {mpq_class(1, 2), mpq_class(1, 4)}});
    long zeros = 0;
    for (const auto& d : sample(pair, 5, 2000))
        if (d.rational_value() == 0) ++zeros;
    // 6 sigma around the 1500 mean of Binomial(2000, 3/4)
    CHECK(zeros >= 1384);
    CHECK(zeros <= 1616);

    CHECK_THROWS_AS(sample(pair, 5, 0), InvalidArgumentError);
}

TEST_CASE("empirical characteristic function of uniform draws is flat") {
    const auto draws = sample(MeasureModel::lebesgue(), 2026, 100000);
    std::complex<double> acc = 0;
    for (const auto& d : draws) {
        const double t = d.rational_value().get_d();
        acc += std::complex<double>(std::cos(kTwoPi * t), -std::sin(kTwoPi * t));
    }
    CHECK(std::abs(acc) / 100000.0 <= 0.02);
}

TEST_CASE("decay profiles separate flat spectra from vanishing ones") {
    std::vector<mpz_class> pows;
    for (long k = 0; k <= 12; ++k) pows.push_back(pow_z(3, static_cast<unsigned long>(k)));
    const DecayProfile rigid = decay_profile(standard_cantor(), pows);
    REQUIRE(rigid.tau_hat.has_value());
    CHECK(std::fabs(*rigid.tau_hat) < 1e-9);  // no decay along powers of 3
    CHECK(rigid.residual < 1e-12);
    CHECK(rigid.usable == 12);  // xi = 1 is excluded from the fit

    std::vector<mpz_class> ladder;
    for (long xi = 1; xi <= 100; ++xi) ladder.push_back(xi);
    const DecayProfile flat = decay_profile(MeasureModel::lebesgue(), ladder);
    CHECK(!flat.tau_hat.has_value());
    CHECK(flat.note == "all coefficients vanish");
    CHECK(flat.usable == 0);

    const DecayProfile dirac = decay_profile(dirac_at_zero(), {1, 2, 3, 4, 5, 6, 7, 8});
    REQUIRE(dirac.tau_hat.has_value());
    CHECK(std::fabs(*dirac.tau_hat) < 1e-15);
    CHECK(dirac.residual == 0.0);
    CHECK(dirac.usable == 7);
}

TEST_CASE("generic frequencies give a fluctuating fit that is still frozen") {
    std::vector<mpz_class> generic;
    for (long xi = 2; xi <= 60; ++xi) generic.push_back(xi);
    const DecayProfile p = decay_profile(standard_cantor(), generic);
    REQUIRE(p.tau_hat.has_value());
    CHECK(*p.tau_hat == doctest::Approx(0.8151163582841671).epsilon(1e-9));
    CHECK(p.residual == doctest::Approx(1.760053164063414).epsilon(1e-9));
    CHECK(p.usable == 59);
    for (const FourierCoeff& c : p.coefficients) CHECK(c.magnitude() <= 1 + c.err);
}

TEST_CASE("degenerate fits explain themselves") {
    const DecayProfile lone = decay_profile(dirac_at_zero(), {mpz_class(1), mpz_class(2)});
    CHECK(!lone.tau_hat.has_value());
    CHECK(lone.note == "fewer than two usable frequencies");
    CHECK(lone.to_csv() == "xi,mag,err\n1,1.0,1e-12\n2,1.0,1e-12\n");
    CHECK(lone.to_json() ==
          "{\"frequencies\":2,\"usable\":1,\"tau_hat\":null,\"residual\":0.0,"
          "\"note\":\"fewer than two usable frequencies\"}");

    const DecayProfile mirrored = decay_profile(dirac_at_zero(), {mpz_class(2), mpz_class(-2)});
    CHECK(!mirrored.tau_hat.has_value());
    CHECK(mirrored.note == "frequencies do not separate");

    CHECK_THROWS_AS(decay_profile(dirac_at_zero(), {}), InvalidArgumentError);
}

TEST_CASE("measure strings round-trip") {
    const char* specs[] = {"lebesgue", "cantor:m=3,digits=0;2", "cantor:m=5,digits=0;2;4",
                           "atomic:1/4:1", "atomic:1/3:2/5,7/9:3/5"};
    for (const char* s : specs) CHECK(MeasureModel::parse(s).to_string() == s);
    // Decimal atom tokens normalize to fractions.
    CHECK(MeasureModel::parse("atomic:0.25:0.5,0.75:0.5").to_string() ==
          "atomic:1/4:1/2,3/4:1/2");
    CHECK(MeasureModel::parse("lebesgue").is_lebesgue());
    CHECK(MeasureModel::parse("cantor:m=3,digits=2;0").digits() == std::vector<long>{0, 2});
}

TEST_CASE("malformed measures are rejected") {
    CHECK_THROWS_AS(MeasureModel::parse("gauss"), InvalidArgumentError);
    CHECK_THROWS_AS(MeasureModel::parse("cantor:m=2,digits=0;1"), InvalidArgumentError);
    CHECK_THROWS_AS(MeasureModel::parse("cantor:m=3,digits=0"), InvalidArgumentError);
    CHECK_THROWS_AS(MeasureModel::parse("cantor:m=3,digits=0;3"), InvalidArgumentError);
    CHECK_THROWS_AS(MeasureModel::parse("cantor:m=3,digits=0;0"), InvalidArgumentError);
    CHECK_THROWS_AS(MeasureModel::parse("cantor:m=3"), InvalidArgumentError);
    CHECK_THROWS_AS(MeasureModel::parse("atomic:1/4:1/2"), InvalidArgumentError);
    CHECK_THROWS_AS(MeasureModel::parse("atomic:5/4:1"), InvalidArgumentError);
    CHECK_THROWS_AS(MeasureModel::parse("atomic:1/4:-1,3/4:2"), InvalidArgumentError);
    CHECK_THROWS_AS(MeasureModel::parse("atomic:1/4"), InvalidArgumentError);
    CHECK_THROWS_AS(MeasureModel::atomic({}), InvalidArgumentError);
}

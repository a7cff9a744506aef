#include <doctest.h>

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "modone/errors.hpp"
#include "modone/experiments.hpp"
#include "modone/numeric.hpp"

using namespace modone;

namespace {

const RealSpec kHalf = RealSpec::rational(mpq_class(1, 2));
const RealSpec kZero = RealSpec::rational(0);
const mpq_class kEpsHalf(1, 2);

RealSpec golden_minus_one() { return RealSpec::quadratic(-1, 1, 5, 2); }
RealSpec sqrt2_minus_one() { return RealSpec::quadratic(-1, 1, 2, 1); }

bool contains_index(const std::vector<mpz_class>& xs, long v) {
    return std::find(xs.begin(), xs.end(), mpz_class(v)) != xs.end();
}

double frac_double(double x) { return x - std::floor(x); }

double dist_double(double x) {
    const double f = frac_double(x);
    return std::min(f, 1 - f);
}

}  // namespace

TEST_CASE("even multiples of one half are exact-zero hits") {
    const HitScan s = multiplicative_hits(kHalf, kZero, kHalf, kZero, 100, kEpsHalf);
    CHECK(s.scanned == 85);
    CHECK(s.hit_count == 43);
    CHECK(s.skip_count == 0);
    for (const HitRecord& r : s.records) {
        CAPTURE(r.index.get_str());
        if (r.index % 2 == 0) {
            CHECK(r.is_hit);
            CHECK(r.lhs.lo == 0);
            CHECK(r.lhs.hi == 0);
        } else {
            CHECK(!r.is_hit);
            CHECK(!r.skipped);
            // Odd n: both distances are exactly 1/2, so the left side is n/4.
            CHECK(r.lhs.lo == mpq_class(r.index, 4));
        }
    }
    REQUIRE(s.trend.size() == 4);
    CHECK(s.trend[0].checkpoint == 16);
    CHECK(s.trend[0].cumulative_hits == 1);
    CHECK(s.trend[1].cumulative_hits == 9);
    CHECK(s.trend[2].cumulative_hits == 25);
    CHECK(s.trend[3].checkpoint == 100);
    CHECK(s.trend[3].cumulative_hits == 43);
    CHECK(s.trend[0].normalizer == doctest::Approx(1.0197814405382262).epsilon(1e-14));
    CHECK(s.trend[3].ratio == doctest::Approx(28.156478303757066).epsilon(1e-13));
}

TEST_CASE("threshold follows the iterated-log formula") {
    // Independent recomputation in plain doubles, natural logarithms.
    for (long n : {16L, 17L, 100L, 169L, 5741L}) {
        CAPTURE(n);
        const HitRecord r = certify_multiplicative_hit(kHalf, kZero, kHalf, kZero, n, kEpsHalf, 96);
        const double expected =
            std::pow(std::log(std::log(static_cast<double>(n))), 3.5) /
            std::log(static_cast<double>(n));
        CHECK(r.threshold.midpoint().get_d() == doctest::Approx(expected).epsilon(1e-12));
        CHECK(r.threshold.width().get_d() < 1e-20);
    }
}

TEST_CASE("quadratic pair scan finds the continuant hits") {
    const HitScan s =
        multiplicative_hits(sqrt2_minus_one(), kZero, golden_minus_one(), kZero, 10000, kEpsHalf);
    CHECK(s.scanned == 9985);
    CHECK(s.hit_count == 185);
    CHECK(s.skip_count == 0);

    const std::vector<mpz_class> hits = s.hit_indices();
    // Pell continuants (simultaneously small on the sqrt(2) side).
    for (long n : {169L, 985L, 5741L}) CHECK(contains_index(hits, n));
    // Fibonacci continuants (small on the golden side).
    for (long n : {610L, 1597L, 4181L, 6765L}) CHECK(contains_index(hits, n));
    // Dense prefixes are not hits: the product is of order n there.
    for (long n : {16L, 1000L, 9999L}) CHECK(!contains_index(hits, n));

    CHECK(s.trend.back().checkpoint == 10000);
    CHECK(s.trend.back().cumulative_hits == 185);
    CHECK(s.trend.back().ratio == doctest::Approx(83.321067632667521).epsilon(1e-13));

    // Cumulative counts never decrease.
    for (std::size_t i = 1; i < s.trend.size(); ++i)
        CHECK(s.trend[i].cumulative_hits >= s.trend[i - 1].cumulative_hits);
}

TEST_CASE("hit certificates survive a tenfold precision raise") {
    const HitScan s =
        multiplicative_hits(sqrt2_minus_one(), kZero, golden_minus_one(), kZero, 2000, kEpsHalf);
    for (const HitRecord& r : s.records) {
        if (!r.is_hit) continue;
        const HitRecord again = certify_multiplicative_hit(sqrt2_minus_one(), kZero,
                                                           golden_minus_one(), kZero, r.index,
                                                           kEpsHalf, 480);
        CAPTURE(r.index.get_str());
        CHECK(again.is_hit);
        CHECK(!again.skipped);
        // The refined enclosure stays inside the coarse one.
        CHECK(r.lhs.contains(again.lhs));
    }
}

TEST_CASE("scan left sides match a floating-point recomputation") {
    const double a = std::sqrt(2.0) - 1.0;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    const HitScan s =
        multiplicative_hits(sqrt2_minus_one(), kZero, golden_minus_one(), kZero, 400, kEpsHalf);
    for (const HitRecord& r : s.records) {
        const double n = r.index.get_d();
        const double direct = n * dist_double(n * a) * dist_double(n * g);
        CAPTURE(r.index.get_str());
        CHECK(r.lhs.midpoint().get_d() == doctest::Approx(direct).epsilon(1e-9));
    }
}

TEST_CASE("alternating orbit hits the full range at this threshold") {
    // Phases of 2^t/3 sit at 1/3 (even t, distance 0 to delta = 1/3) and 2/3
    // (odd t, distance exactly 1/3).  With natural logs the threshold
    // (ln t)^3.5/t stays above 1/3 on 3..20, so odd t certify as hits too;
    // the even-t structure shows up as exact-zero left sides.
    const LacunarySequence pow2 = geometric_sequence(2, 20);
    const RealSpec third = RealSpec::rational(mpq_class(1, 3));
    const HitScan s = lacunary_hits(pow2, third, third, 20, kEpsHalf);
    CHECK(s.hit_count == 18);
    CHECK(s.skip_count == 0);
    for (const HitRecord& r : s.records) {
        CAPTURE(r.index.get_str());
        CHECK(r.is_hit);
        if (r.index % 2 == 0) {
            CHECK(r.lhs.lo == 0);
            CHECK(r.lhs.hi == 0);
        } else {
            CHECK(r.lhs.lo == mpq_class(1, 3));
            CHECK(r.lhs.hi == mpq_class(1, 3));
        }
    }
    REQUIRE(s.trend.size() == 4);
    CHECK(s.trend[0].checkpoint == 4);
    CHECK(s.trend[0].cumulative_hits == 2);
    CHECK(s.trend[1].cumulative_hits == 6);
    CHECK(s.trend[2].cumulative_hits == 14);
    CHECK(s.trend[3].checkpoint == 20);
    CHECK(s.trend[3].cumulative_hits == 18);
    CHECK(s.trend[3].ratio == doctest::Approx(6.0085476125160131).epsilon(1e-14));
}

TEST_CASE("digit-restricted point stops hitting at the threshold crossover") {
    // beta = 1/4 lies in the base-3 digit set {0,2} world: its orbit under
    // 3^t alternates between 1/4 and 3/4, both at distance exactly 1/4 from
    // delta = 1/2.  Hits happen exactly while (ln t)^3.1/t > 1/4, a prefix.
    const LacunarySequence pow3 = geometric_sequence(3, 2400);
    const HitScan s = lacunary_hits(pow3, RealSpec::rational(mpq_class(1, 4)), kHalf, 2400,
                                    mpq_class(1, 10));
    CHECK(s.skip_count == 0);
    CHECK(s.hit_count == 2258);
    bool seen_miss = false;
    for (const HitRecord& r : s.records) {
        CAPTURE(r.index.get_str());
        CHECK(r.lhs.lo == mpq_class(1, 4));
        CHECK(r.lhs.hi == mpq_class(1, 4));
        if (!r.is_hit) seen_miss = true;
        // Once the threshold dips below 1/4 it never hits again.
        if (seen_miss) CHECK(!r.is_hit);
    }
    CHECK(s.records[2257].index == 2260);
    CHECK(s.records[2257].is_hit);
    CHECK(s.records[2258].index == 2261);
    CHECK(!s.records[2258].is_hit);
}

TEST_CASE("undecidable comparisons are skipped, never guessed") {
    // A one-digit decimal makes ||3*beta|| span the threshold; no precision
    // raise can narrow a fixed budget.
    const RealSpec coarse = RealSpec::decimal("0.15", 1);
    const HitRecord r = certify_lacunary_hit(3, 3, coarse, kZero, kEpsHalf, 48);
    CHECK(r.skipped);
    CHECK(!r.is_hit);
    CHECK(r.lhs.lo == 0);
    CHECK(r.lhs.hi == mpq_class(1, 2));

    const HitRecord m =
        certify_multiplicative_hit(RealSpec::rational(mpq_class(1, 3)), kZero,
                                   RealSpec::decimal("0.25", 1), kZero, 16, kEpsHalf, 48);
    CHECK(m.skipped);
    CHECK(!m.is_hit);

    // A scan drowning in skips fails hard instead of biasing the trend.
    const LacunarySequence tiny =
        sequence_from_terms({mpz_class(1), mpz_class(2), mpz_class(3)});
    CHECK_THROWS_AS(lacunary_hits(tiny, coarse, kZero, 3, kEpsHalf),
                    InsufficientPrecisionError);
}

TEST_CASE("scan artifacts carry every comparison") {
    const LacunarySequence pow2 = geometric_sequence(2, 8);
    const RealSpec third = RealSpec::rational(mpq_class(1, 3));
    const HitScan s = lacunary_hits(pow2, third, third, 8, kEpsHalf);
    const std::string hits = s.hits_csv();
    CHECK(hits.substr(0, hits.find('\n')) == "n_or_t,lhs_lo,lhs_hi,threshold,is_hit");
    CHECK(std::count(hits.begin(), hits.end(), '\n') == 7);  // header + 6 records
    const std::string trend = s.trend_csv();
    CHECK(trend.substr(0, trend.find('\n')) == "checkpoint,cumulative_hits,normalizer,ratio");

    // Skipped records are visible in the artifact, not silently dropped.
    HitScan skipped;
    skipped.records.push_back(certify_lacunary_hit(3, 3, RealSpec::decimal("0.15", 1), kZero,
                                                   kEpsHalf, 48));
    CHECK(skipped.hits_csv().find(",skip\n") != std::string::npos);

    // Identical inputs reproduce identical artifacts.
    const HitScan again = lacunary_hits(pow2, third, third, 8, kEpsHalf);
    CHECK(again.hits_csv() == hits);
    CHECK(again.trend_csv() == trend);
}

TEST_CASE("restricted scans visit only the sequence terms") {
    const LacunarySequence pow2 = geometric_sequence(2, 13);
    const HitScan s = multiplicative_hits(kHalf, kZero, kHalf, kZero, 8192, kEpsHalf, pow2);
    CHECK(s.scanned == 10);  // 2^4 .. 2^13
    CHECK(s.hit_count == 10);
    for (const HitRecord& r : s.records) {
        CHECK(r.lhs.hi == 0);
        CHECK(r.is_hit);
    }
}

TEST_CASE("pipeline translates every sampled rotation at this scale") {
    const PipelineReport rep = pipeline_theorem_cor2(
        golden_minus_one(), kZero, kZero, MeasureModel::lebesgue(), kEpsHalf, 16, 5, 3);
    CHECK(rep.note.empty());
    CHECK(rep.construction.witnesses.size() == 16);
    CHECK(rep.translated_fraction() == 1.0);
    CHECK(rep.slack_factor == 8.0);
    REQUIRE(rep.rows.size() == 5);

    const long expected_lac[] = {14, 13, 14, 14, 14};
    const long expected_direct[] = {12, 13, 12, 12, 10};
    for (std::size_t i = 0; i < 5; ++i) {
        const PipelineRow& row = rep.rows[i];
        CAPTURE(i);
        CHECK(row.lacunary_count == expected_lac[i]);
        // Every certified scan hit carries over through the witness bound.
        CHECK(row.translated_count == row.lacunary_count);
        CHECK(row.direct_count == expected_direct[i]);
        CHECK(row.skipped == 0);
        CHECK(row.hits.size() == static_cast<std::size_t>(row.lacunary_count));
        for (const TranslatedHit& h : row.hits) {
            CHECK(h.chain_certified);
            CHECK(h.product.lo >= 0);
            CHECK(h.product.hi < h.slack_threshold.lo);
            CHECK(h.n == rep.construction.seq.term(h.t));
        }
    }

    // The t = 3 golden witness is the frozen lattice candidate 576.
    REQUIRE(!rep.rows[0].hits.empty());
    const TranslatedHit& first = rep.rows[0].hits[0];
    CHECK(first.t == 3);
    CHECK(first.n == 576);
    CHECK(first.product.hi.get_d() == doctest::Approx(0.066052977734517154).epsilon(1e-12));
    CHECK(first.slack_threshold.lo.get_d() ==
          doctest::Approx(3.7061612953266185).epsilon(1e-14));
    CHECK(first.direct_threshold.lo.get_d() ==
          doctest::Approx(1.3534120718057641).epsilon(1e-14));
}

TEST_CASE("pipeline artifacts are deterministic and self-describing") {
    const PipelineReport rep = pipeline_theorem_cor2(
        golden_minus_one(), kZero, kZero, MeasureModel::lebesgue(), kEpsHalf, 16, 5, 3);
    const PipelineReport again = pipeline_theorem_cor2(
        golden_minus_one(), kZero, kZero, MeasureModel::lebesgue(), kEpsHalf, 16, 5, 3);
    CHECK(rep.to_json() == again.to_json());
    CHECK(rep.hits_csv() == again.hits_csv());

    const std::string j = rep.to_json();
    CHECK(j.rfind("{\"alpha\":\"quad:-1,1,5,2\",\"gamma\":\"0/1\",\"delta\":\"0/1\","
                  "\"epsilon\":\"1/2\",\"T_max\":16,\"samples\":5,\"seed\":3,"
                  "\"slack_factor\":8.0,\"witnesses\":16,\"translated_fraction\":1.0,",
                  0) == 0);
    const std::string csv = rep.hits_csv();
    CHECK(csv.substr(0, csv.find('\n')) ==
          "beta_id,t,n,product_lo,product_hi,slack_threshold_lo,direct_threshold_lo,"
          "chain_certified,direct_hit");

    // A different seed draws different rotations.
    const PipelineReport other = pipeline_theorem_cor2(
        golden_minus_one(), kZero, kZero, MeasureModel::lebesgue(), kEpsHalf, 16, 5, 4);
    CHECK(other.to_json() != j);
}

TEST_CASE("degenerate point-mass sampler is legal and collapses the rows") {
    const PipelineReport rep = pipeline_theorem_cor2(
        golden_minus_one(), kZero, kZero, MeasureModel::parse("atomic:13/21:1"), kEpsHalf, 8, 3,
        1);
    CHECK(rep.translated_fraction() == 1.0);
    REQUIRE(rep.rows.size() == 3);
    for (const PipelineRow& row : rep.rows) {
        CHECK(row.beta_repr == rep.rows[0].beta_repr);
        CHECK(row.lacunary_count == 6);  // every t in 3..8 certifies
        CHECK(row.translated_count == 6);
    }
}

TEST_CASE("scans and pipeline reject malformed requests") {
    const LacunarySequence pow2 = geometric_sequence(2, 20);
    const RealSpec third = RealSpec::rational(mpq_class(1, 3));
    CHECK_THROWS_AS(multiplicative_hits(kHalf, kZero, kHalf, kZero, 15, kEpsHalf),
                    InvalidArgumentError);
    CHECK_THROWS_AS(lacunary_hits(pow2, third, third, 2, kEpsHalf), InvalidArgumentError);
    CHECK_THROWS_AS(lacunary_hits(pow2, third, third, 21, kEpsHalf), InvalidArgumentError);
    CHECK_THROWS_AS(pipeline_theorem_cor2(golden_minus_one(), kZero, kZero,
                                          MeasureModel::lebesgue(), kEpsHalf, 2, 5, 1),
                    InvalidArgumentError);
    CHECK_THROWS_AS(pipeline_theorem_cor2(golden_minus_one(), kZero, kZero,
                                          MeasureModel::lebesgue(), kEpsHalf, 16, 0, 1),
                    InvalidArgumentError);
    // Rational rotations have no inhomogeneous witness windows.
    CHECK_THROWS_AS(pipeline_theorem_cor2(RealSpec::rational(mpq_class(1, 3)),
                                          RealSpec::rational(mpq_class(1, 7)), kZero,
                                          MeasureModel::lebesgue(), kEpsHalf, 12, 2, 1),
                    InvalidArgumentError);
}

TEST_CASE("experiment configs round-trip through versioned JSON") {
    ExperimentConfig cfg;
    cfg.kind = "hits";
    cfg.params = {{"beta", "1/3"}, {"Tmax", "20"}, {"eps", "1/2"}};
    const std::string j = cfg.to_json();
    CHECK(j ==
          "{\"spec_version\":1,\"kind\":\"hits\",\"params\":{\"Tmax\":\"20\",\"beta\":\"1/3\","
          "\"eps\":\"1/2\"}}");
    const ExperimentConfig back = ExperimentConfig::from_json(j);
    CHECK(back.kind == cfg.kind);
    CHECK(back.params == cfg.params);
    CHECK(back.to_json() == j);

    CHECK_THROWS_AS(ExperimentConfig::from_json("not json"), InvalidArgumentError);
    CHECK_THROWS_AS(ExperimentConfig::from_json("{\"kind\":\"hits\"}"), InvalidArgumentError);
    CHECK_THROWS_AS(ExperimentConfig::from_json("{\"spec_version\":2,\"kind\":\"hits\"}"),
                    InvalidArgumentError);
    CHECK_THROWS_AS(ExperimentConfig::from_json("{\"spec_version\":1}"), InvalidArgumentError);
    CHECK_THROWS_AS(
        ExperimentConfig::from_json("{\"spec_version\":1,\"kind\":\"x\",\"params\":{\"a\":3}}"),
        InvalidArgumentError);
}

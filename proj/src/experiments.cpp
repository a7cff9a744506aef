#include "modone/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>
#include <utility>

#include <nlohmann/json.hpp>

#include "modone/errors.hpp"
#include "modone/numeric.hpp"
#include "modone/realnum.hpp"
#include "modone/transcend.hpp"

namespace modone {

namespace {

// Distance tolerances and threshold precisions tried per comparison, loosest
// first so budgeted decimals can still decide wide gaps.
constexpr unsigned kLadder[] = {48, 96, 192, 384};

// Shortest round-trip formatting, shared convention for all JSON/CSV output.
std::string num(double v) { return nlohmann::json(v).dump(); }

// fn(i) for 0 <= i < n, strided over up to 8 workers when heavy; the first
// exception wins and is rethrown after the join.
template <typename Fn>
void parallel_rows(long n, bool heavy, Fn&& fn) {
    const long workers = heavy ? std::min<long>(8, n) : 1;
    if (workers <= 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::mutex gate;
    std::exception_ptr first;
    for (long w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (long i = w; i < n; i += workers) fn(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(gate);
                if (!first) first = std::current_exception();
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (first) std::rethrow_exception(first);
}

mpq_class pow2_tolerance(unsigned bits) {
    return mpq_class(mpz_class(1), mpz_class(1) << bits);
}

// Certified order against the threshold; neither branch taken means the
// comparison stays undecided at this precision.
void resolve(HitRecord& rec) {
    if (rec.lhs.certainly_less(rec.threshold)) {
        rec.is_hit = true;
    } else if (rec.threshold.hi <= rec.lhs.lo) {
        rec.is_hit = false;
    } else {
        rec.skipped = true;
    }
}

// Dyadic checkpoints from `start` doubling up to `last`, endpoint included.
std::vector<long> dyadic_checkpoints(long start, long last) {
    std::vector<long> cps;
    for (long c = start; c <= last; c *= 2) cps.push_back(c);
    if (cps.empty() || cps.back() != last) cps.push_back(last);
    return cps;
}

// Cumulative hits at each checkpoint; records must be ascending by index.
template <typename Normalizer>
std::vector<TrendPoint> build_trend(const std::vector<HitRecord>& records,
                                    const std::vector<long>& checkpoints, Normalizer&& norm) {
    std::vector<TrendPoint> trend;
    trend.reserve(checkpoints.size());
    std::size_t r = 0;
    long cum = 0;
    for (long cp : checkpoints) {
        while (r < records.size() && records[r].index <= cp) {
            if (records[r].is_hit) ++cum;
            ++r;
        }
        TrendPoint p;
        p.checkpoint = cp;
        p.cumulative_hits = cum;
        p.normalizer = norm(cp);
        p.ratio = static_cast<double>(cum) / p.normalizer;
        trend.push_back(std::move(p));
    }
    return trend;
}

void finish_scan(HitScan& scan, const char* what) {
    for (const HitRecord& rec : scan.records) {
        if (rec.skipped)
            ++scan.skip_count;
        else if (rec.is_hit)
            ++scan.hit_count;
    }
    scan.scanned = static_cast<long>(scan.records.size());
    // Undecided comparisons are tolerated in trace amounts only; past 0.1%
    // of the range they would bias every trend statistic.
    if (scan.skip_count * 1000 > scan.scanned)
        throw InsufficientPrecisionError(std::string(what) + ": " +
                                         std::to_string(scan.skip_count) + " of " +
                                         std::to_string(scan.scanned) +
                                         " comparisons undecided at maximum precision");
}

HitRecord certify_multiplicative_ladder(const RealSpec& alpha, const RealSpec& gamma,
                                        const RealSpec& beta, const RealSpec& delta,
                                        const mpz_class& n, const mpq_class& eps) {
    HitRecord rec;
    for (unsigned bits : kLadder) {
        rec = certify_multiplicative_hit(alpha, gamma, beta, delta, n, eps, bits);
        if (!rec.skipped) break;
    }
    return rec;
}

HitScan scan_multiples(const RealSpec& alpha, const RealSpec& gamma, const RealSpec& beta,
                       const RealSpec& delta, long n_max, const mpq_class& eps,
                       std::vector<mpz_class> span) {
    HitScan scan;
    scan.records.resize(span.size());
    parallel_rows(static_cast<long>(span.size()), span.size() >= 256, [&](long i) {
        scan.records[static_cast<std::size_t>(i)] = certify_multiplicative_ladder(
            alpha, gamma, beta, delta, span[static_cast<std::size_t>(i)], eps);
    });
    finish_scan(scan, "multiplicative scan");
    scan.trend = build_trend(scan.records, dyadic_checkpoints(16, n_max),
                             [](long cp) { return std::log(std::log(static_cast<double>(cp))); });
    return scan;
}

}  // namespace

std::vector<mpz_class> HitScan::hit_indices() const {
    std::vector<mpz_class> out;
    for (const HitRecord& rec : records)
        if (rec.is_hit) out.push_back(rec.index);
    return out;
}

std::string HitScan::hits_csv() const {
    std::ostringstream out;
    out << "n_or_t,lhs_lo,lhs_hi,threshold,is_hit\n";
    for (const HitRecord& rec : records) {
        out << rec.index.get_str() << ',' << compact_decimal_string(rec.lhs.lo, 18) << ','
            << compact_decimal_string(rec.lhs.hi, 18) << ','
            << compact_decimal_string(rec.threshold.lo, 18) << ',';
        if (rec.skipped)
            out << "skip";
        else
            out << (rec.is_hit ? 1 : 0);
        out << '\n';
    }
    return out.str();
}

std::string HitScan::trend_csv() const {
    std::ostringstream out;
    out << "checkpoint,cumulative_hits,normalizer,ratio\n";
    for (const TrendPoint& p : trend)
        out << p.checkpoint.get_str() << ',' << p.cumulative_hits << ',' << num(p.normalizer)
            << ',' << num(p.ratio) << '\n';
    return out.str();
}

HitRecord certify_multiplicative_hit(const RealSpec& alpha, const RealSpec& gamma,
                                     const RealSpec& beta, const RealSpec& delta,
                                     const mpz_class& n, const mpq_class& eps, unsigned bits) {
    HitRecord rec;
    rec.index = n;
    rec.threshold = multiplicative_threshold(n, eps, bits);
    try {
        const mpq_class tol = pow2_tolerance(bits);
        const CertifiedInterval d1 = linear_form_dist(n, alpha, gamma, tol);
        const CertifiedInterval d2 = linear_form_dist(n, beta, delta, tol);
        rec.lhs = (d1 * d2) * mpq_class(n);
    } catch (const InsufficientPrecisionError&) {
        rec.lhs = CertifiedInterval(0, mpq_class(n) / 4);  // distances are <= 1/2 each
        rec.skipped = true;
        return rec;
    }
    resolve(rec);
    return rec;
}

HitRecord certify_lacunary_hit(const mpz_class& term, long t, const RealSpec& beta,
                               const RealSpec& delta, const mpq_class& eps, unsigned bits) {
    HitRecord rec;
    rec.index = t;
    rec.threshold = lacunary_threshold(t, eps, bits);
    try {
        rec.lhs = linear_form_dist(term, beta, delta, pow2_tolerance(bits));
    } catch (const InsufficientPrecisionError&) {
        rec.lhs = CertifiedInterval(0, mpq_class(1, 2));
        rec.skipped = true;
        return rec;
    }
    resolve(rec);
    return rec;
}

HitScan multiplicative_hits(const RealSpec& alpha, const RealSpec& gamma, const RealSpec& beta,
                            const RealSpec& delta, long n_max, const mpq_class& eps) {
    if (n_max < 16)
        throw InvalidArgumentError("multiplicative scan needs n_max >= 16");
    std::vector<mpz_class> span;
    span.reserve(static_cast<std::size_t>(n_max - 15));
    for (long n = 16; n <= n_max; ++n) span.emplace_back(n);
    return scan_multiples(alpha, gamma, beta, delta, n_max, eps, std::move(span));
}

HitScan multiplicative_hits(const RealSpec& alpha, const RealSpec& gamma, const RealSpec& beta,
                            const RealSpec& delta, long n_max, const mpq_class& eps,
                            const LacunarySequence& within) {
    if (n_max < 16)
        throw InvalidArgumentError("multiplicative scan needs n_max >= 16");
    std::vector<mpz_class> span;
    for (const mpz_class& n : within.terms)
        if (n >= 16 && n <= n_max) span.push_back(n);
    return scan_multiples(alpha, gamma, beta, delta, n_max, eps, std::move(span));
}

HitScan lacunary_hits(const LacunarySequence& seq, const RealSpec& beta, const RealSpec& delta,
                      long t_max, const mpq_class& eps) {
    if (t_max < 3) throw InvalidArgumentError("sequence scan needs t_max >= 3");
    if (seq.count() < t_max)
        throw InvalidArgumentError("sequence too short: scan needs " + std::to_string(t_max) +
                                   " terms");
    HitScan scan;
    scan.records.resize(static_cast<std::size_t>(t_max - 2));
    parallel_rows(t_max - 2, t_max >= 258, [&](long i) {
        const long t = i + 3;
        HitRecord rec;
        for (unsigned bits : kLadder) {
            rec = certify_lacunary_hit(seq.term(t), t, beta, delta, eps, bits);
            if (!rec.skipped) break;
        }
        scan.records[static_cast<std::size_t>(i)] = std::move(rec);
    });
    finish_scan(scan, "sequence scan");
    scan.trend = build_trend(scan.records, dyadic_checkpoints(4, t_max),
                             [](long cp) { return std::log(static_cast<double>(cp)); });
    return scan;
}

double PipelineReport::translated_fraction() const {
    if (rows.empty()) return 0;
    long n = 0;
    for (const PipelineRow& row : rows) n += row.translated_count >= 1 ? 1 : 0;
    return static_cast<double>(n) / static_cast<double>(rows.size());
}

std::string PipelineReport::to_json() const {
    nlohmann::ordered_json j;
    j["alpha"] = alpha_repr;
    j["gamma"] = gamma_repr;
    j["delta"] = delta_repr;
    j["epsilon"] = epsilon.get_str();
    j["T_max"] = t_max;
    j["samples"] = samples;
    j["seed"] = seed;
    j["slack_factor"] = slack_factor;
    if (!note.empty()) j["note"] = note;
    j["witnesses"] = construction.witnesses.size();
    j["translated_fraction"] = translated_fraction();
    nlohmann::ordered_json out_rows = nlohmann::ordered_json::array();
    for (const PipelineRow& row : rows) {
        nlohmann::ordered_json r;
        r["beta_id"] = row.beta_id;
        r["beta"] = row.beta_repr;
        r["lacunary_hits"] = row.lacunary_count;
        r["translated_hits"] = row.translated_count;
        r["direct_hits"] = row.direct_count;
        r["skipped"] = row.skipped;
        out_rows.push_back(std::move(r));
    }
    j["rows"] = std::move(out_rows);
    return j.dump();
}

std::string PipelineReport::hits_csv() const {
    std::ostringstream out;
    out << "beta_id,t,n,product_lo,product_hi,slack_threshold_lo,direct_threshold_lo,"
           "chain_certified,direct_hit\n";
    for (const PipelineRow& row : rows)
        for (const TranslatedHit& hit : row.hits)
            out << row.beta_id << ',' << hit.t << ',' << hit.n.get_str() << ','
                << compact_decimal_string(hit.product.lo, 18) << ','
                << compact_decimal_string(hit.product.hi, 18) << ','
                << compact_decimal_string(hit.slack_threshold.lo, 18) << ','
                << compact_decimal_string(hit.direct_threshold.lo, 18) << ','
                << (hit.chain_certified ? 1 : 0) << ',' << (hit.direct_hit ? 1 : 0) << '\n';
    return out.str();
}

PipelineReport pipeline_theorem_cor2(const RealSpec& alpha, const RealSpec& gamma,
                                     const RealSpec& delta, const MeasureModel& sampler,
                                     const mpq_class& eps, long t_max, long sample_count,
                                     std::uint64_t seed) {
    if (t_max < 3) throw InvalidArgumentError("pipeline needs t_max >= 3");
    if (sample_count < 1) throw InvalidArgumentError("sample count must be >= 1");

    PipelineReport rep;
    rep.alpha_repr = alpha.to_string();
    rep.gamma_repr = gamma.to_string();
    rep.delta_repr = delta.to_string();
    rep.epsilon = eps;
    rep.t_max = t_max;
    rep.samples = sample_count;
    rep.seed = seed;

    try {
        rep.construction =
            build_inhom_sequence(alpha, gamma, t_max, std::nullopt, pow2_tolerance(64));
    } catch (const ConstructionFailedError& e) {
        rep.note = std::string("witness construction aborted: ") + e.what();
        return rep;
    }
    const LacunarySequence& seq = rep.construction.seq;

    // The alpha leg n_t * ||n_t alpha - gamma|| is beta-independent; compute
    // it once per index, from scratch rather than reusing the construction's
    // certificates.  The tolerance scales with n so the scaled product keeps
    // 64 certified bits.
    std::vector<CertifiedInterval> alpha_leg(static_cast<std::size_t>(t_max) + 1);
    parallel_rows(t_max - 2, t_max >= 64, [&](long i) {
        const long t = i + 3;
        const mpz_class& n = seq.term(t);
        const mpq_class tol(mpz_class(1), mpz_class(mpz_class(1) << 64) * n);
        alpha_leg[static_cast<std::size_t>(t)] =
            linear_form_dist(n, alpha, gamma, tol) * mpq_class(n);
    });

    const std::vector<RealSpec> draws = sample(sampler, seed, sample_count);
    rep.rows.resize(static_cast<std::size_t>(sample_count));
    parallel_rows(sample_count, sample_count >= 4 && t_max >= 32, [&](long i) {
        PipelineRow row;
        row.beta_id = i;
        const RealSpec& beta = draws[static_cast<std::size_t>(i)];
        row.beta_repr = beta.to_string();
        const HitScan scan = lacunary_hits(seq, beta, delta, t_max, eps);
        row.lacunary_count = scan.hit_count;
        row.skipped = scan.skip_count;
        for (const HitRecord& rec : scan.records) {
            if (!rec.is_hit) continue;
            TranslatedHit hit;
            hit.t = static_cast<long>(rec.index.get_si());
            hit.n = seq.term(hit.t);
            hit.product = alpha_leg[static_cast<std::size_t>(hit.t)] * rec.lhs;
            hit.slack_threshold = rec.threshold * mpq_class(8);
            hit.direct_threshold = multiplicative_threshold(hit.n, eps, 128);
            hit.chain_certified = hit.product.certainly_less(hit.slack_threshold);
            hit.direct_hit = hit.product.certainly_less(hit.direct_threshold);
            if (hit.chain_certified) ++row.translated_count;
            if (hit.direct_hit) ++row.direct_count;
            row.hits.push_back(std::move(hit));
        }
        rep.rows[static_cast<std::size_t>(i)] = std::move(row);
    });
    return rep;
}

std::string ExperimentConfig::to_json() const {
    nlohmann::ordered_json j;
    j["spec_version"] = 1;
    j["kind"] = kind;
    nlohmann::ordered_json p = nlohmann::ordered_json::object();
    for (const auto& [key, value] : params) p[key] = value;
    j["params"] = std::move(p);
    return j.dump();
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgumentError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("spec_version") || !j["spec_version"].is_number_integer() ||
        j["spec_version"].get<long>() != 1)
        throw InvalidArgumentError("config must carry \"spec_version\":1");
    if (!j.contains("kind") || !j["kind"].is_string())
        throw InvalidArgumentError("config must name an experiment kind");
    ExperimentConfig cfg;
    cfg.kind = j["kind"].get<std::string>();
    if (j.contains("params")) {
        if (!j["params"].is_object())
            throw InvalidArgumentError("config params must be an object of strings");
        for (const auto& [key, value] : j["params"].items()) {
            if (!value.is_string())
                throw InvalidArgumentError("config param \"" + key + "\" must be a string");
            cfg.params[key] = value.get<std::string>();
        }
    }
    return cfg;
}

}  // namespace modone

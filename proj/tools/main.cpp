// Command-line front end: every subcommand parses flags into a flat
// string-to-string parameter map, and the same handlers serve both direct
// invocations and --config replays, so an archived config byte-reproduces
// the run.  Summaries go to stdout as single-line JSON; bulk artifacts go
// to --out as CSV/JSON files.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "modone/contfrac.hpp"
#include "modone/counting.hpp"
#include "modone/dispersion.hpp"
#include "modone/errors.hpp"
#include "modone/experiments.hpp"
#include "modone/kronecker.hpp"
#include "modone/measures.hpp"
#include "modone/numeric.hpp"
#include "modone/real_spec.hpp"

using namespace modone;
using ordered_json = nlohmann::ordered_json;

namespace {

// Parameter map with consumption tracking: a replayed config with a key no
// handler reads is rejected instead of silently ignored.
class Params {
public:
    explicit Params(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    std::string require(const std::string& key) {
        auto it = kv_.find(key);
        if (it == kv_.end())
            throw InvalidArgumentError("missing required parameter --" + key);
        used_.insert(key);
        return it->second;
    }

    std::optional<std::string> take(const std::string& key) {
        auto it = kv_.find(key);
        if (it == kv_.end()) return std::nullopt;
        used_.insert(key);
        return it->second;
    }

    std::string take_or(const std::string& key, const std::string& fallback) {
        return take(key).value_or(fallback);
    }

    void finish() const {
        for (const auto& [k, v] : kv_)
            if (!used_.count(k))
                throw InvalidArgumentError("unknown parameter --" + k);
    }

    const std::map<std::string, std::string>& raw() const { return kv_; }

private:
    std::map<std::string, std::string> kv_;
    std::set<std::string> used_;
};

long parse_long(const std::string& text, const std::string& name) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw InvalidArgumentError("--" + name + ": expected an integer, got '" + text + "'");
    }
}

std::uint64_t parse_seed(const std::string& text) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw InvalidArgumentError("--seed: expected a nonnegative integer, got '" + text + "'");
    }
}

double parse_double(const std::string& text, const std::string& name) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw InvalidArgumentError("--" + name + ": expected a number, got '" + text + "'");
    }
}

mpz_class parse_mpz(const std::string& text, const std::string& name) {
    try {
        return mpz_class(text);
    } catch (const std::exception&) {
        throw InvalidArgumentError("--" + name + ": expected an integer, got '" + text + "'");
    }
}

// Accepts "p/q" or a decimal literal; always exact.
mpq_class parse_mpq(const std::string& text, const std::string& name) {
    if (text.find('/') != std::string::npos) {
        try {
            mpq_class q(text);
            if (q.get_den() == 0) throw std::invalid_argument(text);
            q.canonicalize();
            return q;
        } catch (const std::exception&) {
            throw InvalidArgumentError("--" + name + ": malformed fraction '" + text + "'");
        }
    }
    try {
        return rational_from_decimal(text);
    } catch (const Error&) {
        throw InvalidArgumentError("--" + name + ": malformed number '" + text + "'");
    }
}

RealSpec parse_real(const std::string& text, const std::string& name) {
    try {
        return RealSpec::parse(text);
    } catch (const Error& e) {
        throw InvalidArgumentError("--" + name + ": " + std::string(e.what()));
    }
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        out.push_back(text.substr(start, pos == std::string::npos ? pos : pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

// Sequence grammar: "geometric:<base>[:<count>]" (count defaults to what the
// operation needs) or "terms:<a>,<b>,..." for explicit terms.
LacunarySequence parse_sequence(const std::string& spec, long needed, const std::string& name) {
    const std::size_t colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    if (colon == std::string::npos)
        throw InvalidArgumentError("--" + name + ": expected geometric:<base> or terms:<list>");
    const std::string rest = spec.substr(colon + 1);
    if (head == "geometric") {
        const std::vector<std::string> parts = split(rest, ':');
        if (parts.empty() || parts.size() > 2)
            throw InvalidArgumentError("--" + name + ": expected geometric:<base>[:<count>]");
        const mpz_class base = parse_mpz(parts[0], name);
        const long count = parts.size() == 2 ? parse_long(parts[1], name) : needed;
        return geometric_sequence(base, count);
    }
    if (head == "terms") {
        std::vector<mpz_class> terms;
        for (const std::string& tok : split(rest, ','))
            terms.push_back(parse_mpz(tok, name));
        return sequence_from_terms(std::move(terms));
    }
    throw InvalidArgumentError("--" + name + ": unknown sequence kind '" + head + "'");
}

// Terms needed so a geometric sequence reaches past n_max.
long count_to_reach(const mpz_class& base, long n_max) {
    mpz_class v = base;
    long k = 1;
    while (v <= n_max) {
        v *= base;
        ++k;
    }
    return k;
}

MeasureModel parse_measure(const std::string& text) {
    return MeasureModel::parse(text);  // throws InvalidArgumentError itself
}

mpq_class tolerance_from_bits(long bits) {
    if (bits < 1 || bits > 4096)
        throw InvalidArgumentError("--tol-bits must lie in [1, 4096]");
    mpz_class den = 1;
    den <<= static_cast<unsigned>(bits);
    return mpq_class(1, den);
}

void write_artifact(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgumentError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw InvalidArgumentError("write to '" + path + "' failed");
}

// Dispersion rendering: exact values as rational strings (so "1/4" stays
// "1/4"), enclosures as a lo/hi pair.
void emit_dispersion(ordered_json& j, const CertifiedInterval& d) {
    if (d.is_point()) {
        j["dispersion"] = d.lo.get_str();
    } else {
        j["dispersion_lo"] = compact_decimal_string(d.lo, 15);
        j["dispersion_hi"] = compact_decimal_string(d.hi, 15);
    }
}

void emit(const ordered_json& j) { std::cout << j.dump() << '\n'; }

// ---------------------------------------------------------------------------
// Subcommand handlers.  Each consumes a Params map and returns the exit code.

int run_cf(Params& p) {
    const RealSpec x = parse_real(p.require("x"), "x");
    const long depth = parse_long(p.take_or("depth", "32"), "depth");
    const CFExpansion cf = expand(x, depth);

    ordered_json j;
    j["x"] = x.to_string();
    j["a0"] = cf.a0.get_str();
    j["quotients"] = ordered_json::array();
    for (const auto& a : cf.quotients) j["quotients"].push_back(a.get_str());
    if (!cf.p.empty())
        j["convergent"] = cf.p.back().get_str() + "/" + cf.q.back().get_str();
    j["certified_depth"] = cf.certified_depth;
    j["terminated"] = cf.terminated;
    j["budget_truncated"] = cf.budget_truncated;

    if (const auto levy_at = p.take("levy")) {
        const long k = parse_long(*levy_at, "levy");
        const LevyReport levy = levy_exponent(cf, k);
        j["levy"] = {{"depth", levy.depth},
                     {"lambda_lo", compact_decimal_string(levy.lambda.lo, 15)},
                     {"lambda_hi", compact_decimal_string(levy.lambda.hi, 15)},
                     {"argmax_k", levy.argmax_k}};
    }
    if (const auto bound = p.take("bad-bound")) {
        const BadnessReport bad = is_bad_at_depth(cf, cf.certified_depth, parse_mpz(*bound, "bad-bound"));
        j["bounded"] = bad.bounded;
        j["bound_witness"] = bad.witness;
    }

    if (const auto out = p.take("out")) {
        std::string csv = "k,a_k,p_k,q_k\n0,," + cf.p[0].get_str() + "," + cf.q[0].get_str() + "\n";
        for (std::size_t i = 0; i < cf.quotients.size(); ++i)
            csv += std::to_string(i + 1) + "," + cf.quotients[i].get_str() + "," +
                   cf.p[i + 1].get_str() + "," + cf.q[i + 1].get_str() + "\n";
        write_artifact(*out + ".convergents.csv", csv);
        write_artifact(*out + ".json", j.dump() + "\n");
    }
    p.finish();
    emit(j);
    return 0;
}

int run_seq(Params& p) {
    const std::string mode = p.require("mode");
    ordered_json j;
    j["mode"] = mode;

    if (mode == "geometric" || mode == "terms") {
        LacunarySequence seq =
            mode == "geometric"
                ? geometric_sequence(parse_mpz(p.require("base"), "base"),
                                     parse_long(p.require("count"), "count"))
                : [&] {
                      std::vector<mpz_class> terms;
                      for (const std::string& tok : split(p.require("terms"), ','))
                          terms.push_back(parse_mpz(tok, "terms"));
                      return sequence_from_terms(std::move(terms));
                  }();
        j["count"] = seq.count();
        j["ratio"] = seq.ratio.get_num().get_str() + "/" + seq.ratio.get_den().get_str();
        j["first"] = seq.terms.front().get_str();
        j["last"] = seq.terms.back().get_str();
        if (const auto out = p.take("out")) {
            std::string csv = "t,term\n";
            for (long t = 1; t <= seq.count(); ++t)
                csv += std::to_string(t) + "," + seq.term(t).get_str() + "\n";
            write_artifact(*out + ".terms.csv", csv);
        }
        p.finish();
        emit(j);
        return 0;
    }

    if (mode == "inhom") {
        const RealSpec alpha = parse_real(p.require("alpha"), "alpha");
        const RealSpec gamma = parse_real(p.take_or("gamma", "0/1"), "gamma");
        const long t_max = parse_long(p.require("Tmax"), "Tmax");
        std::optional<mpq_class> lambda;
        if (const auto l = p.take("lambda")) lambda = parse_mpq(*l, "lambda");
        const mpq_class tol = tolerance_from_bits(parse_long(p.take_or("tol-bits", "64"), "tol-bits"));
        const InhomSequence inhom = build_inhom_sequence(alpha, gamma, t_max, lambda, tol);

        j["count"] = inhom.seq.count();
        j["witnesses"] = static_cast<long>(inhom.witnesses.size());
        j["lambda_lo"] = compact_decimal_string(inhom.levy.lambda.lo, 15);
        j["lambda_hi"] = compact_decimal_string(inhom.levy.lambda.hi, 15);
        j["first"] = inhom.seq.terms.front().get_str();
        j["last"] = inhom.seq.terms.back().get_str();
        if (const auto out = p.take("out")) {
            std::string csv = "t,n,scaled_dist_lo,scaled_dist_hi,window_lo\n";
            for (const InhomWitness& w : inhom.witnesses)
                csv += std::to_string(w.t) + "," + w.n.get_str() + "," +
                       compact_decimal_string(w.scaled_dist.lo, 18) + "," +
                       compact_decimal_string(w.scaled_dist.hi, 18) + "," +
                       w.window_lo.get_str() + "\n";
            write_artifact(*out + ".witnesses.csv", csv);
        }
        p.finish();
        emit(j);
        return 0;
    }
    throw InvalidArgumentError("seq: unknown mode '" + mode + "' (geometric | terms | inhom)");
}

int run_orbit(Params& p) {
    const RealSpec alpha = parse_real(p.require("alpha"), "alpha");
    const long n = parse_long(p.require("N"), "N");
    const mpq_class tol = tolerance_from_bits(parse_long(p.take_or("tol-bits", "64"), "tol-bits"));
    const ThreeDistanceReport report = three_distance_check(alpha, n, tol);

    ordered_json j;
    j["alpha"] = alpha.to_string();
    j["N"] = n;
    j["distinct_gaps"] = report.distinct_count;
    j["at_most_three"] = report.at_most_three;
    j["largest_is_sum"] = report.largest_is_sum;
    j["exact"] = report.exact;
    emit_dispersion(j, report.gaps.dispersion);

    if (const auto out = p.take("out")) {
        write_artifact(*out + ".points.csv", orbit_block(alpha, n, tol).to_csv());
        std::string csv = "length_lo,length_hi,multiplicity\n";
        for (const auto& g : report.gaps.distinct)
            csv += compact_decimal_string(g.length.lo, 18) + "," +
                   compact_decimal_string(g.length.hi, 18) + "," +
                   std::to_string(g.multiplicity) + "\n";
        write_artifact(*out + ".gaps.csv", csv);
    }
    p.finish();
    emit(j);
    return 0;
}

int run_disp(Params& p) {
    ordered_json j;
    if (const auto points = p.take("points")) {
        std::vector<mpq_class> values;
        std::vector<long> origins;
        for (const std::string& tok : split(*points, ',')) {
            values.push_back(parse_mpq(tok, "points"));
            origins.push_back(static_cast<long>(origins.size()) + 1);
        }
        const PointBlock block = PointBlock::from_rationals(values, origins, tolerance_from_bits(64));
        emit_dispersion(j, dispersion(block));
        p.finish();
        emit(j);
        return 0;
    }

    const long t = parse_long(p.require("T"), "T");
    const LacunarySequence seq = parse_sequence(p.require("seq"), 2 * t, "seq");
    const RealSpec beta = parse_real(p.require("beta"), "beta");
    const CertifiedInterval d =
        p.has("tol-bits")
            ? block_dispersion(seq, beta, t,
                               tolerance_from_bits(parse_long(p.require("tol-bits"), "tol-bits")))
            : block_dispersion(seq, beta, t);
    j["T"] = t;
    j["beta"] = beta.to_string();
    emit_dispersion(j, d);
    p.finish();
    emit(j);
    return 0;
}

int run_count(Params& p) {
    const std::string mode = p.require("mode");
    const long budget =
        parse_long(p.take_or("budget", std::to_string(kDefaultEnumerationBudget)), "budget");

    if (mode == "rz1") {
        BoxFormInstance inst;
        for (const std::string& tok : split(p.require("A"), ','))
            inst.coefficients.push_back(parse_mpz(tok, "A"));
        inst.shift = parse_mpz(p.take_or("b", "0"), "b");
        inst.radius = parse_long(p.require("Y"), "Y");
        const CountReport report = box_form_count(inst, budget);
        if (const auto out = p.take("out")) write_artifact(*out + ".json", report.to_json() + "\n");
        p.finish();
        ordered_json j;
        j["count"] = report.count.fits_slong_p() ? ordered_json(report.count.get_si())
                                                 : ordered_json(report.count.get_str());
        j["bound"] = compact_decimal_string(report.bound.lo, 12);
        j["passes"] = report.passes;
        emit(j);
        return report.passes ? 0 : 1;
    }

    if (mode == "lacunary") {
        LacunaryFormInstance inst;
        inst.s = parse_long(p.require("s"), "s");
        inst.Y = parse_long(p.require("Y"), "Y");
        inst.Z = parse_long(p.require("Z"), "Z");
        inst.K = parse_mpz(p.require("K"), "K");
        inst.sequence = parse_sequence(p.require("seq"), 2 * inst.Z, "seq");
        const CountReport report = lacunary_form_count(inst, budget);
        if (const auto out = p.take("out")) write_artifact(*out + ".json", report.to_json() + "\n");
        p.finish();
        ordered_json j;
        j["count"] = report.count.fits_slong_p() ? ordered_json(report.count.get_si())
                                                 : ordered_json(report.count.get_str());
        j["bound"] = compact_decimal_string(report.bound.lo, 12);
        j["passes"] = report.passes;
        emit(j);
        return report.passes ? 0 : 1;
    }

    if (mode == "moment") {
        const long s = parse_long(p.require("s"), "s");
        const long big_l = parse_long(p.require("L"), "L");
        const long t = parse_long(p.require("T"), "T");
        const LacunarySequence seq = parse_sequence(p.require("seq"), 2 * t, "seq");
        ordered_json j;
        j["s"] = s;
        j["L"] = big_l;
        j["T"] = t;
        if (const auto k = p.take("k")) {
            const mpz_class count = moment_count(seq, s, big_l, t, parse_mpz(*k, "k"), budget);
            j["k"] = *k;
            j["count"] = count.get_str();
            p.finish();
            emit(j);
            return 0;
        }
        const std::map<mpz_class, mpz_class> hist = moment_histogram(seq, s, big_l, t, budget);
        mpz_class total = 0;
        for (const auto& [k, c] : hist) total += c;
        const mpz_class expected = pow_z(2 * big_l, 2 * s) * pow_z(t, 2 * s);
        j["keys"] = static_cast<long>(hist.size());
        j["total"] = total.get_str();
        j["identity_holds"] = (total == expected);
        if (const auto out = p.take("out")) {
            std::string csv = "k,count\n";
            for (const auto& [k, c] : hist) csv += k.get_str() + "," + c.get_str() + "\n";
            write_artifact(*out + ".hist.csv", csv);
        }
        p.finish();
        emit(j);
        return 0;
    }
    throw InvalidArgumentError("count: unknown mode '" + mode + "' (rz1 | lacunary | moment)");
}

int run_survey(Params& p) {
    const long t = parse_long(p.require("T"), "T");
    const LacunarySequence seq = parse_sequence(p.require("seq"), 2 * t, "seq");
    const MeasureModel measure = parse_measure(p.take_or("measure", "lebesgue"));
    const double eps = parse_double(p.require("eps"), "eps");
    const long samples = parse_long(p.require("samples"), "samples");
    const std::uint64_t seed = parse_seed(p.take_or("seed", "1"));
    const DispersionSurvey survey = concentration_survey(seq, measure, t, eps, samples, seed);
    if (const auto out = p.take("out")) {
        write_artifact(*out + ".csv", survey.to_csv());
        write_artifact(*out + ".json", survey.to_json() + "\n");
    }
    p.finish();
    std::cout << survey.to_json() << '\n';
    return 0;
}

int run_measure(Params& p) {
    const MeasureModel measure = parse_measure(p.require("measure"));
    std::vector<mpz_class> freqs;
    for (const std::string& tok : split(p.require("freqs"), ','))
        freqs.push_back(parse_mpz(tok, "freqs"));
    const long depth = parse_long(p.take_or("depth", "40"), "depth");
    const DecayProfile profile = decay_profile(measure, freqs, depth);
    if (const auto out = p.take("out")) write_artifact(*out + ".csv", profile.to_csv());
    p.finish();
    std::cout << profile.to_json() << '\n';
    return 0;
}

ordered_json scan_summary(const std::string& mode, const HitScan& scan) {
    ordered_json j;
    j["mode"] = mode;
    j["scanned"] = scan.scanned;
    j["hits"] = scan.hit_count;
    j["skipped"] = scan.skip_count;
    j["hit_indices"] = ordered_json::array();
    for (const mpz_class& n : scan.hit_indices()) j["hit_indices"].push_back(n.get_str());
    j["trend"] = ordered_json::array();
    for (const TrendPoint& tp : scan.trend)
        j["trend"].push_back({{"checkpoint", tp.checkpoint.get_str()},
                              {"cumulative_hits", tp.cumulative_hits},
                              {"normalizer", tp.normalizer},
                              {"ratio", tp.ratio}});
    return j;
}

int run_hits(Params& p) {
    const std::string mode = p.require("mode");
    const mpq_class eps = parse_mpq(p.require("eps"), "eps");
    HitScan scan;

    if (mode == "multiplicative") {
        const RealSpec alpha = parse_real(p.require("alpha"), "alpha");
        const RealSpec gamma = parse_real(p.take_or("gamma", "0/1"), "gamma");
        const RealSpec beta = parse_real(p.require("beta"), "beta");
        const RealSpec delta = parse_real(p.take_or("delta", "0/1"), "delta");
        const long n_max = parse_long(p.require("Nmax"), "Nmax");
        if (const auto within = p.take("seq")) {
            long needed = n_max;
            const std::size_t colon = within->find(':');
            if (colon != std::string::npos && within->substr(0, colon) == "geometric") {
                const std::vector<std::string> parts = split(within->substr(colon + 1), ':');
                if (parts.size() == 1) needed = count_to_reach(parse_mpz(parts[0], "seq"), n_max);
            }
            scan = multiplicative_hits(alpha, gamma, beta, delta, n_max, eps,
                                       parse_sequence(*within, needed, "seq"));
        } else {
            scan = multiplicative_hits(alpha, gamma, beta, delta, n_max, eps);
        }
    } else if (mode == "lacunary") {
        const long t_max = parse_long(p.require("Tmax"), "Tmax");
        const LacunarySequence seq = parse_sequence(p.require("seq"), t_max, "seq");
        const RealSpec beta = parse_real(p.require("beta"), "beta");
        const RealSpec delta = parse_real(p.take_or("delta", "0/1"), "delta");
        scan = lacunary_hits(seq, beta, delta, t_max, eps);
    } else {
        throw InvalidArgumentError("hits: unknown mode '" + mode +
                                   "' (multiplicative | lacunary)");
    }

    if (const auto out = p.take("out")) {
        write_artifact(*out + ".hits.csv", scan.hits_csv());
        write_artifact(*out + ".trend.csv", scan.trend_csv());
    }
    p.finish();
    emit(scan_summary(mode, scan));
    return 0;
}

int run_pipeline(Params& p) {
    const RealSpec alpha = parse_real(p.require("alpha"), "alpha");
    const RealSpec gamma = parse_real(p.take_or("gamma", "0/1"), "gamma");
    const RealSpec delta = parse_real(p.take_or("delta", "0/1"), "delta");
    const MeasureModel measure = parse_measure(p.take_or("measure", "lebesgue"));
    const mpq_class eps = parse_mpq(p.require("eps"), "eps");
    const long t_max = parse_long(p.require("Tmax"), "Tmax");
    const long samples = parse_long(p.require("samples"), "samples");
    const std::uint64_t seed = parse_seed(p.take_or("seed", "1"));

    const PipelineReport report =
        pipeline_theorem_cor2(alpha, gamma, delta, measure, eps, t_max, samples, seed);
    if (const auto out = p.take("out")) {
        write_artifact(*out + ".json", report.to_json() + "\n");
        write_artifact(*out + ".hits.csv", report.hits_csv());
    }
    p.finish();
    std::cout << report.to_json() << '\n';
    return 0;
}

int dispatch(const std::string& kind, Params& params) {
    if (kind == "cf") return run_cf(params);
    if (kind == "seq") return run_seq(params);
    if (kind == "orbit") return run_orbit(params);
    if (kind == "disp") return run_disp(params);
    if (kind == "count") return run_count(params);
    if (kind == "survey") return run_survey(params);
    if (kind == "measure") return run_measure(params);
    if (kind == "hits") return run_hits(params);
    if (kind == "pipeline") return run_pipeline(params);
    throw InvalidArgumentError("unknown experiment kind '" + kind + "'");
}

struct FlagSpec {
    const char* name;
    const char* help;
};

struct SubSpec {
    const char* name;
    const char* help;
    const char* mode_help;  // nullptr when the subcommand has no mode
    std::vector<FlagSpec> flags;
};

const std::vector<SubSpec>& subcommands() {
    static const std::vector<SubSpec> subs = {
        {"cf",
         "continued fraction expansion with certified convergents",
         nullptr,
         {{"x", "number to expand (p/q, quad:a,b,d,c, or decimal[@digits])"},
          {"depth", "partial quotients to compute (default 32)"},
          {"levy", "also report the continuant growth exponent at this depth"},
          {"bad-bound", "check all quotients against this bound"},
          {"out", "artifact path prefix"}}},
        {"seq",
         "build a lacunary or witness sequence",
         "geometric | terms | inhom",
         {{"base", "geometric base (mode geometric)"},
          {"count", "number of terms (mode geometric)"},
          {"terms", "comma-separated terms (mode terms)"},
          {"alpha", "rotation number (mode inhom)"},
          {"gamma", "target shift, default 0 (mode inhom)"},
          {"Tmax", "witness count (mode inhom)"},
          {"lambda", "growth exponent override p/q (mode inhom)"},
          {"tol-bits", "certification tolerance 2^-bits (default 64)"},
          {"out", "artifact path prefix"}}},
        {"orbit",
         "rotation orbit gap census and three-distance check",
         nullptr,
         {{"alpha", "rotation number"},
          {"N", "orbit length"},
          {"tol-bits", "certification tolerance 2^-bits (default 64)"},
          {"out", "artifact path prefix"}}},
        {"disp",
         "dispersion of an explicit point list or a sequence block",
         nullptr,
         {{"points", "comma-separated points in [0,1)"},
          {"seq", "sequence spec (block mode)"},
          {"beta", "rotation number (block mode)"},
          {"T", "block start: points n_t*beta for T < t <= 2T"},
          {"tol-bits", "certification tolerance for decimal beta"}}},
        {"count",
         "exact linear-form counts against certified bounds",
         "rz1 | lacunary | moment",
         {{"A", "comma-separated nonincreasing coefficients (mode rz1)"},
          {"b", "shift, default 0 (mode rz1)"},
          {"Y", "coefficient radius (modes rz1, lacunary)"},
          {"seq", "sequence spec (modes lacunary, moment)"},
          {"s", "number of form terms (modes lacunary, moment)"},
          {"Z", "index window start (mode lacunary)"},
          {"K", "target interval radius (mode lacunary)"},
          {"L", "coefficient radius (mode moment)"},
          {"T", "index window start (mode moment)"},
          {"k", "single target value instead of the full histogram"},
          {"budget", "enumeration budget (default 1e9)"},
          {"out", "artifact path prefix"}}},
        {"survey",
         "window-count concentration survey over sampled rotations",
         nullptr,
         {{"seq", "sequence spec"},
          {"measure", "sampling measure (default lebesgue)"},
          {"T", "block start"},
          {"eps", "smoothing exponent parameter"},
          {"samples", "number of sampled rotations"},
          {"seed", "RNG seed (default 1)"},
          {"out", "artifact path prefix"}}},
        {"measure",
         "Fourier decay profile of a measure",
         nullptr,
         {{"measure", "measure spec (lebesgue | cantor:... | atomic:...)"},
          {"freqs", "comma-separated integer frequencies"},
          {"depth", "self-similarity unrolling depth (default 40)"},
          {"out", "artifact path prefix"}}},
        {"hits",
         "certified scans of approximation-rate hits",
         "multiplicative | lacunary",
         {{"alpha", "first rotation (mode multiplicative)"},
          {"gamma", "first shift, default 0 (mode multiplicative)"},
          {"beta", "second rotation"},
          {"delta", "second shift, default 0"},
          {"Nmax", "scan end (mode multiplicative)"},
          {"Tmax", "scan end (mode lacunary)"},
          {"seq", "sequence spec (lacunary; optional restriction otherwise)"},
          {"eps", "threshold exponent parameter"},
          {"out", "artifact path prefix"}}},
        {"pipeline",
         "witness construction, sampled scans, and certified translation",
         nullptr,
         {{"alpha", "rotation defining the witness sequence"},
          {"gamma", "witness shift, default 0"},
          {"delta", "scan shift, default 0"},
          {"measure", "sampling measure (default lebesgue)"},
          {"eps", "threshold exponent parameter"},
          {"Tmax", "witness count"},
          {"samples", "number of sampled rotations"},
          {"seed", "RNG seed (default 1)"},
          {"out", "artifact path prefix"}}},
    };
    return subs;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"certified experiments with rotation orbits, lacunary sequences, and\n"
                 "inhomogeneous approximation rates"};
    app.require_subcommand(0, 1);

    std::string config_path;
    app.add_option("--config", config_path, "replay an archived experiment config");

    std::string kind;
    std::map<std::string, std::string> kv;
    std::string save_config;

    for (const SubSpec& spec : subcommands()) {
        CLI::App* sub = app.add_subcommand(spec.name, spec.help);
        if (spec.mode_help)
            sub->add_option_function<std::string>(
                   "mode", [&kv](const std::string& v) { kv["mode"] = v; }, spec.mode_help)
                ->required();
        for (const FlagSpec& flag : spec.flags)
            sub->add_option_function<std::string>(
                std::string("--") + flag.name,
                [&kv, key = std::string(flag.name)](const std::string& v) { kv[key] = v; },
                flag.help);
        sub->add_option("--save-config", save_config, "archive this invocation as JSON");
        sub->callback([&kind, name = std::string(spec.name)] { kind = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (!config_path.empty()) {
            if (!kind.empty())
                throw InvalidArgumentError("--config replaces the subcommand; give one or the other");
            std::ifstream in(config_path, std::ios::binary);
            if (!in) throw InvalidArgumentError("cannot read config '" + config_path + "'");
            std::string text((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
            const ExperimentConfig cfg = ExperimentConfig::from_json(text);
            Params params(cfg.params);
            return dispatch(cfg.kind, params);
        }
        if (kind.empty()) {
            std::cerr << app.help();
            return 2;
        }
        if (!save_config.empty()) {
            ExperimentConfig cfg;
            cfg.kind = kind;
            cfg.params = kv;
            write_artifact(save_config, cfg.to_json() + "\n");
        }
        Params params(kv);
        return dispatch(kind, params);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        switch (e.kind()) {
            case ErrorKind::invalid_argument:
            case ErrorKind::not_lacunary:
                return 2;
            case ErrorKind::insufficient_precision:
                return 3;
            case ErrorKind::budget_exceeded:
                return 4;
            case ErrorKind::construction_failed:
                return 1;
        }
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

#include "modone/dispersion.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include "modone/errors.hpp"
#include "modone/numeric.hpp"
#include "modone/realnum.hpp"

namespace modone {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Tail terms of the truncation envelope end once they are certifiably dead:
// below this absolute size or indistinguishable from quadrature noise.
constexpr double kTailCutoff = 1e-12;

// Compensated accumulator; the order-independence of survey merges and the
// additivity contract both lean on sums being exact to the last few ulps.
struct Neumaier {
    double sum = 0;
    double comp = 0;

    void add(double v) {
        const double t = sum + v;
        comp += std::fabs(sum) >= std::fabs(v) ? (sum - t) + v : (v - t) + sum;
        sum = t;
    }

    double total() const { return sum + comp; }
};

double bare_bump(double x) {
    const double s = 1 - x * x;
    return s > 0 ? std::exp(-1 / s) : 0;
}

// Trapezoid sum of scale*bare_bump(x)*cos(2 pi xi x) over [-1,1] with n
// panels.  The integrand and all its derivatives vanish at the endpoints.
double trapezoid(double xi, long n, double scale) {
    Neumaier acc;
    const double h = 2.0 / static_cast<double>(n);
    for (long k = 1; k < n; ++k) {
        const double x = -1 + static_cast<double>(k) * h;
        const double w = bare_bump(x);
        if (w != 0) acc.add(w * std::cos(kTwoPi * xi * x));
    }
    return scale * h * acc.total();
}

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

void check_block_shape(const LacunarySequence& seq, long T) {
    if (T < 1) throw InvalidArgumentError("block start T must be >= 1");
    if (seq.count() < 2 * T)
        throw InvalidArgumentError("sequence too short: block (T, 2T] needs " +
                                   std::to_string(2 * T) + " terms");
}

void check_shift(const mpq_class& shift) {
    if (shift < 0 || shift >= 1) throw InvalidArgumentError("shift must lie in [0,1)");
}

// frac(n_t beta) for t in (T, 2T], reduced mod 1 before any rounding so the
// phase is insensitive to the size of n_t.
std::vector<double> base_phases(const LacunarySequence& seq, const RealSpec& beta, long T) {
    check_block_shape(seq, T);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(T));
    if (beta.is_rational()) {
        const mpq_class b = beta.rational_value();
        for (long t = T + 1; t <= 2 * T; ++t) out.push_back(frac_q(b * seq.term(t)).get_d());
        return out;
    }
    const RealSpec zero = RealSpec::rational(mpq_class(0));
    for (long t = T + 1; t <= 2 * T; ++t) {
        const mpq_class resolution(1, 1 << 30);
        double phase = 0;
        bool certified = false;
        for (unsigned bits = 64; bits <= 4096; bits *= 2) {
            const CertifiedInterval raw = linear_form_enclosure(seq.term(t), beta, zero, bits);
            const FracImage img = frac_mod1_image(raw);
            if (img.value.width() <= resolution) {
                phase = img.value.midpoint().get_d();
                certified = true;
                break;
            }
        }
        if (!certified)
            throw InsufficientPrecisionError("orbit phase for term " + std::to_string(t) +
                                             " is not certified at the available precision");
        phase -= std::floor(phase);
        out.push_back(phase);
    }
    return out;
}

// Window sum for one t: all integer translates of x landing inside (-h, h).
double window_mass(const BumpFunction& bump, double x, double h) {
    double total = 0;
    const long lo = static_cast<long>(std::ceil(-h - x));
    const long hi = static_cast<long>(std::floor(h - x));
    for (long u = lo; u <= hi; ++u) total += bump((x + u) / h);
    return total;
}

SmoothedCount count_from_phases(const std::vector<double>& phases, double shift, long T,
                                double h) {
    const BumpFunction& bump = standard_bump();
    SmoothedCount result;
    Neumaier acc;
    double best = 0;
    for (std::size_t i = 0; i < phases.size(); ++i) {
        const double mass = window_mass(bump, phases[i] - shift, h);
        if (mass > 0) {
            ++result.support;
            if (mass > best) {
                best = mass;
                result.witness_t = T + 1 + static_cast<long>(i);
            }
        }
        acc.add(mass);
    }
    result.value = acc.total();
    return result;
}

// Harmonic table and tail envelope for one (T, epsilon); shared across every
// beta evaluated at those parameters.
class TruncationKernel {
public:
    TruncationKernel(long T, double epsilon) : T_(T), scales_(smoothing_scales(T, epsilon)) {
        const BumpFunction& bump = standard_bump();
        const double d = scales_.d_value;
        const double step = d / static_cast<double>(T);
        harmonics_ = scales_.l_value >= 1 ? static_cast<long>(std::floor(scales_.l_value)) : 0;

        // Quadrature radii of the kept harmonics and the bump's mass defect
        // both shift C_0 + D, so they belong in the envelope too.
        Neumaier env;
        env.add(d * bump.mass_error());
        for (long l = 1; l <= harmonics_; ++l) {
            const FourierCoeff w = bump.transform(step * static_cast<double>(l));
            table_.push_back(w.re);
            env.add(2 * d * w.err);
        }
        // The transform falls off faster than any power, so the computed
        // terms drop ~15 orders before hitting double's noise floor; past
        // that point individual terms cannot be certified and the remainder
        // is charged as one flat block.
        long quiet = 0;
        for (long l = harmonics_ + 1; quiet < 3 && l <= harmonics_ + 100000; ++l) {
            const FourierCoeff w = bump.transform(step * static_cast<double>(l));
            env.add(2 * d * (std::fabs(w.re) + w.err));
            const bool dead =
                std::fabs(w.re) <= 4 * w.err || d * (std::fabs(w.re) + w.err) < kTailCutoff;
            quiet = dead ? quiet + 1 : 0;
        }
        env.add(1e-9);
        envelope_ = env.total();
    }

    const SmoothingScales& scales() const { return scales_; }
    long harmonics() const { return harmonics_; }
    double envelope() const { return envelope_; }

    double evaluate(const std::vector<double>& phases, double shift) const {
        Neumaier outer;
        for (long l = 1; l <= harmonics_; ++l) {
            Neumaier inner;
            for (const double x : phases)
                inner.add(std::cos(kTwoPi * static_cast<double>(l) * (x - shift)));
            outer.add(table_[static_cast<std::size_t>(l - 1)] * 2 * inner.total());
        }
        return scales_.d_value / static_cast<double>(T_) * outer.total();
    }

private:
    long T_;
    SmoothingScales scales_;
    long harmonics_ = 0;
    std::vector<double> table_;
    double envelope_ = 0;
};

std::string describe(const RealSpec& beta) {
    if (beta.is_rational()) return beta.rational_value().get_str();
    return decimal_string(beta.enclose(64).midpoint(), 24);
}

// Shortest round-trip decimal, shared by the CSV and JSON writers.
std::string num(double v) { return nlohmann::json(v).dump(); }

}  // namespace

BumpFunction::BumpFunction() {
    double prev = trapezoid(0, 64, 1);
    double cur = prev;
    for (long n = 128; n <= (1 << 20); n *= 2) {
        cur = trapezoid(0, n, 1);
        if (std::fabs(cur - prev) < 1e-13 && n >= 512) break;
        prev = cur;
    }
    c0_ = 1 / cur;
    mass_err_ = (std::fabs(cur - prev) + 1e-15) * c0_;
}

double BumpFunction::operator()(double x) const { return c0_ * bare_bump(x); }

FourierCoeff BumpFunction::transform(double xi) const {
    const double a = std::fabs(xi);
    long n = 64;
    while (static_cast<double>(n) < 8 * (a + 1) && n < (1 << 22)) n *= 2;
    double prev = trapezoid(xi, n, c0_);
    double cur = prev;
    for (n *= 2; n <= (1 << 22); n *= 2) {
        cur = trapezoid(xi, n, c0_);
        if (std::fabs(cur - prev) < 1e-12) break;
        prev = cur;
    }
    return {cur, 0, std::fabs(cur - prev) + 1e-15};
}

const BumpFunction& standard_bump() {
    static const BumpFunction bump;
    return bump;
}

double bump_eval(double x) { return standard_bump()(x); }

FourierCoeff bump_fourier(double xi) { return standard_bump().transform(xi); }

SmoothingScales smoothing_scales(long T, double epsilon) {
    if (T < 2) throw InvalidArgumentError("scales need T >= 2");
    if (!(epsilon > 0)) throw InvalidArgumentError("epsilon must be positive");
    const double logT = std::log(static_cast<double>(T));
    return {std::pow(logT, 3 + 2 * epsilon),
            static_cast<double>(T) / std::pow(logT, 3 + epsilon)};
}

CertifiedInterval block_dispersion(const LacunarySequence& seq, const RealSpec& beta, long T,
                                   const mpq_class& tolerance) {
    check_block_shape(seq, T);
    std::vector<mpz_class> multipliers;
    std::vector<long> origins;
    multipliers.reserve(static_cast<std::size_t>(T));
    for (long t = T + 1; t <= 2 * T; ++t) {
        multipliers.push_back(seq.term(t));
        origins.push_back(t);
    }
    return dispersion(block_from_multiples(multipliers, origins, beta, tolerance));
}

CertifiedInterval block_dispersion(const LacunarySequence& seq, const RealSpec& beta, long T) {
    static const mpq_class kDefaultTolerance(1, 1000000000000L);
    return block_dispersion(seq, beta, T, kDefaultTolerance);
}

SmoothedCount smoothed_count(const LacunarySequence& seq, const RealSpec& beta,
                             const mpq_class& shift, long T, double epsilon) {
    check_shift(shift);
    const SmoothingScales scales = smoothing_scales(T, epsilon);
    const std::vector<double> phases = base_phases(seq, beta, T);
    return count_from_phases(phases, shift.get_d(), T, scales.d_value / static_cast<double>(T));
}

TruncationReport truncated_count(const LacunarySequence& seq, const RealSpec& beta,
                                 const mpq_class& shift, long T, double epsilon) {
    check_shift(shift);
    const TruncationKernel kernel(T, epsilon);
    const std::vector<double> phases = base_phases(seq, beta, T);
    TruncationReport report;
    report.c0_value = kernel.evaluate(phases, shift.get_d());
    report.envelope = kernel.envelope();
    report.d_value = kernel.scales().d_value;
    report.l_value = kernel.scales().l_value;
    report.harmonics = kernel.harmonics();
    return report;
}

MomentReport moment_estimate(const LacunarySequence& seq, const MeasureModel& sampler, long s,
                             long T, double epsilon, const mpq_class& shift, long sample_count,
                             std::uint64_t seed) {
    if (s < 1) throw InvalidArgumentError("moment power s must be >= 1");
    if (sample_count < 1) throw InvalidArgumentError("sample count must be >= 1");
    check_shift(shift);
    check_block_shape(seq, T);
    const TruncationKernel kernel(T, epsilon);
    const std::vector<RealSpec> draws = sample(sampler, seed, sample_count);
    const double shift_d = shift.get_d();

    std::vector<double> values(static_cast<std::size_t>(sample_count), 0);
    const bool heavy =
        sample_count >= 4 &&
        sample_count * T * (kernel.harmonics() + 4) >= (1L << 18);
    parallel_rows(sample_count, heavy, [&](long i) {
        const std::vector<double> phases = base_phases(seq, draws[static_cast<std::size_t>(i)], T);
        const double c0 = kernel.evaluate(phases, shift_d);
        values[static_cast<std::size_t>(i)] =
            std::pow(std::fabs(c0), 2 * static_cast<double>(s));
    });

    Neumaier mean_acc;
    for (const double v : values) mean_acc.add(v);
    const double mean = mean_acc.total() / static_cast<double>(sample_count);
    double varsum = 0;
    for (const double v : values) varsum += (v - mean) * (v - mean);
    MomentReport report;
    report.mean = mean;
    report.std_error =
        sample_count > 1
            ? std::sqrt(varsum / (static_cast<double>(sample_count) *
                                  static_cast<double>(sample_count - 1)))
            : 0;
    report.samples = sample_count;
    report.power = s;
    report.d_value = kernel.scales().d_value;
    return report;
}

double DispersionSurvey::covered_fraction() const {
    if (samples.empty()) return 0;
    long n = 0;
    for (const SurveySample& s : samples) n += s.covered ? 1 : 0;
    return static_cast<double>(n) / static_cast<double>(samples.size());
}

double DispersionSurvey::deficiency_fraction() const {
    if (samples.empty()) return 0;
    long n = 0;
    for (const SurveySample& s : samples) n += s.deficient() ? 1 : 0;
    return static_cast<double>(n) / static_cast<double>(samples.size());
}

double DispersionSurvey::outlier_fraction() const {
    if (samples.empty()) return 0;
    long n = 0;
    for (const SurveySample& s : samples) n += s.bc_outlier ? 1 : 0;
    return static_cast<double>(n) / static_cast<double>(samples.size());
}

std::string DispersionSurvey::to_csv() const {
    std::ostringstream out;
    out << "beta_id,beta_repr,T,epsilon,disp_lo,disp_hi,min_CT_over_cover,deficiency_flag,"
           "bc_outlier_flag\n";
    for (const SurveySample& s : samples)
        out << s.beta_id << ',' << s.beta_repr << ',' << T << ',' << num(epsilon) << ','
            << compact_decimal_string(s.block_disp.lo, 18) << ','
            << compact_decimal_string(s.block_disp.hi, 18) << ',' << num(s.min_ct) << ','
            << (s.deficient() ? 1 : 0) << ',' << (s.bc_outlier ? 1 : 0) << '\n';
    return out.str();
}

std::string DispersionSurvey::to_json() const {
    nlohmann::ordered_json j;
    j["T"] = T;
    j["epsilon"] = epsilon;
    j["d_value"] = d_value;
    j["l_value"] = l_value;
    j["cover"] = cover_size;
    j["samples"] = samples.size();
    j["covered_fraction"] = covered_fraction();
    j["deficiency_fraction"] = deficiency_fraction();
    j["outlier_fraction"] = outlier_fraction();
    return j.dump();
}

DispersionSurvey concentration_survey(const LacunarySequence& seq, const MeasureModel& sampler,
                                      long T, double epsilon, long sample_count,
                                      std::uint64_t seed) {
    if (sample_count < 1) throw InvalidArgumentError("sample count must be >= 1");
    check_block_shape(seq, T);
    const SmoothingScales scales = smoothing_scales(T, epsilon);
    const double h = scales.d_value / static_cast<double>(T);
    const long cover = std::max<long>(
        1, static_cast<long>(std::ceil(static_cast<double>(T) / scales.d_value)));

    DispersionSurvey survey;
    survey.T = T;
    survey.epsilon = epsilon;
    survey.d_value = scales.d_value;
    survey.l_value = scales.l_value;
    survey.cover_size = cover;
    survey.samples.resize(static_cast<std::size_t>(sample_count));

    const std::vector<RealSpec> draws = sample(sampler, seed, sample_count);
    const bool heavy = sample_count >= 4 && sample_count * T * (cover + 2) >= (1L << 18);
    parallel_rows(sample_count, heavy, [&](long i) {
        const RealSpec& beta = draws[static_cast<std::size_t>(i)];
        SurveySample row;
        row.beta_id = i;
        row.beta_repr = describe(beta);
        row.block_disp = block_dispersion(seq, beta, T);
        const std::vector<double> phases = base_phases(seq, beta, T);
        bool first = true;
        for (long j = 0; j < cover; ++j) {
            const double c = static_cast<double>(j) / static_cast<double>(cover);
            const double ct = count_from_phases(phases, c, T, h).value;
            row.min_ct = first ? ct : std::min(row.min_ct, ct);
            row.max_ct = first ? ct : std::max(row.max_ct, ct);
            first = false;
            if (std::fabs(ct - scales.d_value) > scales.d_value / 2) row.bc_outlier = true;
        }
        row.covered = row.min_ct > 0;
        survey.samples[static_cast<std::size_t>(i)] = std::move(row);
    });
    return survey;
}

}  // namespace modone

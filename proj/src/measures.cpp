#include "modone/measures.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "modone/errors.hpp"
#include "modone/numeric.hpp"

namespace modone {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Rounding cushion added to every floating-point coefficient.
constexpr double kFloatSlop = 1e-12;

// e(-turns) with the phase reduced mod 1 exactly before rounding, so the
// result is insensitive to the magnitude of the numerator.
std::complex<double> unit_phase(const mpq_class& turns) {
    const double t = frac_q(turns).get_d();
    return {std::cos(kTwoPi * t), -std::sin(kTwoPi * t)};
}

mpq_class parse_number(const std::string& token) {
    if (token.find('/') != std::string::npos) {
        mpq_class q;
        if (mpq_set_str(q.get_mpq_t(), token.c_str(), 10) != 0)
            throw InvalidArgumentError("malformed fraction '" + token + "'");
        q.canonicalize();
        return q;
    }
    return rational_from_decimal(token);
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = text.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(text.substr(start));
            return parts;
        }
        parts.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

// Shortest round-trip decimal form, shared with the JSON summary so the CSV
// and JSON artifacts agree byte for byte.
std::string num(double v) { return nlohmann::json(v).dump(); }

}  // namespace

MeasureModel MeasureModel::lebesgue() { return MeasureModel(Kind::Lebesgue); }

MeasureModel MeasureModel::cantor_ifs(long base, std::vector<long> digits) {
    if (base < 3) throw InvalidArgumentError("Cantor base must be >= 3");
    if (digits.size() < 2) throw InvalidArgumentError("Cantor needs at least 2 digits");
    std::sort(digits.begin(), digits.end());
    if (std::adjacent_find(digits.begin(), digits.end()) != digits.end())
        throw InvalidArgumentError("Cantor digits must be distinct");
    if (digits.front() < 0 || digits.back() >= base)
        throw InvalidArgumentError("Cantor digits must lie in [0, base)");
    MeasureModel m(Kind::Cantor);
    m.base_ = base;
    m.digits_ = std::move(digits);
    return m;
}

MeasureModel MeasureModel::atomic(std::vector<Atom> atoms) {
    if (atoms.empty()) throw InvalidArgumentError("atomic measure needs at least one atom");
    mpq_class total = 0;
    for (const Atom& a : atoms) {
        if (a.point < 0 || a.point > 1)
            throw InvalidArgumentError("atom points must lie in [0,1]");
        if (a.weight < 0) throw InvalidArgumentError("atom weights must be nonnegative");
        total += a.weight;
    }
    if (total != 1) throw InvalidArgumentError("atom weights must sum to 1");
    MeasureModel m(Kind::Atomic);
    m.atoms_ = std::move(atoms);
    return m;
}

MeasureModel MeasureModel::parse(const std::string& text) {
    if (text == "lebesgue") return lebesgue();
    if (text.rfind("cantor:", 0) == 0) {
        long base = 0;
        std::vector<long> digits;
        bool saw_base = false, saw_digits = false;
        for (const std::string& field : split(text.substr(7), ',')) {
            if (field.rfind("m=", 0) == 0) {
                base = std::stol(field.substr(2));
                saw_base = true;
            } else if (field.rfind("digits=", 0) == 0) {
                for (const std::string& d : split(field.substr(7), ';'))
                    digits.push_back(std::stol(d));
                saw_digits = true;
            } else {
                throw InvalidArgumentError("unknown cantor field '" + field + "'");
            }
        }
        if (!saw_base || !saw_digits)
            throw InvalidArgumentError("cantor spec needs m= and digits=");
        return cantor_ifs(base, std::move(digits));
    }
    if (text.rfind("atomic:", 0) == 0) {
        std::vector<Atom> atoms;
        for (const std::string& pair : split(text.substr(7), ',')) {
            const std::vector<std::string> parts = split(pair, ':');
            if (parts.size() != 2)
                throw InvalidArgumentError("atom must be point:weight, got '" + pair + "'");
            atoms.push_back({parse_number(parts[0]), parse_number(parts[1])});
        }
        return atomic(std::move(atoms));
    }
    throw InvalidArgumentError("unknown measure '" + text + "'");
}

long MeasureModel::base() const {
    if (kind_ != Kind::Cantor) throw InvalidArgumentError("base() needs a Cantor model");
    return base_;
}

const std::vector<long>& MeasureModel::digits() const {
    if (kind_ != Kind::Cantor) throw InvalidArgumentError("digits() needs a Cantor model");
    return digits_;
}

const std::vector<MeasureModel::Atom>& MeasureModel::atoms() const {
    if (kind_ != Kind::Atomic) throw InvalidArgumentError("atoms() needs an atomic model");
    return atoms_;
}

std::string MeasureModel::to_string() const {
    switch (kind_) {
        case Kind::Lebesgue:
            return "lebesgue";
        case Kind::Cantor: {
            std::ostringstream out;
            out << "cantor:m=" << base_ << ",digits=";
            for (std::size_t i = 0; i < digits_.size(); ++i) {
                if (i) out << ';';
                out << digits_[i];
            }
            return out.str();
        }
        case Kind::Atomic: {
            std::ostringstream out;
            out << "atomic:";
            for (std::size_t i = 0; i < atoms_.size(); ++i) {
                if (i) out << ',';
                out << atoms_[i].point.get_str() << ':' << atoms_[i].weight.get_str();
            }
            return out.str();
        }
    }
    throw InvalidArgumentError("corrupt measure model");
}

double FourierCoeff::magnitude() const { return std::hypot(re, im); }

FourierCoeff fourier_coeff(const MeasureModel& m, const mpz_class& xi, long depth) {
    if (xi == 0) return {1, 0, 0};  // total mass, exact for every model
    switch (m.kind()) {
        case MeasureModel::Kind::Lebesgue:
            return {0, 0, 0};  // orthogonality at nonzero integer frequencies
        case MeasureModel::Kind::Atomic: {
            std::complex<double> acc = 0;
            for (const MeasureModel::Atom& a : m.atoms())
                acc += a.weight.get_d() * unit_phase(xi * a.point);
            return {acc.real(), acc.imag(), kFloatSlop};
        }
        case MeasureModel::Kind::Cantor: {
            if (depth < 1) throw InvalidArgumentError("Cantor coefficient needs depth >= 1");
            // Self-similarity turns the integral into a product over digit
            // scales; each factor has modulus <= 1, and replacing the final
            // coefficient by 1 costs at most 2*pi*|xi|/base^depth.
            const double inv = 1.0 / static_cast<double>(m.digits().size());
            std::complex<double> acc = 1;
            mpz_class scale = m.base();
            for (long j = 1; j <= depth; ++j) {
                std::complex<double> factor = 0;
                for (long d : m.digits()) factor += unit_phase(mpq_class(xi * d, scale));
                acc *= inv * factor;
                scale *= m.base();
            }
            const double tail =
                kTwoPi * mpq_class(abs(xi) * m.base(), scale).get_d();  // scale = base^(depth+1)
            return {acc.real(), acc.imag(), tail + kFloatSlop};
        }
    }
    throw InvalidArgumentError("corrupt measure model");
}

namespace {

RealSpec draw_lebesgue(std::uint64_t seed, std::uint64_t index) {
    static const mpz_class kScale = pow10_z(64);
    mpz_class k = SplitMix64::substream(seed, index).below(kScale);
    mpq_class v(std::move(k), kScale);
    v.canonicalize();
    return RealSpec::rational(v);
}

RealSpec draw_cantor(const MeasureModel& m, std::uint64_t seed, std::uint64_t index,
                     long depth) {
    SplitMix64 rng = SplitMix64::substream(seed, index);
    const mpz_class choices = static_cast<long>(m.digits().size());
    mpz_class numerator = 0;
    mpz_class den = 1;
    for (long j = 0; j < depth; ++j) {
        const long pick = static_cast<long>(rng.below(choices).get_si());
        numerator = numerator * m.base() + m.digits()[static_cast<std::size_t>(pick)];
        den *= m.base();
    }
    mpq_class v(std::move(numerator), std::move(den));
    v.canonicalize();
    return RealSpec::rational(v);
}

RealSpec draw_atomic(const MeasureModel& m, const std::vector<mpq_class>& cumulative,
                     std::uint64_t seed, std::uint64_t index) {
    static const mpz_class kScale = mpz_class(1) << 64;
    const mpz_class u = SplitMix64::substream(seed, index).below(kScale);
    for (std::size_t j = 0; j < cumulative.size(); ++j) {
        // u/2^64 < cumulative[j], compared in integers
        if (u * cumulative[j].get_den() < cumulative[j].get_num() * kScale)
            return RealSpec::rational(m.atoms()[j].point);
    }
    return RealSpec::rational(m.atoms().back().point);  // unreachable: cumulative ends at 1
}

}  // namespace

std::vector<RealSpec> sample(const MeasureModel& m, std::uint64_t seed, long count) {
    if (count < 1) throw InvalidArgumentError("sample count must be >= 1");
    std::vector<RealSpec> out;
    out.reserve(static_cast<std::size_t>(count));
    switch (m.kind()) {
        case MeasureModel::Kind::Lebesgue:
            for (long i = 0; i < count; ++i)
                out.push_back(draw_lebesgue(seed, static_cast<std::uint64_t>(i)));
            break;
        case MeasureModel::Kind::Cantor: {
            // Smallest digit count certifying the truncated expansion to 1e-30.
            long depth = 0;
            mpz_class power = 1;
            const mpz_class target = pow10_z(30);
            while (power < target) {
                power *= m.base();
                ++depth;
            }
            for (long i = 0; i < count; ++i)
                out.push_back(draw_cantor(m, seed, static_cast<std::uint64_t>(i), depth));
            break;
        }
        case MeasureModel::Kind::Atomic: {
            std::vector<mpq_class> cumulative;
            mpq_class run = 0;
            for (const MeasureModel::Atom& a : m.atoms()) {
                run += a.weight;
                cumulative.push_back(run);
            }
            for (long i = 0; i < count; ++i)
                out.push_back(draw_atomic(m, cumulative, seed, static_cast<std::uint64_t>(i)));
            break;
        }
    }
    return out;
}

DecayProfile decay_profile(const MeasureModel& m, const std::vector<mpz_class>& frequencies,
                           long depth) {
    if (frequencies.empty()) throw InvalidArgumentError("decay profile needs frequencies");
    DecayProfile profile;
    profile.frequencies = frequencies;
    profile.coefficients.reserve(frequencies.size());
    for (const mpz_class& xi : frequencies)
        profile.coefficients.push_back(fourier_coeff(m, xi, depth));

    std::vector<double> xs, ys;
    bool any_alive = false;
    for (std::size_t i = 0; i < frequencies.size(); ++i) {
        const FourierCoeff& c = profile.coefficients[i];
        if (c.magnitude() <= 10 * c.err) continue;
        any_alive = true;
        if (mpz_cmpabs_ui(frequencies[i].get_mpz_t(), 2) < 0) continue;
        xs.push_back(-std::log1p(mpz_class(abs(frequencies[i])).get_d()));
        ys.push_back(std::log(c.magnitude()));
    }
    profile.usable = static_cast<long>(xs.size());
    if (!any_alive) {
        profile.note = "all coefficients vanish";
        return profile;
    }
    if (xs.size() < 2) {
        profile.note = "fewer than two usable frequencies";
        return profile;
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0) {
        profile.note = "frequencies do not separate";
        return profile;
    }
    const double slope = sxy / sxx;
    double rss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double fit = my + slope * (xs[i] - mx);
        rss += (ys[i] - fit) * (ys[i] - fit);
    }
    profile.tau_hat = slope;
    profile.residual = std::sqrt(rss / static_cast<double>(xs.size()));
    return profile;
}

std::string DecayProfile::to_csv() const {
    std::ostringstream out;
    out << "xi,mag,err\n";
    for (std::size_t i = 0; i < frequencies.size(); ++i)
        out << frequencies[i].get_str() << ',' << num(coefficients[i].magnitude()) << ','
            << num(coefficients[i].err) << '\n';
    return out.str();
}

std::string DecayProfile::to_json() const {
    nlohmann::ordered_json j;
    j["frequencies"] = frequencies.size();
    j["usable"] = usable;
    if (tau_hat)
        j["tau_hat"] = *tau_hat;
    else
        j["tau_hat"] = nullptr;
    j["residual"] = residual;
    j["note"] = note;
    return j.dump();
}

}  // namespace modone

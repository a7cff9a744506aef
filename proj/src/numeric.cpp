#include "modone/numeric.hpp"

#include <cctype>
#include <cstddef>

#include "modone/errors.hpp"

namespace modone {

mpz_class floor_q(const mpq_class& x) {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return r;
}

mpz_class ceil_q(const mpq_class& x) {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return r;
}

mpz_class round_q(const mpq_class& x) {
    return floor_q(x + mpq_class(1, 2));
}

bool integer_in(const mpq_class& lo, const mpq_class& hi) {
    return floor_q(hi) >= ceil_q(lo);
}

bool half_integer_in(const mpq_class& lo, const mpq_class& hi) {
    // z + 1/2 in [lo, hi]  <=>  z in [lo - 1/2, hi - 1/2] for integer z.
    const mpq_class half(1, 2);
    return integer_in(lo - half, hi - half);
}

mpz_class pow10_z(unsigned long n) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, n);
    return r;
}

mpz_class pow_z(const mpz_class& base, unsigned long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

mpq_class norm_dist_q(const mpq_class& x) {
    mpq_class d = x - round_q(x);
    return d < 0 ? mpq_class(-d) : d;
}

mpq_class frac_q(const mpq_class& x) {
    return x - floor_q(x);
}

mpq_class rational_from_decimal(const std::string& text) {
    if (text.empty()) throw InvalidArgumentError("empty decimal literal");
    std::size_t i = 0;
    bool negative = false;
    if (text[i] == '+' || text[i] == '-') {
        negative = text[i] == '-';
        ++i;
    }
    std::string digits;
    long scale = 0;  // value = digits * 10^{-scale} before exponent
    bool seen_digit = false, seen_dot = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            digits += c;
            if (seen_dot) ++scale;
            seen_digit = true;
        } else if (c == '.' && !seen_dot) {
            seen_dot = true;
        } else if (c == 'e' || c == 'E') {
            break;
        } else {
            throw InvalidArgumentError("malformed decimal literal: " + text);
        }
    }
    if (!seen_digit) throw InvalidArgumentError("malformed decimal literal: " + text);
    long exponent = 0;
    if (i < text.size()) {  // at 'e' / 'E'
        ++i;
        bool exp_neg = false;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            exp_neg = text[i] == '-';
            ++i;
        }
        if (i == text.size()) throw InvalidArgumentError("malformed exponent: " + text);
        for (; i < text.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(text[i])))
                throw InvalidArgumentError("malformed exponent: " + text);
            exponent = exponent * 10 + (text[i] - '0');
            if (exponent > 1000000) throw InvalidArgumentError("exponent out of range: " + text);
        }
        if (exp_neg) exponent = -exponent;
    }
    mpz_class mantissa(digits, 10);
    if (negative) mantissa = -mantissa;
    long net = exponent - scale;
    mpq_class value(mantissa);
    if (net > 0) {
        value *= pow10_z(static_cast<unsigned long>(net));
    } else if (net < 0) {
        value /= pow10_z(static_cast<unsigned long>(-net));
    }
    value.canonicalize();
    return value;
}

std::string decimal_string(const mpq_class& x, unsigned digits) {
    const bool negative = x < 0;
    mpq_class mag = negative ? mpq_class(-x) : x;
    // scaled = round(mag * 10^digits), ties away from zero.
    mpz_class scale = pow10_z(digits);
    mpq_class scaled_q = mag * scale;
    mpz_class whole = floor_q(scaled_q);
    if (scaled_q - whole >= mpq_class(1, 2)) ++whole;
    std::string raw = whole.get_str();
    if (raw.size() <= digits) raw.insert(0, digits + 1 - raw.size(), '0');
    std::string out;
    if (negative && whole != 0) out += '-';
    out += raw.substr(0, raw.size() - digits);
    if (digits > 0) {
        out += '.';
        out += raw.substr(raw.size() - digits);
    }
    return out;
}

std::string compact_decimal_string(const mpq_class& x, unsigned digits) {
    std::string s = decimal_string(x, digits);
    if (s.find('.') == std::string::npos) return s;
    std::size_t last = s.find_last_not_of('0');
    if (s[last] == '.') --last;
    return s.substr(0, last + 1);
}

unsigned fractional_digit_count(const std::string& text) {
    std::size_t dot = text.find('.');
    if (dot == std::string::npos) return 0;
    unsigned n = 0;
    for (std::size_t i = dot + 1; i < text.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) break;
        ++n;
    }
    return n;
}

mpz_class SplitMix64::below(const mpz_class& bound) {
    if (bound <= 0) throw InvalidArgumentError("rejection bound must be positive");
    const std::size_t bits = mpz_sizeinbase(bound.get_mpz_t(), 2);
    const std::size_t words = (bits + 63) / 64 + 1;  // extra word keeps rejection rate low
    // draw = random in [0, 2^(64*words)); accept while draw < bound * floor(2^B / bound)
    mpz_class space = 1;
    mpz_mul_2exp(space.get_mpz_t(), space.get_mpz_t(), 64 * words);
    mpz_class limit = (space / bound) * bound;
    for (;;) {
        mpz_class draw = 0;
        for (std::size_t w = 0; w < words; ++w) {
            const std::uint64_t word = next();
            mpz_mul_2exp(draw.get_mpz_t(), draw.get_mpz_t(), 64);
            mpz_class chunk;
            mpz_import(chunk.get_mpz_t(), 1, 1, sizeof(word), 0, 0, &word);
            draw += chunk;
        }
        if (draw < limit) return draw % bound;
    }
}

}  // namespace modone

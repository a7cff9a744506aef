#include "modone/realnum.hpp"

#include <algorithm>
#include <utility>

#include "modone/errors.hpp"
#include "modone/numeric.hpp"

namespace modone {

namespace {

constexpr unsigned kMaxBits = 1u << 22;

// Smallest achievable width of an enclosure of n*alpha - gamma; zero when
// both inputs are exact.
mpq_class width_floor(const mpz_class& n, const RealSpec& alpha, const RealSpec& gamma) {
    mpz_class mag = n < 0 ? mpz_class(-n) : n;
    return alpha.best_width() * mag + gamma.best_width();
}

}  // namespace

unsigned working_bits(const mpq_class& tol, const mpz_class& n) {
    if (tol <= 0) throw InvalidArgumentError("tolerance must be positive");
    const std::size_t den_bits = mpz_sizeinbase(tol.get_den().get_mpz_t(), 2);
    const std::size_t num_bits = mpz_sizeinbase(tol.get_num().get_mpz_t(), 2);
    const std::size_t tol_bits = den_bits > num_bits ? den_bits - num_bits + 1 : 1;
    const std::size_t n_bits = n == 0 ? 1 : mpz_sizeinbase(n.get_mpz_t(), 2);
    return static_cast<unsigned>(std::min<std::size_t>(tol_bits + n_bits + 64, kMaxBits));
}

std::optional<QuadVal> lift_to_field(const RealSpec& x, const mpz_class& d) {
    if (x.is_rational()) return QuadVal::from_rational(x.rational_value(), d);
    if (!x.is_quadratic()) return std::nullopt;
    QuadVal v = x.quad_value();
    if (v.d() == d) return v;
    // sqrt(d') = (g/d) sqrt(d) when d*d' = g^2, so
    // (a + b sqrt(d'))/c = (a*d + b*g*sqrt(d))/(c*d).
    const mpz_class product = v.d() * d;
    if (!mpz_perfect_square_p(product.get_mpz_t())) return std::nullopt;
    mpz_class g;
    mpz_sqrt(g.get_mpz_t(), product.get_mpz_t());
    return QuadVal(v.a() * d, v.b() * g, d, v.c() * d);
}

std::optional<QuadVal> linear_form_exact(const mpz_class& n, const RealSpec& alpha,
                                         const RealSpec& gamma) {
    if (!alpha.is_exact() || !gamma.is_exact()) return std::nullopt;
    mpz_class field = 0;
    if (alpha.is_quadratic()) field = alpha.quad_value().d();
    if (gamma.is_quadratic()) {
        if (field == 0) {
            field = gamma.quad_value().d();
        }
    }
    if (field == 0) {
        // Both rational; embed over sqrt(2) arbitrarily (b stays zero).
        field = 2;
    }
    const auto a = lift_to_field(alpha, field);
    const auto g = lift_to_field(gamma, field);
    if (!a || !g) return std::nullopt;
    return (*a) * n - (*g);
}

CertifiedInterval linear_form_enclosure(const mpz_class& n, const RealSpec& alpha,
                                        const RealSpec& gamma, unsigned bits) {
    // Scale the component precision so the multiplication by n does not eat
    // the requested accuracy.
    const std::size_t n_bits = n == 0 ? 1 : mpz_sizeinbase(n.get_mpz_t(), 2);
    const unsigned inner = static_cast<unsigned>(
        std::min<std::size_t>(bits + n_bits + 4, kMaxBits));
    return alpha.enclose(inner) * mpq_class(n) - gamma.enclose(inner);
}

CertifiedInterval dist_to_nearest_int(const RealSpec& x, const mpq_class& tol) {
    return linear_form_dist(1, x, RealSpec::rational(0), tol);
}

FracResult frac_mod1(const RealSpec& x, const mpq_class& tol) {
    if (tol <= 0) throw InvalidArgumentError("tolerance must be positive");
    if (x.is_rational()) {
        return {CertifiedInterval::point(frac_q(x.rational_value())), false};
    }
    if (x.is_quadratic()) {
        const QuadVal f = x.quad_value().frac();
        unsigned bits = working_bits(tol, 1);
        for (;;) {
            CertifiedInterval out = f.enclose(bits);
            if (out.width() <= tol) return {std::move(out), false};
            if (bits >= kMaxBits)
                throw InsufficientPrecisionError("fractional part did not converge");
            bits *= 2;
        }
    }
    // Decimal: one shot at the budget width, wrap resolved downward.
    const CertifiedInterval raw = x.enclose(0);
    if (raw.width() > tol)
        throw InsufficientPrecisionError(
            "decimal budget cannot certify the fractional part to tolerance");
    const FracImage img = frac_mod1_image(raw);
    return {img.value, img.wrapped};
}

CertifiedInterval linear_form_dist(const mpz_class& n, const RealSpec& alpha,
                                   const RealSpec& gamma, const mpq_class& tol) {
    if (tol <= 0) throw InvalidArgumentError("tolerance must be positive");
    if (n == 0) throw InvalidArgumentError("linear form needs n != 0");

    // Exact rational path: a single exact distance.
    if (alpha.is_rational() && gamma.is_rational()) {
        return CertifiedInterval::point(
            norm_dist_q(alpha.rational_value() * n - gamma.rational_value()));
    }

    // One quadratic field: the distance itself is an exact field element.
    if (const auto exact = linear_form_exact(n, alpha, gamma)) {
        const QuadVal dist = exact->dist_to_nearest_int();
        if (dist.is_rational()) return CertifiedInterval::point(dist.rational_value());
        unsigned bits = working_bits(tol, 1);
        for (;;) {
            CertifiedInterval out = dist.enclose(bits);
            if (out.width() <= tol) return out;
            if (bits >= kMaxBits)
                throw InsufficientPrecisionError("field-exact distance did not converge");
            bits *= 2;
        }
    }

    // Generic interval refinement; bail out once the inputs' budgets are
    // provably unable to reach the tolerance.
    const mpq_class floor_width = width_floor(n, alpha, gamma);
    unsigned bits = working_bits(tol, n);
    for (;;) {
        const CertifiedInterval form = linear_form_enclosure(n, alpha, gamma, bits);
        CertifiedInterval image = form.dist_to_nearest_int_image();
        if (image.width() <= tol) return image;
        const bool at_budget = floor_width > 0 && form.width() <= floor_width * mpq_class(33, 32);
        if (at_budget || bits >= kMaxBits)
            throw InsufficientPrecisionError(
                "inputs cannot certify the distance to the requested tolerance");
        bits *= 2;
    }
}

}  // namespace modone

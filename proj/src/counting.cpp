#include "modone/counting.hpp"

#include <json.hpp>

#include <algorithm>
#include <thread>
#include <vector>

#include "modone/errors.hpp"
#include "modone/numeric.hpp"
#include "modone/transcend.hpp"

namespace modone {

namespace {

// Endpoints raised exactly; powering preserves lowest terms.
mpq_class pow_q(const mpq_class& x, unsigned long e) {
    mpz_class num, den;
    mpz_pow_ui(num.get_mpz_t(), x.get_num().get_mpz_t(), e);
    mpz_pow_ui(den.get_mpz_t(), x.get_den().get_mpz_t(), e);
    return {num, den};
}

CertifiedInterval interval_pow(const CertifiedInterval& x, unsigned long e) {
    if (e == 0) return CertifiedInterval::point(1);
    return {pow_q(x.lo, e), pow_q(x.hi, e)};
}

// sqrt of a positive interval with rational outward bounds, via
// sqrt(p/q) = sqrt(p*q)/q.
CertifiedInterval interval_sqrt(const CertifiedInterval& x, unsigned bits) {
    auto bound = [bits](const mpq_class& v, bool upper) -> mpq_class {
        const mpz_class pq = v.get_num() * v.get_den();
        const CertifiedInterval root = sqrt_enclosure(pq, bits);
        return (upper ? root.hi : root.lo) / v.get_den();
    };
    return {bound(x.lo, false), bound(x.hi, true)};
}

// Sum of shard(i) over i in [0, n).  Shards run concurrently when the work
// is heavy; the reduction is an integer sum, so the partition cannot change
// the result.
template <typename Shard>
mpz_class sharded_total(long n, bool heavy, const Shard& shard) {
    unsigned workers = 1;
    if (heavy && n > 1) {
        const unsigned hw = std::thread::hardware_concurrency();
        workers = std::min<unsigned>(hw == 0 ? 1 : hw, 8);
        workers = std::min<unsigned>(workers, static_cast<unsigned>(n));
    }
    if (workers <= 1) {
        mpz_class total = 0;
        for (long i = 0; i < n; ++i) total += shard(i);
        return total;
    }
    std::vector<mpz_class> partial(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            mpz_class acc = 0;
            for (long i = static_cast<long>(w); i < n; i += workers) acc += shard(i);
            partial[w] = acc;
        });
    }
    for (auto& th : pool) th.join();
    mpz_class total = 0;
    for (const auto& p : partial) total += p;
    return total;
}

void check_lemma_shape(long s, long Y, long Z) {
    if (s < 1) throw InvalidArgumentError("form length s must be >= 1");
    // The stated regime is Y >= 2; Y = 1 restricts to a subset of those
    // tuples, so the same bound applies and is accepted.
    if (Y < 1) throw InvalidArgumentError("coefficient radius Y must be >= 1");
    if (Z < Y) throw InvalidArgumentError("index scale Z must be >= Y");
    if (Z < 2) throw InvalidArgumentError("index scale Z must be >= 2");
    if (4 * s > Z) throw InvalidArgumentError("need 4s <= Z");
}

}  // namespace

std::string CountReport::to_json() const {
    nlohmann::ordered_json j;
    if (count.fits_slong_p())
        j["count"] = count.get_si();
    else
        j["count"] = count.get_str();
    j["bound"] = compact_decimal_string(bound.lo, 12);
    j["passes"] = passes;
    if (space.fits_slong_p())
        j["space"] = space.get_si();
    else
        j["space"] = space.get_str();
    return j.dump();
}

CountReport box_form_count(const BoxFormInstance& inst, long budget) {
    const long s = static_cast<long>(inst.coefficients.size());
    if (s < 1) throw InvalidArgumentError("need at least one coefficient");
    for (long j = 0; j < s; ++j) {
        if (inst.coefficients[j] < 1)
            throw InvalidArgumentError("coefficients must be positive");
        if (j > 0 && inst.coefficients[j] > inst.coefficients[j - 1])
            throw InvalidArgumentError("coefficients must be nonincreasing");
    }
    if (inst.radius < 1) throw InvalidArgumentError("box radius must be >= 1");
    if (budget < 1) throw InvalidArgumentError("budget must be positive");

    const long Y = inst.radius;
    const mpz_class space = pow_z(2 * Y + 1, static_cast<unsigned long>(s));
    if (space * s > budget)
        throw BudgetExceededError("box enumeration needs " + mpz_class(space * s).get_str() +
                                  " steps; budget is " + std::to_string(budget));

    const mpz_class& A1 = inst.coefficients.front();
    const auto shard = [&](long i) -> mpz_class {
        // One shard fixes y_1 and walks the rest as an odometer, updating
        // the form value incrementally.
        mpz_class sum = inst.shift + inst.coefficients[0] * (i - Y);
        for (long j = 1; j < s; ++j) sum -= inst.coefficients[j] * Y;
        if (s == 1) return mpz_cmpabs(sum.get_mpz_t(), A1.get_mpz_t()) <= 0 ? 1 : 0;
        std::vector<long> pos(s - 1, -Y);
        mpz_class cnt = 0;
        for (;;) {
            if (mpz_cmpabs(sum.get_mpz_t(), A1.get_mpz_t()) <= 0) ++cnt;
            long j = s - 2;
            while (j >= 0) {
                if (pos[j] < Y) {
                    ++pos[j];
                    sum += inst.coefficients[j + 1];
                    break;
                }
                sum -= inst.coefficients[j + 1] * (2 * Y);
                pos[j] = -Y;
                --j;
            }
            if (j < 0) break;
        }
        return cnt;
    };

    CountReport rep;
    rep.count = sharded_total(2 * Y + 1, space > (1 << 22), shard);
    rep.space = space;
    rep.bound = CertifiedInterval::point(
        mpq_class(pow_z(8, static_cast<unsigned long>(s)) *
                  pow_z(Y, static_cast<unsigned long>(s - 1))));
    rep.passes = mpq_class(rep.count) <= rep.bound.lo;
    return rep;
}

FormBoundReport lacunary_form_bound(long s, long Y, long Z, const mpq_class& ratio,
                                    unsigned bits) {
    check_lemma_shape(s, Y, Z);
    if (ratio <= 1 || ratio > 2)
        throw InvalidArgumentError("certified ratio must lie in (1, 2]");
    if (bits < 16 || bits > (1u << 22))
        throw InvalidArgumentError("working precision out of range");

    const auto us = static_cast<unsigned long>(s);
    const CertifiedInterval ln_z = ln_enclosure(mpz_class(Z), bits);
    const CertifiedInterval ln_r = ln_enclosure(ratio, bits);

    FormBoundReport rep;
    rep.growth_constant = {mpq_class(480) / ln_r.hi, mpq_class(480) / ln_r.lo};

    const CertifiedInterval base = ln_z * mpq_class(mpz_class(Y) * Z);
    rep.sqrt_branch = (s % 2 == 0) ? interval_pow(base, us / 2)
                                   : interval_sqrt(interval_pow(base, us), bits);
    rep.linear_branch = interval_pow(ln_z, us - 1) * mpq_class(pow_z(Y, us - 1) * Z);

    const CertifiedInterval max_branch{std::max(rep.sqrt_branch.lo, rep.linear_branch.lo),
                                       std::max(rep.sqrt_branch.hi, rep.linear_branch.hi)};
    mpz_class fact;
    mpz_fac_ui(fact.get_mpz_t(), us);
    rep.value = interval_pow(rep.growth_constant, us) * max_branch * mpq_class(fact);
    return rep;
}

CountReport lacunary_form_count(const LacunaryFormInstance& inst, long budget) {
    check_lemma_shape(inst.s, inst.Y, inst.Z);
    if (budget < 1) throw InvalidArgumentError("budget must be positive");
    if (inst.sequence.count() < 2 * inst.Z)
        throw InvalidArgumentError("sequence too short for the index range (Z, 2Z]");
    if (inst.sequence.ratio <= 1)
        throw InvalidArgumentError("sequence carries no certified growth ratio");
    if (inst.K < 0) throw InvalidArgumentError("K must be nonnegative");
    if (8 * inst.K > inst.sequence.term(inst.Z))
        throw InvalidArgumentError("K must be at most a(Z)/8");

    const long s = inst.s, Y = inst.Y, Z = inst.Z;
    const long picks = 2 * Y * Z;
    const mpz_class space = pow_z(picks, static_cast<unsigned long>(s));
    if (space > budget)
        throw BudgetExceededError("form enumeration needs " + space.get_str() +
                                  " tuples; budget is " + std::to_string(budget));

    std::vector<mpz_class> values;
    values.reserve(picks);
    for (long y = -Y; y <= Y; ++y) {
        if (y == 0) continue;
        for (long z = Z + 1; z <= 2 * Z; ++z) values.push_back(y * inst.sequence.term(z));
    }

    const mpz_class& K = inst.K;
    const auto shard = [&](long i) -> mpz_class {
        mpz_class sum = values[i];
        if (s == 1) return mpz_cmpabs(sum.get_mpz_t(), K.get_mpz_t()) <= 0 ? 1 : 0;
        for (long j = 1; j < s; ++j) sum += values[0];
        std::vector<long> pos(s - 1, 0);
        mpz_class cnt = 0;
        for (;;) {
            if (mpz_cmpabs(sum.get_mpz_t(), K.get_mpz_t()) <= 0) ++cnt;
            long j = s - 2;
            while (j >= 0) {
                if (pos[j] + 1 < picks) {
                    sum += values[pos[j] + 1] - values[pos[j]];
                    ++pos[j];
                    break;
                }
                sum += values[0] - values[pos[j]];
                pos[j] = 0;
                --j;
            }
            if (j < 0) break;
        }
        return cnt;
    };

    CountReport rep;
    rep.count = sharded_total(picks, space > (1 << 22), shard);
    rep.space = space;

    // A ratio above 2 still certifies growth by 2, which is the regime the
    // explicit bound is stated for.
    const mpq_class r_eff = std::min(inst.sequence.ratio, mpq_class(2));
    unsigned bits = 128;
    FormBoundReport bound = lacunary_form_bound(s, Y, Z, r_eff, bits);
    const mpq_class count_q(rep.count);
    for (;;) {
        if (count_q <= bound.value.lo) {
            rep.passes = true;
            break;
        }
        if (count_q > bound.value.hi || bits >= 4096) {
            rep.passes = false;
            break;
        }
        bits *= 2;
        bound = lacunary_form_bound(s, Y, Z, r_eff, bits);
    }
    rep.bound = bound.value;
    return rep;
}

namespace {

struct MomentSetup {
    std::vector<mpz_class> values;  // l * n_t over 0 < |l| <= L, T < t <= 2T
    long dims;                      // 2s
    long s;
    mpz_class space;
};

MomentSetup moment_setup(const LacunarySequence& seq, long s, long L, long T, long budget) {
    if (s < 1) throw InvalidArgumentError("moment order s must be >= 1");
    if (L < 1) throw InvalidArgumentError("coefficient radius L must be >= 1");
    if (T < 1) throw InvalidArgumentError("index scale T must be >= 1");
    if (budget < 1) throw InvalidArgumentError("budget must be positive");
    if (seq.count() < 2 * T)
        throw InvalidArgumentError("sequence too short for the index range (T, 2T]");

    MomentSetup set;
    set.s = s;
    set.dims = 2 * s;
    const long picks = 2 * L * T;
    set.space = pow_z(picks, static_cast<unsigned long>(set.dims));
    if (set.space > budget)
        throw BudgetExceededError("moment enumeration needs " + set.space.get_str() +
                                  " tuples; budget is " + std::to_string(budget));
    set.values.reserve(picks);
    for (long l = -L; l <= L; ++l) {
        if (l == 0) continue;
        for (long t = T + 1; t <= 2 * T; ++t) set.values.push_back(l * seq.term(t));
    }
    return set;
}

// Walks dims coordinates over `values`, first `s` with weight +1 and the
// rest with weight -1, calling visit(sum) for every tuple.  The first
// coordinate is fixed by the caller.
template <typename Visit>
void walk_signed_sums(const MomentSetup& set, long first, const Visit& visit) {
    const long picks = static_cast<long>(set.values.size());
    mpz_class sum = set.values[first];
    const long inner = set.dims - 1;
    if (inner == 0) {
        visit(sum);
        return;
    }
    // Inner coordinate j (0-based) carries sign +1 while j < s-1, else -1.
    auto sign_of = [&](long j) { return j < set.s - 1 ? 1 : -1; };
    std::vector<long> pos(inner, 0);
    for (long j = 0; j < inner; ++j)
        sum += sign_of(j) > 0 ? set.values[0] : -set.values[0];
    for (;;) {
        visit(sum);
        long j = inner - 1;
        while (j >= 0) {
            if (pos[j] + 1 < picks) {
                const mpz_class delta = set.values[pos[j] + 1] - set.values[pos[j]];
                sum += sign_of(j) > 0 ? delta : -delta;
                ++pos[j];
                break;
            }
            const mpz_class reset = set.values[0] - set.values[pos[j]];
            sum += sign_of(j) > 0 ? reset : -reset;
            pos[j] = 0;
            --j;
        }
        if (j < 0) break;
    }
}

}  // namespace

mpz_class moment_count(const LacunarySequence& seq, long s, long L, long T, const mpz_class& k,
                       long budget) {
    const MomentSetup set = moment_setup(seq, s, L, T, budget);
    const long picks = static_cast<long>(set.values.size());
    const auto shard = [&](long i) -> mpz_class {
        mpz_class cnt = 0;
        walk_signed_sums(set, i, [&](const mpz_class& sum) {
            if (sum == k) ++cnt;
        });
        return cnt;
    };
    return sharded_total(picks, set.space > (1 << 22), shard);
}

std::map<mpz_class, mpz_class> moment_histogram(const LacunarySequence& seq, long s, long L,
                                                long T, long budget) {
    const MomentSetup set = moment_setup(seq, s, L, T, budget);
    const long picks = static_cast<long>(set.values.size());
    std::map<mpz_class, mpz_class> hist;
    for (long i = 0; i < picks; ++i)
        walk_signed_sums(set, i, [&](const mpz_class& sum) { hist[sum] += 1; });
    return hist;
}

}  // namespace modone

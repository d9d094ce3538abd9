#include "galrep/bounds.hpp"

#include <functional>

#include "galrep/errors.hpp"

namespace galrep {

namespace {

constexpr mpfr_prec_t kMaxPrec = 4096;

// All bound formulas here are increasing chains of +, *, log on positive
// inputs, so rounding every step one way yields a one-sided enclosure.
Int certified_ceiling(const std::function<RealInterval(mpfr_prec_t)>& eval,
                      mpfr_prec_t prec0, RealInterval* out_iv) {
    for (mpfr_prec_t prec = prec0; prec <= kMaxPrec; prec *= 2) {
        RealInterval iv = eval(prec);
        Int lo = iv.lo.ceil(), hi = iv.hi.ceil();
        if (lo == hi) {
            if (out_iv) *out_iv = iv;
            return lo;
        }
    }
    throw DomainError("bounds: ceiling straddles an integer at maximum precision");
}

BoundReport make_report(const Int& input_radical, FormulaId id,
                        const std::function<RealInterval(mpfr_prec_t)>& eval,
                        const std::function<Real(mpfr_prec_t)>& nearest,
                        mpfr_prec_t prec) {
    BoundReport rep;
    rep.input_radical = input_radical;
    rep.formula_id = id;
    rep.integer_bound = certified_ceiling(eval, prec, nullptr);
    Real mid = nearest(prec);
    rep.raw_value = mid.to_double();
    rep.raw_decimal = mid.to_decimal();
    return rep;
}

Real serre_raw(const Int& rad, mpfr_prec_t prec, mpfr_rnd_t rnd) {
    return Real::from_int(rad, prec, rnd).log().mul_ui(964).add_ui(5760);
}

Real isogeny_raw(const Int& rad, mpfr_prec_t prec, mpfr_rnd_t rnd) {
    return Real::from_int(rad, prec, rnd).log().mul_ui(482).add_ui(2880).square();
}

} // namespace

std::string formula_name(FormulaId id) {
    switch (id) {
        case FormulaId::Thm1_1: return "Thm1.1";
        case FormulaId::Thm1_2: return "Thm1.2";
        case FormulaId::Cor2_2: return "Cor2.2";
        case FormulaId::Lemma2_3_upper: return "Lemma2.3-upper";
        case FormulaId::Lemma2_3_lower: return "Lemma2.3-lower";
    }
    return "?";
}

RealInterval serre_raw_interval(const Int& rad2NE, mpfr_prec_t prec) {
    return RealInterval{serre_raw(rad2NE, prec, MPFR_RNDD),
                        serre_raw(rad2NE, prec, MPFR_RNDU)};
}

RealInterval isogeny_raw_interval(const Int& rad2N1N2, mpfr_prec_t prec) {
    return RealInterval{isogeny_raw(rad2N1N2, prec, MPFR_RNDD),
                        isogeny_raw(rad2N1N2, prec, MPFR_RNDU)};
}

BoundReport serre_bound(const Int& rad2NE, mpfr_prec_t prec) {
    if (rad2NE < 2) throw DomainError("serre_bound: rad(2 N_E) must be >= 2");
    return make_report(
        rad2NE, FormulaId::Thm1_1,
        [&](mpfr_prec_t p) { return serre_raw_interval(rad2NE, p); },
        [&](mpfr_prec_t p) { return serre_raw(rad2NE, p, MPFR_RNDN); }, prec);
}

BoundReport isogeny_bound(const Int& rad2N1N2, mpfr_prec_t prec) {
    if (rad2N1N2 < 2) throw DomainError("isogeny_bound: rad(2 N_1 N_2) must be >= 2");
    return make_report(
        rad2N1N2, FormulaId::Thm1_2,
        [&](mpfr_prec_t p) { return isogeny_raw_interval(rad2N1N2, p); },
        [&](mpfr_prec_t p) { return isogeny_raw(rad2N1N2, p, MPFR_RNDN); }, prec);
}

ChebotarevParams ChebotarevParams::bach_sorenson(const mpq_class& log_disc,
                                                 unsigned long degree) {
    return ChebotarevParams{mpq_class(4), mpq_class(5, 2), mpq_class(5), log_disc, degree};
}

ChebotarevParams ChebotarevParams::improved_1755(const mpq_class& log_disc,
                                                 unsigned long degree) {
    return ChebotarevParams{mpq_class(1755, 1000), mpq_class(0), mpq_class(57, 10),
                            log_disc, degree};
}

ChebotarevParams ChebotarevParams::improved_1257(const mpq_class& log_disc,
                                                 unsigned long degree) {
    return ChebotarevParams{mpq_class(1257, 1000), mpq_class(0), mpq_class(73, 10),
                            log_disc, degree};
}

bool ChebotarevParams::admitted() const {
    auto is = [&](const mpq_class& a, const mpq_class& b, const mpq_class& c) {
        return a_const == a && b_const == b && c_const == c;
    };
    return is(4, mpq_class(5, 2), 5) || is(mpq_class(1755, 1000), 0, mpq_class(57, 10))
        || is(mpq_class(1257, 1000), 0, mpq_class(73, 10));
}

mpq_class chebotarev_raw_exact(const ChebotarevParams& params) {
    if (params.a_const < 0 || params.b_const < 0 || params.c_const < 0 || params.log_disc < 0)
        throw DomainError("chebotarev_prime_bound: constants must be nonnegative");
    mpq_class base = params.a_const * params.log_disc
                   + params.b_const * mpq_class(params.degree) + params.c_const;
    return base * base;
}

BoundReport chebotarev_prime_bound(const ChebotarevParams& params, mpfr_prec_t prec) {
    mpq_class raw = chebotarev_raw_exact(params);
    BoundReport rep;
    rep.input_radical = 1;
    rep.formula_id = FormulaId::Cor2_2;
    // exact rational: ceiling needs no interval
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), raw.get_num().get_mpz_t(), raw.get_den().get_mpz_t());
    rep.integer_bound = q;
    Real mid = Real::from_rational(raw, prec, MPFR_RNDN);
    rep.raw_value = mid.to_double();
    rep.raw_decimal = mid.to_decimal();
    return rep;
}

DiscriminantLogBounds discriminant_log_bounds(unsigned long degree, const Int& rad_dK,
                                              mpfr_prec_t prec) {
    if (degree < 2)
        throw DomainError("discriminant_log_bounds: nontrivial extension required (degree >= 2)");
    if (rad_dK < 2)
        throw DomainError("discriminant_log_bounds: rad(d_K) must be >= 2");
    // lower bound rounded down stays a lower bound
    Real lower = Real::from_ui(3, prec, MPFR_RNDD).log()
                     .mul_ui(degree)
                     .div(Real::from_ui(2, prec, MPFR_RNDD));
    Real up_rad = Real::from_int(rad_dK, prec, MPFR_RNDU).log().mul_ui(degree - 1);
    Real up_deg = Real::from_ui(degree, prec, MPFR_RNDU).log().mul_ui(degree);
    return DiscriminantLogBounds{lower, up_rad.add(up_deg)};
}

Int group_order_bound(const Int& ell, unsigned long r) {
    if (!is_prime(ell)) throw DomainError("group_order_bound: ell must be prime");
    if (r < 1) throw DomainError("group_order_bound: r must be >= 1");
    Int num;
    mpz_pow_ui(num.get_mpz_t(), ell.get_mpz_t(), 2 * r * r);
    return (num - 1) / (ell - 1);
}

namespace {

// largest divisor of (6*16^(n-1))^2 = 2^(8n-6) * 3^2 that is <= cap
Int max_divisor_up_to(unsigned n, const Int& cap) {
    Int best = 0;
    const unsigned a_max = 8 * n - 6;
    Int p2 = 1;
    for (unsigned a = 0; a <= a_max && a <= 16; ++a, p2 *= 2) {
        Int p23 = p2;
        for (unsigned b = 0; b <= 2; ++b, p23 *= 3)
            if (p23 <= cap && p23 > best) best = p23;
    }
    return best;
}

} // namespace

bool verify_isogeny_bound_constants() {
    // group order bound at ell = r = 2
    if (group_order_bound(2, 2) != 255) return false;

    // (i) divisors of (6*16^(n-1))^2 that are <= 255 never exceed 192, and
    // 192 is attained from n = 2 on. For n >= 2 the 2-exponent 8n-6 >= 10
    // exceeds the largest usable power (2^7 = 128 <= 255 < 2^8), so the
    // divisor set below 255 is the same for every n >= 2.
    if (max_divisor_up_to(1, 255) > 192) return false;
    if (max_divisor_up_to(2, 255) != 192) return false;
    if (max_divisor_up_to(3, 255) != 192) return false;

    // (ii)
    if (2 * 192 != 384) return false;

    // reference Chebotarev evaluations, exact rational route
    if (chebotarev_raw_exact(ChebotarevParams::bach_sorenson(100, 384))
        != mpq_class(1863225)) return false;
    if (chebotarev_raw_exact(ChebotarevParams::improved_1755(1000, 384))
        != mpq_class(310006449, 100)) return false;

    // (iii) radical-2 inequality: (1.257*(383 log 2 + 384 log 384) + 7.3)^2
    // >= 3100064.49, checked through the rounded-down evaluation so the
    // comparison certifies the true value.
    {
        const mpfr_prec_t prec = 128;
        Real log2 = Real::from_ui(2, prec, MPFR_RNDD).log();
        Real log384 = Real::from_ui(384, prec, MPFR_RNDD).log();
        Real inner = log2.mul_ui(383).add(log384.mul_ui(384));
        Real a = Real::from_rational(mpq_class(1257, 1000), prec, MPFR_RNDD);
        Real c = Real::from_rational(mpq_class(73, 10), prec, MPFR_RNDD);
        Real lhs = a.mul(inner).add(c).square();
        if (lhs.cmp_rational(mpq_class(310006449, 100)) < 0) return false;
    }

    // (iv) 2*(482x + 2880) = 964x + 5760 as polynomials
    if (2 * 482 != 964 || 2 * 2880 != 5760) return false;

    return true;
}

} // namespace galrep

#pragma once

#include <string>

#include <gmpxx.h>

#include "galrep/arith.hpp"
#include "galrep/real.hpp"

namespace galrep {

enum class FormulaId { Thm1_1, Thm1_2, Cor2_2, Lemma2_3_upper, Lemma2_3_lower };

std::string formula_name(FormulaId id);

// [lo, hi] brackets the exact value: lo is evaluated rounding every
// operation down, hi rounding every operation up.
struct RealInterval {
    Real lo, hi;
};

// An evaluated closed-form bound. integer_bound is the ceiling of the raw
// value, certified by directed-rounding interval agreement.
struct BoundReport {
    Int input_radical; // formula argument where radical-based, 1 otherwise
    double raw_value = 0;
    std::string raw_decimal; // round-to-nearest, 24 significant digits
    Int integer_bound;
    FormulaId formula_id = FormulaId::Thm1_1;
};

// Effective-Chebotarev least-prime bound parameters: p <= (a log d_K + b [K:Q] + c)^2.
// Constants are exact rationals so landmark values like 1863225 reproduce exactly.
struct ChebotarevParams {
    mpq_class a_const, b_const, c_const;
    mpq_class log_disc; // nonnegative
    unsigned long degree = 1;

    // the three constant sets attested in the proof of the isogeny bound
    static ChebotarevParams bach_sorenson(const mpq_class& log_disc, unsigned long degree);
    static ChebotarevParams improved_1755(const mpq_class& log_disc, unsigned long degree);
    static ChebotarevParams improved_1257(const mpq_class& log_disc, unsigned long degree);
    bool admitted() const;
};

// 964 log(rad2NE) + 5760, certified ceiling. rad2NE is rad(2 N_E), >= 2.
BoundReport serre_bound(const Int& rad2NE, mpfr_prec_t prec = 128);

// (482 log(rad2N1N2) + 2880)^2, certified ceiling.
BoundReport isogeny_bound(const Int& rad2N1N2, mpfr_prec_t prec = 128);

// (a log_disc + b degree + c)^2. Exact rational evaluation underneath, so
// integer-valued results (e.g. 1863225) are certified trivially.
BoundReport chebotarev_prime_bound(const ChebotarevParams& params, mpfr_prec_t prec = 128);
mpq_class chebotarev_raw_exact(const ChebotarevParams& params);

// (1/2 log 3) * degree <= log d_K <= (degree - 1) log rad(d_K) + degree log(degree).
// lower is rounded down, upper rounded up, so the sandwich stays valid.
struct DiscriminantLogBounds {
    Real lower, upper;
};
DiscriminantLogBounds discriminant_log_bounds(unsigned long degree, const Int& rad_dK,
                                              mpfr_prec_t prec = 128);

// (ell^(2 r^2) - 1) / (ell - 1), exact.
Int group_order_bound(const Int& ell, unsigned long r);

// Cross-checks the exact constant arithmetic feeding the isogeny bound:
// 255 -> 192 -> 384, the two reference Chebotarev evaluations, the radical-2
// inequality, and the factor-2 relation between the two headline bounds.
bool verify_isogeny_bound_constants();

// Directed-rounding raw intervals, exposed for the identity and
// certification property tests.
RealInterval serre_raw_interval(const Int& rad2NE, mpfr_prec_t prec = 128);
RealInterval isogeny_raw_interval(const Int& rad2N1N2, mpfr_prec_t prec = 128);

} // namespace galrep

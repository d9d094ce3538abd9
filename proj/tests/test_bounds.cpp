#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "galrep/bounds.hpp"
#include "galrep/errors.hpp"
#include "testutil.hpp"

using namespace galrep;
using testutil::Rng;

namespace {

// relative gap between the interval ends, as a power of two
bool interval_tight(const RealInterval& iv, int bits) {
    Real width = iv.hi.sub(iv.lo);
    Real scale = iv.lo.mul_ui(1); // copy
    for (int i = 0; i < bits; ++i) width = width.mul_ui(2);
    return width.cmp(scale) < 0; // (hi - lo) * 2^bits < lo
}

} // namespace

TEST_CASE("serre_bound") {
    BoundReport r210 = serre_bound(210);
    CHECK(r210.integer_bound == 10915); // 964 log rad(2*3*5*7) + 5760 <= 10915
    CHECK(r210.formula_id == FormulaId::Thm1_1);
    CHECK(r210.input_radical == 210);
    CHECK(r210.raw_value == doctest::Approx(10914.6116596116).epsilon(1e-12));

    CHECK(serre_bound(2).integer_bound == 6429); // 964 ln 2 + 5760 = 6428.19...
    CHECK(serre_bound(2310).integer_bound == 13227);
    CHECK(serre_bound(2310).integer_bound > serre_bound(210).integer_bound);
    CHECK_THROWS_AS(serre_bound(1), DomainError);
}

TEST_CASE("isogeny_bound") {
    BoundReport r2 = isogeny_bound(2);
    CHECK(r2.integer_bound == 10330420); // (482 ln 2 + 2880)^2 = 10330419.146...
    CHECK(r2.raw_value == doctest::Approx(10330419.1463377).epsilon(1e-12));
    CHECK(r2.formula_id == FormulaId::Thm1_2);

    CHECK(isogeny_bound(210).integer_bound == 29782187);
    CHECK_THROWS_AS(isogeny_bound(0), DomainError);
}

TEST_CASE("serre/isogeny factor-2 identity to >= 60 bits") {
    // 2(482x + 2880) = 964x + 5760, so 2 sqrt(isogeny raw) = serre raw
    Rng rng(2024);
    for (int i = 0; i < 100; ++i) {
        Int rad = Int(static_cast<unsigned long>(rng.range(2, 1000000)));
        RealInterval serre = serre_raw_interval(rad, 256);
        RealInterval iso = isogeny_raw_interval(rad, 256);
        RealInterval twice_sqrt{iso.lo.sqrt().mul_ui(2), iso.hi.sqrt().mul_ui(2)};
        // intervals must overlap...
        CHECK(twice_sqrt.lo.cmp(serre.hi) <= 0);
        CHECK(serre.lo.cmp(twice_sqrt.hi) <= 0);
        // ...and both be tight to >= 60 bits
        CHECK(interval_tight(serre, 60));
        CHECK(interval_tight(twice_sqrt, 60));
    }
}

TEST_CASE("ceiling certification") {
    Rng rng(555);
    for (int i = 0; i < 100; ++i) {
        Int rad = Int(static_cast<unsigned long>(rng.range(2, 100000000)));
        RealInterval iv = serre_raw_interval(rad);
        CHECK(iv.lo.ceil() == iv.hi.ceil());
        CHECK(serre_bound(rad).integer_bound == iv.lo.ceil());
    }
}

TEST_CASE("chebotarev_prime_bound reference values") {
    // (4 * 100 + 2.5 * 384 + 5)^2 = 1863225, exactly
    ChebotarevParams p1 = ChebotarevParams::bach_sorenson(100, 384);
    CHECK(chebotarev_raw_exact(p1) == 1863225);
    CHECK(chebotarev_prime_bound(p1).integer_bound == 1863225);
    CHECK(p1.admitted());

    // (1.755 * 1000 + 0 * 384 + 5.7)^2 = 3100064.49, exactly
    ChebotarevParams p2 = ChebotarevParams::improved_1755(1000, 384);
    CHECK(chebotarev_raw_exact(p2) == mpq_class(310006449, 100));
    CHECK(chebotarev_prime_bound(p2).integer_bound == 3100065);
    CHECK(chebotarev_prime_bound(p2).raw_value == doctest::Approx(3100064.49).epsilon(1e-12));
    CHECK(p2.admitted());

    ChebotarevParams p3 = ChebotarevParams::improved_1257(1000, 384);
    CHECK(p3.admitted());

    // (0, 0, c) degenerates to c^2
    ChebotarevParams flat{0, 0, 7, mpq_class(12345), 99};
    CHECK(chebotarev_raw_exact(flat) == 49);
    CHECK(!flat.admitted());
}

TEST_CASE("chebotarev monotonicity") {
    auto raw = [](mpq_class a, mpq_class b, mpq_class c, mpq_class x, unsigned long n) {
        return chebotarev_raw_exact(ChebotarevParams{a, b, c, x, n});
    };
    CHECK(raw(4, 2, 5, 100, 10) <= raw(5, 2, 5, 100, 10));
    CHECK(raw(4, 2, 5, 100, 10) <= raw(4, 3, 5, 100, 10));
    CHECK(raw(4, 2, 5, 100, 10) <= raw(4, 2, 6, 100, 10));
    CHECK(raw(4, 2, 5, 100, 10) <= raw(4, 2, 5, 101, 10));
    CHECK(raw(4, 2, 5, 100, 10) <= raw(4, 2, 5, 100, 11));
}

TEST_CASE("discriminant_log_bounds") {
    SUBCASE("degree 2, radical 2 brackets log d for Q(i) and Q(sqrt 2)") {
        DiscriminantLogBounds b = discriminant_log_bounds(2, 2);
        // lower = ln 3, upper = 3 ln 2
        CHECK(b.lower.to_double() == doctest::Approx(1.0986122886681098).epsilon(1e-14));
        CHECK(b.upper.to_double() == doctest::Approx(2.0794415416798357).epsilon(1e-14));
        // d_{Q(i)} = 4: ln 4 in [ln 3, 3 ln 2]
        Real ln4 = Real::from_ui(4, 128, MPFR_RNDN).log();
        CHECK(b.lower.cmp(ln4) <= 0);
        CHECK(ln4.cmp(b.upper) <= 0);
        // d_{Q(sqrt 2)} = 8: ln 8 = 3 ln 2 is the equality edge of the sandwich
        Real ln8 = Real::from_ui(8, 128, MPFR_RNDD).log();
        CHECK(b.lower.cmp(ln8) <= 0);
        CHECK(ln8.cmp(b.upper) <= 0);
    }
    SUBCASE("Q(zeta_5): degree 4, d_K = 125, rad 5") {
        DiscriminantLogBounds b = discriminant_log_bounds(4, 5);
        Real ln125 = Real::from_ui(125, 128, MPFR_RNDN).log();
        CHECK(b.lower.cmp(ln125) <= 0);
        CHECK(ln125.cmp(b.upper) <= 0);
    }
    SUBCASE("degree 384 radical 210 upper matches a direct evaluation") {
        DiscriminantLogBounds b = discriminant_log_bounds(384, 210);
        Real direct = Real::from_ui(210, 192, MPFR_RNDN).log().mul_ui(383).add(
            Real::from_ui(384, 192, MPFR_RNDN).log().mul_ui(384));
        CHECK(b.upper.to_double() == doctest::Approx(direct.to_double()).epsilon(1e-14));
        CHECK(direct.cmp(b.upper) <= 0); // upper is an upward-rounded enclosure
    }
    SUBCASE("lower < upper whenever degree >= 2 and rad >= 2") {
        for (unsigned long deg : {2ul, 3ul, 10ul, 384ul})
            for (unsigned long rad : {2ul, 30ul, 210ul}) {
                DiscriminantLogBounds b = discriminant_log_bounds(deg, rad);
                CHECK(b.lower.cmp(b.upper) < 0);
            }
    }
    CHECK_THROWS_AS(discriminant_log_bounds(1, 2), DomainError);
}

TEST_CASE("group_order_bound") {
    CHECK(group_order_bound(2, 2) == 255); // (2^8 - 1) / 1
    CHECK(group_order_bound(2, 1) == 3);   // (2^2 - 1) / 1
    CHECK(group_order_bound(3, 1) == 4);   // (3^2 - 1) / 2
    CHECK(group_order_bound(3, 2) == 3280); // (3^8 - 1) / 2
    CHECK_THROWS_AS(group_order_bound(4, 1), DomainError);
}

TEST_CASE("verify_isogeny_bound_constants") {
    CHECK(verify_isogeny_bound_constants());
}

TEST_CASE("Real decimal rendering") {
    Real x = Real::from_rational(mpq_class(310006449, 100), 128, MPFR_RNDN);
    CHECK(x.to_decimal() == "3100064.49");
    CHECK(Real::from_ui(5, 64, MPFR_RNDN).to_decimal() == "5");
    CHECK(Real::from_rational(mpq_class(1, 8), 64, MPFR_RNDN).to_decimal() == "0.125");
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "galrep/errors.hpp"
#include "galrep/galois_image.hpp"
#include "gl2_oracle.hpp"

using namespace galrep;
using namespace galrep::gl2;

namespace {

const WeierstrassCurve k11a1{0, -1, 1, -10, -20};
const WeierstrassCurve kSec5{0, 0, 0, -198450, -27783000};

bool disc_square_or_zero(const ElementClassification& cls) {
    return cls.disc_class != SquareClass::NonSquare;
}
bool disc_nonsquare_or_zero(const ElementClassification& cls) {
    return cls.disc_class != SquareClass::Square;
}

} // namespace

TEST_CASE("classify_element examples") {
    ElementClassification a = classify_element(2, 1, 5);
    CHECK(a.disc_class == SquareClass::Zero); // t^2 - 4d = 0
    CHECK(a.u == 4);
    CHECK(!a.trace_zero);

    ElementClassification b = classify_element(3, 1, 7);
    CHECK(b.disc_class == SquareClass::NonSquare); // 5 not in {1,2,4}
    CHECK(!b.trace_zero);
    CHECK(b.u == 2);

    ElementClassification c = classify_element(0, 3, 7);
    CHECK(c.trace_zero);
    CHECK(c.u == 0);

    CHECK_THROWS_AS(classify_element(1, 0, 7), DomainError);
    CHECK_THROWS_AS(classify_element(1, 7, 7), DomainError);
    CHECK_THROWS_AS(classify_element(1, 1, 9), DomainError);
}

TEST_CASE("update_ledger examples mod 7") {
    ObstructionLedger led;
    led = update_ledger(led, FrobeniusClassModL{101, 3, 1}, 7);
    CHECK(led.borel_out == 101);
    CHECK(led.split_norm_out == 101);
    CHECK(!led.nonsplit_norm_out);
    CHECK(!led.exceptional_out); // u = 2

    led = update_ledger(led, FrobeniusClassModL{103, 1, 1}, 7);
    CHECK(led.nonsplit_norm_out == 103); // disc = -3 = 4 = 2^2, t != 0

    led = update_ledger(led, FrobeniusClassModL{107, 2, 3}, 7);
    CHECK(led.exceptional_out == 107); // u = 4/3 = 6; 36 - 18 + 1 = 5 != 0

    // earlier witnesses are kept
    led = update_ledger(led, FrobeniusClassModL{109, 3, 1}, 7);
    CHECK(led.borel_out == 101);
}

TEST_CASE("determinant subgroup tracking") {
    // mod 7: 2 has order 3, 3 is a generator (order 6)
    ObstructionLedger led;
    led = update_ledger(led, FrobeniusClassModL{2, 0, 2}, 7);
    CHECK(led.det_order == 3);
    CHECK(led.det_witnesses == std::vector<uint64_t>{2});
    led = update_ledger(led, FrobeniusClassModL{11, 0, 4}, 7); // 4 in <2>
    CHECK(led.det_order == 3);
    CHECK(led.det_witnesses == std::vector<uint64_t>{2});
    led = update_ledger(led, FrobeniusClassModL{3, 0, 3}, 7);
    CHECK(led.det_order == 6);
    CHECK(led.det_full(7));
    CHECK(led.det_witnesses == std::vector<uint64_t>{2, 3});
}

// The elimination predicates are conjugation-invariant (they only read trace
// and determinant), so enumerating the standard copy of each subgroup covers
// every conjugate.
TEST_CASE("Dickson predicate soundness, exhaustive for ell in {5, 7, 11}") {
    for (uint64_t ell : {5ull, 7ull, 11ull}) {
        CAPTURE(ell);
        uint64_t eps = least_nonsquare(ell);

        // (c) Borel: upper triangular, disc = (a - d)^2
        for (uint64_t a = 1; a < ell; ++a)
            for (uint64_t d = 1; d < ell; ++d)
                for (uint64_t b = 0; b < ell; ++b)
                    CHECK(disc_square_or_zero(classify_mat(Mat{a, b, 0, d}, ell)));

        // (a) split Cartan normalizer: diagonal part has square-or-zero
        // disc; the antidiagonal coset has trace zero
        for (uint64_t a = 1; a < ell; ++a)
            for (uint64_t d = 1; d < ell; ++d) {
                ElementClassification diag = classify_mat(Mat{a, 0, 0, d}, ell);
                CHECK((disc_square_or_zero(diag) || diag.trace_zero));
                Mat anti = mul(Mat{0, 1, 1, 0}, Mat{a, 0, 0, d}, ell);
                ElementClassification outer = classify_mat(anti, ell);
                CHECK(outer.trace_zero);
            }

        // (b) nonsplit Cartan normalizer; also the trace-zero criterion on
        // the outer coset
        for (uint64_t a = 0; a < ell; ++a)
            for (uint64_t c = 0; c < ell; ++c) {
                if (a == 0 && c == 0) continue;
                Mat m{a, eps * c % ell, c, a};
                if (det_of(m, ell) == 0) continue; // a^2 = eps c^2 impossible, guard anyway
                ElementClassification inner = classify_mat(m, ell);
                CHECK((disc_nonsquare_or_zero(inner) || inner.trace_zero));
                Mat outer = mul(Mat{1, 0, 0, ell - 1}, m, ell);
                ElementClassification out_cls = classify_mat(outer, ell);
                CHECK(out_cls.trace_zero); // tr = 0 for each element off C_ns
            }

        // (d) exceptional: projective order <= 5 forces u in {0,1,2,4} or
        // u^2 - 3u + 1 = 0
        for (const Mat& m : all_invertible(ell)) {
            if (!projective_order_at_most_5(m, ell)) continue;
            ElementClassification cls = classify_mat(m, ell);
            bool u_small = cls.u == 0 || cls.u == 1 || cls.u == 2 % ell || cls.u == 4 % ell;
            uint64_t quad = (cls.u * cls.u % ell + ell - 3 * cls.u % ell + 1) % ell;
            CHECK((u_small || quad == 0));
        }
    }
}

TEST_CASE("completeness on the full group, exhaustive for ell in {5, 7, 11}") {
    for (uint64_t ell : {5ull, 7ull, 11ull}) {
        CAPTURE(ell);
        ObstructionLedger led;
        uint64_t fake_p = 1;
        for (const Mat& m : all_invertible(ell)) {
            led = update_ledger(led, FrobeniusClassModL{fake_p++, tr_of(m, ell), det_of(m, ell)},
                                ell);
            if (ledger_certifies(led, ell, CertifyMode::Full)) break;
        }
        CHECK(led.borel_out.has_value());
        CHECK(led.split_norm_out.has_value());
        CHECK(led.nonsplit_norm_out.has_value());
        CHECK(led.exceptional_out.has_value());
        CHECK(led.det_full(ell));
        CHECK(ledger_certifies(led, ell, CertifyMode::Full));
    }
}

TEST_CASE("certify: 11a1 at ell = 7 within p <= 100") {
    CurveProfile prof = curve_profile(k11a1);
    CertifyOutcome out = certify(prof, 7, 100, CertifyMode::Full);
    CHECK(out.status == CertifyStatus::Certified);
    CHECK(out.is_certified());
    CHECK(audit_outcome(prof, out));
}

TEST_CASE("certify: 11a1 at ell = 5 is inconclusive (rational 5-isogeny)") {
    CurveProfile prof = curve_profile(k11a1);
    CertifyOutcome out = certify(prof, 5, 10000, CertifyMode::Full);
    CHECK(out.status == CertifyStatus::Inconclusive);
    CHECK(!out.ledger.borel_out.has_value()); // every char poly reducible mod 5
    bool borel_missing = false;
    for (const auto& name : out.missing) borel_missing |= name == "borel";
    CHECK(borel_missing);
    CHECK(audit_outcome(prof, out));
}

TEST_CASE("certify: worked-example curve at ell = 41 in Smbpr mode") {
    CurveProfile prof = curve_profile(kSec5);
    CertifyOutcome out = certify(prof, 41, 1000, CertifyMode::Smbpr);
    CHECK(out.status == CertifyStatus::Certified);
    REQUIRE(out.ledger.nonsplit_norm_out.has_value());

    // the witness is the first good prime with nonzero-square disc and
    // nonzero trace mod 41
    MemoTraceTable table(prof);
    std::optional<uint64_t> expected;
    for (size_t i = 0; !expected; ++i) {
        auto rec = table.at(i, 1000);
        REQUIRE(rec.has_value());
        if (rec->p == 41) continue;
        ElementClassification cls = classify_element(
            static_cast<uint64_t>(((rec->ap % 41) + 41) % 41), rec->p % 41, 41);
        if (cls.disc_class == SquareClass::Square && !cls.trace_zero) expected = rec->p;
    }
    CHECK(out.ledger.nonsplit_norm_out == expected);
    CHECK(audit_outcome(prof, out));
}

TEST_CASE("certify: ell = 2 via the two-division cubic") {
    SUBCASE("11a1 is surjective mod 2") {
        CurveProfile prof = curve_profile(k11a1);
        CertifyOutcome out = certify(prof, 2, 100, CertifyMode::Full);
        CHECK(out.status == CertifyStatus::SmallPrimeSpecial);
        CHECK(out.small_prime_surjective);
        CHECK(out.is_certified());
        CHECK(audit_outcome(prof, out));
    }
    SUBCASE("rational 2-torsion blocks surjectivity") {
        // y^2 = x(x - 1)(x + 2): full rational 2-torsion
        WeierstrassCurve e{0, 1, 0, -2, 0};
        CurveProfile prof = curve_profile(e);
        REQUIRE(!prof.cm);
        CertifyOutcome out = certify(prof, 2, 100, CertifyMode::Full);
        CHECK(out.status == CertifyStatus::SmallPrimeSpecial);
        CHECK(!out.small_prime_surjective);
        CHECK(!out.is_certified());
        CHECK(audit_outcome(prof, out));
    }
}

TEST_CASE("ell = 3 trace data is provably insufficient") {
    // C_ns+(3) realizes every (trace, det) pair of GL2(F_3), so no
    // trace-based predicate can rule out the nonsplit-normalizer case at 3;
    // that is why certify() decides ell = 3 from the 3-division quartic.
    const uint64_t ell = 3, eps = 2;
    std::set<std::pair<uint64_t, uint64_t>> full_pairs, cns_plus_pairs;
    for (const Mat& m : all_invertible(ell)) full_pairs.insert({tr_of(m, ell), det_of(m, ell)});
    for (uint64_t a = 0; a < ell; ++a)
        for (uint64_t c = 0; c < ell; ++c) {
            if (a == 0 && c == 0) continue;
            Mat inner{a, eps * c % ell, c, a};
            if (det_of(inner, ell) == 0) continue;
            cns_plus_pairs.insert({tr_of(inner, ell), det_of(inner, ell)});
            Mat outer = mul(Mat{1, 0, 0, ell - 1}, inner, ell);
            cns_plus_pairs.insert({tr_of(outer, ell), det_of(outer, ell)});
        }
    CHECK(full_pairs == cns_plus_pairs);
}

TEST_CASE("certify: ell = 3 via the three-division quartic") {
    SUBCASE("11a1 is surjective mod 3") {
        CurveProfile prof = curve_profile(k11a1);
        CertifyOutcome out = certify(prof, 3, 1000, CertifyMode::Full);
        CHECK(out.status == CertifyStatus::SmallPrimeSpecial);
        CHECK(out.small_prime_surjective);
        CHECK(out.is_certified());
        CHECK(audit_outcome(prof, out));
    }
    SUBCASE("rational 3-torsion blocks surjectivity") {
        // y^2 + xy + y = x^3 has (0, 0) of order 3; j = -12167/26 rules out CM
        WeierstrassCurve e{1, 0, 1, 0, 0};
        CurveProfile prof = curve_profile(e);
        REQUIRE(!prof.cm);
        CHECK(three_division_quartic(e).irreducible_over_q() == false);
        CertifyOutcome out = certify(prof, 3, 1000, CertifyMode::Full);
        CHECK(!out.small_prime_surjective);
        CHECK(!out.is_certified());
        CHECK(audit_outcome(prof, out));
        // trace-level corroboration: rational 3-torsion forces 3 | #E(F_p)
        MemoTraceTable table(prof);
        for (size_t i = 0; i < 20; ++i) {
            auto rec = table.at(i, 1000);
            REQUIRE(rec.has_value());
            CHECK((static_cast<int64_t>(rec->p) + 1 - rec->ap) % 3 == 0);
        }
    }
}

TEST_CASE("certify monotonicity in pmax") {
    CurveProfile prof = curve_profile(k11a1);
    for (uint64_t ell : {3ull, 7ull, 13ull, 41ull}) {
        CertifyOutcome small = certify(prof, ell, 200, CertifyMode::Full);
        CertifyOutcome big = certify(prof, ell, 2000, CertifyMode::Full);
        if (small.status == CertifyStatus::Certified)
            CHECK(big.status == CertifyStatus::Certified);
    }
}

TEST_CASE("certify refuses CM curves") {
    CurveProfile cm = curve_profile(WeierstrassCurve{0, 0, 0, 1, 0});
    CHECK_THROWS_AS(certify(cm, 7, 100, CertifyMode::Full), CmCurveError);
}

TEST_CASE("shared MemoTraceTable agrees with per-call sources") {
    CurveProfile prof = curve_profile(k11a1);
    MemoTraceTable table(prof);
    for (uint64_t ell : {3ull, 7ull, 13ull}) {
        CertifyOutcome shared = certify(prof, ell, 500, CertifyMode::Full, table);
        CertifyOutcome solo = certify(prof, ell, 500, CertifyMode::Full);
        CHECK(shared.status == solo.status);
        CHECK(shared.ledger.borel_out == solo.ledger.borel_out);
        CHECK(shared.ledger.split_norm_out == solo.ledger.split_norm_out);
        CHECK(shared.ledger.nonsplit_norm_out == solo.ledger.nonsplit_norm_out);
        CHECK(shared.ledger.exceptional_out == solo.ledger.exceptional_out);
        CHECK(shared.ledger.det_witnesses == solo.ledger.det_witnesses);
    }
}

TEST_CASE("Smbpr mode matches Full on certified large ell") {
    CurveProfile prof = curve_profile(k11a1);
    for (uint64_t ell : {41ull, 43ull, 53ull}) {
        CertifyOutcome full = certify(prof, ell, 2000, CertifyMode::Full);
        CertifyOutcome fast = certify(prof, ell, 2000, CertifyMode::Smbpr);
        CHECK(full.is_certified() == fast.is_certified());
    }
}

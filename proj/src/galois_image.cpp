#include "galrep/galois_image.hpp"

#include <algorithm>
#include <numeric>

#include "galrep/errors.hpp"

namespace galrep {

namespace {

// multiplicative order of a mod ell (a != 0), via the factorization of ell-1
uint64_t mult_order(uint64_t a, uint64_t ell) {
    uint64_t ord = ell - 1;
    for (const auto& [pf, e] : factorize(Int(ell - 1))) {
        uint64_t q = pf.get_ui();
        while (ord % q == 0 && powmod(a, ord / q, ell) == 1) ord /= q;
    }
    return ord;
}

uint64_t lcm_u64(uint64_t a, uint64_t b) { return a / std::gcd(a, b) * b; }

bool exceptional_excluder(uint64_t u, uint64_t ell) {
    // projective order > 5 iff u not in {0, 1, 2, 4} and u^2 - 3u + 1 != 0
    if (u == 0 || u == 1 % ell || u == 2 % ell || u == 4 % ell) return false;
    uint64_t val = (mulmod(u, u, ell) + ell - mulmod(3 % ell, u, ell) + 1) % ell;
    return val != 0;
}

FrobeniusClassModL to_frobenius(const TraceRecord& rec, uint64_t ell) {
    uint64_t t = static_cast<uint64_t>(((rec.ap % static_cast<int64_t>(ell))
                                        + static_cast<int64_t>(ell)) % static_cast<int64_t>(ell));
    return FrobeniusClassModL{rec.p, t, rec.p % ell};
}

bool two_division_surjective(const WeierstrassCurve& minimal) {
    // GL2(F_2) = S3 acting on the roots of the 2-division cubic: surjective
    // iff the cubic is irreducible over Q and its discriminant is not a
    // rational square.
    Cubic cubic = two_division_cubic(minimal);
    Int disc = cubic.discriminant();
    bool disc_square = disc > 0 && mpz_perfect_square_p(disc.get_mpz_t());
    return !cubic.has_rational_root() && !disc_square;
}

bool three_division_surjective(const WeierstrassCurve& minimal) {
    // Trace data cannot settle ell = 3: C_ns+(3) realizes every (trace, det)
    // pair of GL2(F_3). Instead use the 3-division quartic, on whose roots
    // the image acts through PGL2(F_3) = S4. A proper subgroup of GL2(F_3)
    // never has projective image all of S4 (it would need an order-4 element
    // of determinant -1, and those have char poly x^2 + 1), so surjectivity
    // is equivalent to the quartic having Galois group S4: irreducible,
    // irreducible resolvent cubic, non-square discriminant.
    Quartic quartic = three_division_quartic(minimal);
    if (!quartic.irreducible_over_q()) return false;
    Cubic resolvent = quartic.resolvent_cubic();
    if (resolvent.has_rational_root()) return false;
    Int disc = resolvent.discriminant(); // equals the quartic's discriminant
    return !(disc > 0 && mpz_perfect_square_p(disc.get_mpz_t()));
}

CertifyOutcome certify_division_polynomial(const CurveProfile& profile, uint64_t ell,
                                           uint64_t pmax, CertifyMode mode) {
    CertifyOutcome out;
    out.status = CertifyStatus::SmallPrimeSpecial;
    out.ell = ell;
    out.pmax = pmax;
    out.mode = mode;
    out.small_prime_surjective = ell == 2 ? two_division_surjective(profile.minimal.curve)
                                          : three_division_surjective(profile.minimal.curve);
    if (!out.small_prime_surjective)
        out.missing.push_back(ell == 2 ? "two_division_cubic" : "three_division_quartic");
    return out;
}

} // namespace

ElementClassification classify_element(uint64_t t, uint64_t d, uint64_t ell) {
    if (ell < 3 || !is_prime_u64(ell))
        throw DomainError("classify_element: ell must be an odd prime");
    t %= ell;
    d %= ell;
    if (d == 0) throw DomainError("classify_element: d = 0 (p = ell must be skipped)");
    ElementClassification cls;
    uint64_t disc = (mulmod(t, t, ell) + ell - mulmod(4 % ell, d, ell)) % ell;
    cls.disc_class = square_class_mod(disc, ell);
    cls.trace_zero = (t == 0);
    cls.u = mulmod(mulmod(t, t, ell), powmod(d, ell - 2, ell), ell);
    return cls;
}

ObstructionLedger update_ledger(ObstructionLedger ledger, const FrobeniusClassModL& datum,
                                uint64_t ell) {
    ElementClassification cls = classify_element(datum.t, datum.d, ell);
    if (cls.disc_class == SquareClass::NonSquare && !ledger.borel_out)
        ledger.borel_out = datum.p;
    if (cls.disc_class == SquareClass::NonSquare && !cls.trace_zero && !ledger.split_norm_out)
        ledger.split_norm_out = datum.p;
    if (cls.disc_class == SquareClass::Square && !cls.trace_zero && !ledger.nonsplit_norm_out)
        ledger.nonsplit_norm_out = datum.p;
    if (exceptional_excluder(cls.u, ell) && !ledger.exceptional_out)
        ledger.exceptional_out = datum.p;
    if (!ledger.det_full(ell)) {
        uint64_t grown = lcm_u64(ledger.det_order, mult_order(datum.d, ell));
        if (grown > ledger.det_order) {
            ledger.det_order = grown;
            ledger.det_witnesses.push_back(datum.p);
        }
    }
    return ledger;
}

bool ledger_certifies(const ObstructionLedger& ledger, uint64_t ell, CertifyMode mode) {
    if (mode == CertifyMode::Smbpr && ell > 37)
        return ledger.nonsplit_norm_out.has_value();
    return ledger.borel_out && ledger.split_norm_out && ledger.nonsplit_norm_out
        && ledger.exceptional_out && ledger.det_full(ell);
}

std::vector<std::string> missing_obstructions(const ObstructionLedger& ledger, uint64_t ell,
                                              CertifyMode mode) {
    std::vector<std::string> missing;
    if (mode == CertifyMode::Smbpr && ell > 37) {
        if (!ledger.nonsplit_norm_out) missing.push_back("nonsplit_normalizer");
        return missing;
    }
    if (!ledger.borel_out) missing.push_back("borel");
    if (!ledger.split_norm_out) missing.push_back("split_normalizer");
    if (!ledger.nonsplit_norm_out) missing.push_back("nonsplit_normalizer");
    if (!ledger.exceptional_out) missing.push_back("exceptional");
    if (!ledger.det_full(ell)) missing.push_back("det");
    return missing;
}

MemoTraceTable::MemoTraceTable(const CurveProfile& profile, TraceCache* cache,
                               const ApOptions& opts)
    : source_(profile, cache, opts) {}

std::optional<TraceRecord> MemoTraceTable::at(size_t index, uint64_t pmax) {
    while (rows_.size() <= index) {
        auto rec = source_.next(pmax);
        if (!rec) return std::nullopt;
        rows_.push_back(*rec);
    }
    if (rows_[index].p > pmax) return std::nullopt;
    return rows_[index];
}

CertifyOutcome certify(const CurveProfile& profile, uint64_t ell, uint64_t pmax,
                       CertifyMode mode, MemoTraceTable& table) {
    if (!is_prime_u64(ell)) throw DomainError("certify: ell must be prime");
    if (profile.cm)
        throw CmCurveError("certify: curve has complex multiplication; "
                           "the certification criteria assume a non-CM curve");

    if (ell <= 3) return certify_division_polynomial(profile, ell, pmax, mode);

    CertifyOutcome out;
    out.ell = ell;
    out.pmax = pmax;
    out.mode = mode;
    for (size_t i = 0;; ++i) {
        auto rec = table.at(i, pmax);
        if (!rec) break;
        if (rec->p == ell) continue;
        out.ledger = update_ledger(out.ledger, to_frobenius(*rec, ell), ell);
        if (ledger_certifies(out.ledger, ell, mode)) {
            out.status = CertifyStatus::Certified;
            return out;
        }
    }
    out.status = CertifyStatus::Inconclusive;
    out.missing = missing_obstructions(out.ledger, ell, mode);
    return out;
}

CertifyOutcome certify(const CurveProfile& profile, uint64_t ell, uint64_t pmax,
                       CertifyMode mode, TraceCache* cache, const ApOptions& opts) {
    MemoTraceTable table(profile, cache, opts);
    return certify(profile, ell, pmax, mode, table);
}

bool audit_outcome(const CurveProfile& profile, const CertifyOutcome& outcome,
                   const ApOptions& opts) {
    if (outcome.ell == 2)
        return two_division_surjective(profile.minimal.curve) == outcome.small_prime_surjective;
    if (outcome.ell == 3)
        return three_division_surjective(profile.minimal.curve) == outcome.small_prime_surjective;
    uint64_t ell = outcome.ell;
    auto check = [&](std::optional<uint64_t> witness, auto predicate) {
        if (!witness) return true;
        uint64_t p = *witness;
        if (p == ell || !good_reduction(profile, p)) return false;
        TraceRecord rec{p, ap(profile, p, opts)};
        return predicate(classify_element(to_frobenius(rec, ell).t, p % ell, ell));
    };
    bool ok = true;
    ok = ok && check(outcome.ledger.borel_out, [](const ElementClassification& c) {
        return c.disc_class == SquareClass::NonSquare;
    });
    ok = ok && check(outcome.ledger.split_norm_out, [](const ElementClassification& c) {
        return c.disc_class == SquareClass::NonSquare && !c.trace_zero;
    });
    ok = ok && check(outcome.ledger.nonsplit_norm_out, [](const ElementClassification& c) {
        return c.disc_class == SquareClass::Square && !c.trace_zero;
    });
    ok = ok && check(outcome.ledger.exceptional_out, [&](const ElementClassification& c) {
        return exceptional_excluder(c.u, ell);
    });
    // the determinant subgroup must be regenerated exactly by its witnesses
    uint64_t order = 1;
    for (uint64_t p : outcome.ledger.det_witnesses) {
        if (p == ell || !good_reduction(profile, p)) return false;
        order = lcm_u64(order, mult_order(p % ell, ell));
    }
    ok = ok && order == outcome.ledger.det_order;
    return ok;
}

} // namespace galrep

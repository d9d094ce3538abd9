#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "galrep/arith.hpp"
#include "galrep/curve.hpp"
#include "galrep/reduction.hpp"

namespace galrep {

// Frobenius data reduced mod ell: t = a_p mod ell, d = p mod ell (nonzero,
// so p = ell is skipped upstream).
struct FrobeniusClassModL {
    uint64_t p = 0;
    uint64_t t = 0;
    uint64_t d = 0;
};

struct ElementClassification {
    SquareClass disc_class = SquareClass::Zero; // of t^2 - 4d
    bool trace_zero = false;
    uint64_t u = 0; // t^2 / d mod ell
};

// Which proper-subgroup classes have been ruled out, with the witness prime
// for each. The determinant subgroup (image of the cyclotomic character so
// far) is tracked by its exact order.
struct ObstructionLedger {
    std::optional<uint64_t> borel_out;
    std::optional<uint64_t> split_norm_out;
    std::optional<uint64_t> nonsplit_norm_out;
    std::optional<uint64_t> exceptional_out;
    uint64_t det_order = 1;
    std::vector<uint64_t> det_witnesses; // primes that enlarged the subgroup

    bool det_full(uint64_t ell) const { return det_order == ell - 1; }
};

enum class CertifyMode { Full, Smbpr };
enum class CertifyStatus { Certified, Inconclusive, SmallPrimeSpecial };

struct CertifyOutcome {
    CertifyStatus status = CertifyStatus::Inconclusive;
    uint64_t ell = 0;
    uint64_t pmax = 0;
    CertifyMode mode = CertifyMode::Full;
    ObstructionLedger ledger;
    std::vector<std::string> missing;   // unfilled obstructions when Inconclusive
    bool small_prime_surjective = false; // ell = 2 cubic verdict

    bool is_certified() const {
        return status == CertifyStatus::Certified
            || (status == CertifyStatus::SmallPrimeSpecial && small_prime_surjective);
    }
};

// Square class of t^2 - 4d, trace-zero flag and u = t^2/d for an odd prime
// ell. Throws DomainError when d = 0 mod ell.
ElementClassification classify_element(uint64_t t, uint64_t d, uint64_t ell);

// One elimination step. Fills, in order: borel (disc nonsquare), split
// normalizer (disc nonsquare and t != 0), nonsplit normalizer (disc a
// nonzero square and t != 0), exceptional (projective order > 5, i.e.
// u not in {0,1,2,4} and u^2 - 3u + 1 != 0), and grows the determinant
// subgroup by d.
ObstructionLedger update_ledger(ObstructionLedger ledger, const FrobeniusClassModL& datum,
                                uint64_t ell);

// True once the ledger proves the image is all of GL2 (ell >= 5): all four
// obstructions witnessed and full determinant. Smbpr with ell > 37 needs only
// the nonsplit-normalizer witness.
bool ledger_certifies(const ObstructionLedger& ledger, uint64_t ell, CertifyMode mode);

std::vector<std::string> missing_obstructions(const ObstructionLedger& ledger, uint64_t ell,
                                              CertifyMode mode);

// Lazily grown, shareable table of good-prime traces in increasing p.
// Concurrent certifications of one curve read through a single instance.
class MemoTraceTable {
public:
    explicit MemoTraceTable(const CurveProfile& profile, TraceCache* cache = nullptr,
                            const ApOptions& opts = {});

    // i-th good-prime record (0-based); nullopt if it would exceed pmax
    std::optional<TraceRecord> at(size_t index, uint64_t pmax);

private:
    TraceSource source_;
    std::vector<TraceRecord> rows_;
};

// Certify surjectivity of the mod-ell representation from traces of
// Frobenius at good primes p <= pmax. Refuses CM curves. ell = 2 and ell = 3
// are decided unconditionally from the 2- and 3-division polynomials (trace
// data cannot separate C_ns+(3) from GL2(F_3)).
CertifyOutcome certify(const CurveProfile& profile, uint64_t ell, uint64_t pmax,
                       CertifyMode mode, MemoTraceTable& table);
CertifyOutcome certify(const CurveProfile& profile, uint64_t ell, uint64_t pmax,
                       CertifyMode mode = CertifyMode::Full, TraceCache* cache = nullptr,
                       const ApOptions& opts = {});

// Recompute every stored witness from scratch and re-check its predicate;
// the soundness audit behind the ledger invariants.
bool audit_outcome(const CurveProfile& profile, const CertifyOutcome& outcome,
                   const ApOptions& opts = {});

} // namespace galrep

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "galrep/arith.hpp"
#include "galrep/curve.hpp"

namespace galrep {

// Frobenius trace at a good prime: #E_p(F_p) = p + 1 - ap, ap^2 <= 4p.
struct TraceRecord {
    uint64_t p = 0;
    int64_t ap = 0;

    bool operator==(const TraceRecord&) const = default;
};

enum class ApStrategy { Auto, Naive, Bsgs };

struct ApOptions {
    ApStrategy strategy = ApStrategy::Auto;
    uint64_t naive_threshold = uint64_t(1) << 20; // Auto: naive below, BSGS above
    uint64_t naive_fallback_cap = uint64_t(1) << 26; // BSGS ambiguity fallback limit
    int bsgs_random_points = 40;
};

// True iff p does not divide the minimal discriminant.
bool good_reduction(const CurveProfile& profile, uint64_t p);

// Exact Frobenius trace at a good prime. Naive sums quadratic-character
// values of the two-division cubic (O(p)); BSGS pins the group order inside
// the Hasse interval by accumulating random point orders (O(p^(1/4))).
// Throws DomainError at bad primes, IndeterminateError if BSGS cannot
// resolve the order and p exceeds the naive fallback cap.
int64_t ap(const CurveProfile& profile, uint64_t p, const ApOptions& opts = {});

// File-backed trace store, one file per curve keyed by a digest of the
// minimal-model coefficients. Corrupt or truncated files (checksum mismatch)
// are treated as absent.
class TraceCache {
public:
    explicit TraceCache(std::filesystem::path dir);

    std::vector<TraceRecord> load(const CurveProfile& profile) const;
    void store(const CurveProfile& profile, const std::vector<TraceRecord>& records) const;
    std::filesystem::path path_for(const CurveProfile& profile) const;

    static std::string digest_hex(const WeierstrassCurve& minimal_curve);

private:
    std::filesystem::path dir_;
};

// Traces for all good primes p <= pmax, increasing. Cache (optional) is
// consulted first and updated with anything newly computed.
std::vector<TraceRecord> batch_traces(const CurveProfile& profile, uint64_t pmax,
                                      TraceCache* cache = nullptr,
                                      const ApOptions& opts = {});

// Streams TraceRecords in increasing p over good primes, skipping bad ones;
// backs witness searches whose stopping point is data-dependent.
class TraceSource {
public:
    explicit TraceSource(const CurveProfile& profile, TraceCache* cache = nullptr,
                         const ApOptions& opts = {});
    ~TraceSource();

    // next good-prime trace with p <= pmax; nullopt once the stream passes pmax
    std::optional<TraceRecord> next(uint64_t pmax);

private:
    const CurveProfile& profile_;
    TraceCache* cache_;
    ApOptions opts_;
    PrimeStream stream_;
    uint64_t pending_ = 0; // prime drawn past pmax, served first next time
    std::vector<TraceRecord> cached_;
    size_t cached_pos_ = 0;
    std::vector<TraceRecord> fresh_; // computed this session, flushed on destruction
};

} // namespace galrep

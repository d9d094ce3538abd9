#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>

#include "galrep/bounds.hpp"
#include "galrep/curve.hpp"
#include "galrep/reduction.hpp"

namespace galrep {

// Least prime of good reduction for both curves at which the traces differ,
// together with the conditional bound it is measured against.
struct DistinguishResult {
    uint64_t p = 0;
    int64_t ap1 = 0, ap2 = 0;
    BoundReport bound; // isogeny bound from rad(2 N_1 N_2)
    bool within_bound = false;
};

// Scans good-for-both primes p <= pcap in increasing order; absent when the
// curves agree on every such prime (reported as "no witness found", never as
// a proof of isogeny). Warns on CM inputs: the bound's hypotheses fail there.
// `progress` (optional) receives a line every 2^20 of scanned range.
std::optional<DistinguishResult> distinguishing_prime(const CurveProfile& prof1,
                                                      const CurveProfile& prof2,
                                                      uint64_t pcap,
                                                      TraceCache* cache = nullptr,
                                                      const ApOptions& opts = {},
                                                      std::ostream* progress = nullptr);

// Default scan cap: the conditional bound itself, clamped to 10^8 so a desk
// run on (secretly) isogenous inputs still terminates.
uint64_t default_distinguish_cap(const CurveProfile& prof1, const CurveProfile& prof2);

// Profiles of E and its quadratic twist E_D, D squarefree and not 0 or 1.
// Nontrivial twists of a non-CM curve are never isogenous over Q, so the
// pair is a guaranteed-valid input for distinguishing_prime.
std::pair<CurveProfile, CurveProfile> twist_pair(const WeierstrassCurve& e, const Int& d);

} // namespace galrep

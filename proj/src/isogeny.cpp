#include "galrep/isogeny.hpp"

#include <iostream>

#include "galrep/errors.hpp"

namespace galrep {

std::optional<DistinguishResult> distinguishing_prime(const CurveProfile& prof1,
                                                      const CurveProfile& prof2,
                                                      uint64_t pcap, TraceCache* cache,
                                                      const ApOptions& opts,
                                                      std::ostream* progress) {
    if (prof1.cm || prof2.cm)
        std::cerr << "warning: distinguishing_prime: CM curve given; the conditional "
                     "bound assumes both curves are non-CM\n";

    BoundReport bound = isogeny_bound(radical(2 * prof1.conductor_radical
                                              * prof2.conductor_radical));

    TraceSource src1(prof1, cache, opts);
    TraceSource src2(prof2, cache, opts);
    uint64_t next_tick = uint64_t(1) << 20;
    auto r1 = src1.next(pcap);
    auto r2 = src2.next(pcap);
    while (r1 && r2) {
        if (progress && r1->p >= next_tick) {
            *progress << "distinguish: scanned primes up to " << r1->p << " of " << pcap
                      << ", traces still equal\n";
            while (next_tick <= r1->p) next_tick += uint64_t(1) << 20;
        }
        if (r1->p < r2->p) {
            r1 = src1.next(pcap); // r1->p is a bad prime of the second curve
        } else if (r2->p < r1->p) {
            r2 = src2.next(pcap);
        } else {
            if (r1->ap != r2->ap) {
                DistinguishResult res;
                res.p = r1->p;
                res.ap1 = r1->ap;
                res.ap2 = r2->ap;
                res.within_bound = Int(res.p) <= bound.integer_bound;
                res.bound = std::move(bound);
                return res;
            }
            r1 = src1.next(pcap);
            r2 = src2.next(pcap);
        }
    }
    return std::nullopt;
}

uint64_t default_distinguish_cap(const CurveProfile& prof1, const CurveProfile& prof2) {
    Int bound = isogeny_bound(radical(2 * prof1.conductor_radical * prof2.conductor_radical))
                    .integer_bound;
    const Int cap = 100000000; // 10^8
    return (bound < cap ? bound : cap).get_ui();
}

std::pair<CurveProfile, CurveProfile> twist_pair(const WeierstrassCurve& e, const Int& d) {
    if (d == 0 || d == 1)
        throw DomainError("twist_pair: D must be squarefree and different from 0 and 1");
    CurveProfile base = curve_profile(e);
    if (base.cm)
        throw CmCurveError("twist_pair: CM curve refused (twists of a CM curve can be "
                           "isogenous)");
    CurveProfile twisted = curve_profile(quadratic_twist(e, d));
    return {std::move(base), std::move(twisted)};
}

} // namespace galrep

#pragma once

#include <cstdint>
#include <optional>

#include "galrep/curve.hpp"

namespace galrep::testutil {

struct Rng {
    uint64_t s;
    explicit Rng(uint64_t seed) : s(seed) {}
    uint64_t next() {
        s += 0x9e3779b97f4a7c15ull;
        uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    int64_t range(int64_t lo, int64_t hi) { // inclusive
        return lo + static_cast<int64_t>(next() % static_cast<uint64_t>(hi - lo + 1));
    }
};

// random nonsingular curve with small coefficients
inline WeierstrassCurve random_curve(Rng& rng, int64_t coeff_bound = 20) {
    while (true) {
        WeierstrassCurve e{Int(rng.range(0, 1)), Int(rng.range(-coeff_bound, coeff_bound)),
                           Int(rng.range(0, 1)), Int(rng.range(-coeff_bound, coeff_bound)),
                           Int(rng.range(-coeff_bound, coeff_bound))};
        try {
            invariants(e);
            return e;
        } catch (const SingularCurveError&) {
        }
    }
}

// random nonsingular non-CM curve
inline WeierstrassCurve random_non_cm_curve(Rng& rng, int64_t coeff_bound = 20) {
    while (true) {
        WeierstrassCurve e = random_curve(rng, coeff_bound);
        if (!is_cm(e)) return e;
    }
}

// random squarefree D with |D| <= bound, D != 0 (optionally excluding 1)
inline Int random_squarefree(Rng& rng, int64_t bound, bool exclude_one = false) {
    while (true) {
        int64_t d = rng.range(-bound, bound);
        if (d == 0) continue;
        if (exclude_one && d == 1) continue;
        Int dz(static_cast<long>(d));
        if (squarefree_part(dz) == dz) return dz;
    }
}

} // namespace galrep::testutil

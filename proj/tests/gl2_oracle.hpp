#pragma once

// Exhaustive GL2(F_ell) machinery shared by the unit and acceptance suites.

#include <cstdint>
#include <vector>

#include "galrep/arith.hpp"
#include "galrep/galois_image.hpp"

namespace galrep::gl2 {

struct Mat {
    uint64_t a, b, c, d;
};

inline uint64_t det_of(const Mat& m, uint64_t ell) {
    return (m.a * m.d % ell + ell - m.b * m.c % ell) % ell;
}

inline uint64_t tr_of(const Mat& m, uint64_t ell) { return (m.a + m.d) % ell; }

inline Mat mul(const Mat& x, const Mat& y, uint64_t ell) {
    return Mat{(x.a * y.a + x.b * y.c) % ell, (x.a * y.b + x.b * y.d) % ell,
               (x.c * y.a + x.d * y.c) % ell, (x.c * y.b + x.d * y.d) % ell};
}

inline bool is_scalar(const Mat& m, uint64_t ell) {
    return m.b == 0 && m.c == 0 && m.a == m.d && m.a % ell != 0;
}

inline bool projective_order_at_most_5(const Mat& m, uint64_t ell) {
    Mat power = m;
    for (int k = 1; k <= 5; ++k) {
        if (is_scalar(power, ell)) return true;
        power = mul(power, m, ell);
    }
    return false;
}

inline std::vector<Mat> all_invertible(uint64_t ell) {
    std::vector<Mat> out;
    for (uint64_t a = 0; a < ell; ++a)
        for (uint64_t b = 0; b < ell; ++b)
            for (uint64_t c = 0; c < ell; ++c)
                for (uint64_t d = 0; d < ell; ++d) {
                    Mat m{a, b, c, d};
                    if (det_of(m, ell) != 0) out.push_back(m);
                }
    return out;
}

inline uint64_t least_nonsquare(uint64_t ell) {
    for (uint64_t e = 2; e < ell; ++e)
        if (square_class_mod(e, ell) == SquareClass::NonSquare) return e;
    return 0;
}

inline ElementClassification classify_mat(const Mat& m, uint64_t ell) {
    return classify_element(tr_of(m, ell), det_of(m, ell), ell);
}

} // namespace galrep::gl2

#pragma once

#include <string>
#include <vector>

#include <gmpxx.h>

#include "galrep/arith.hpp"
#include "galrep/errors.hpp"

namespace galrep {

// y^2 + a1*xy + a3*y = x^3 + a2*x^2 + a4*x + a6, integral coefficients.
struct WeierstrassCurve {
    Int a1, a2, a3, a4, a6;

    bool operator==(const WeierstrassCurve&) const = default;
};

// Standard b/c-invariants plus the discriminant and j-invariant.
// Identities 4*b8 = b2*b6 - b4^2 and c4^3 - c6^2 = 1728*disc hold exactly.
struct CurveInvariants {
    Int b2, b4, b6, b8;
    Int c4, c6;
    Int disc;
    mpq_class j; // c4^3 / disc, reduced
};

// Coordinate change x = u^2 x' + r, y = u^3 y' + s u^2 x' + t mapping the
// input model to `curve`. Identity transform means the input was returned
// untouched.
struct ModelTransform {
    mpq_class u = 1, r = 0, s = 0, t = 0;

    bool is_identity() const { return u == 1 && r == 0 && s == 0 && t == 0; }
};

struct MinimalModel {
    WeierstrassCurve curve;
    ModelTransform transform;
    Int disc_min;
};

// Everything downstream modules need to know about a curve: its global
// minimal model, bad primes, rad(N_E) and the CM flag.
struct CurveProfile {
    WeierstrassCurve input;
    MinimalModel minimal;
    CurveInvariants minimal_invariants;
    std::vector<Int> bad_primes; // increasing; primes dividing disc_min
    Int conductor_radical;       // rad(disc_min) = rad(N_E)
    bool cm = false;
};

// c3*x^3 + c2*x^2 + c1*x + c0 with exact integer coefficients.
struct Cubic {
    Int c3, c2, c1, c0;

    Int discriminant() const;
    bool has_rational_root() const;
};

// c4*x^4 + c3*x^3 + c2*x^2 + c1*x + c0 with exact integer coefficients.
struct Quartic {
    Int c4, c3, c2, c1, c0;

    bool irreducible_over_q() const;
    // resolvent cubic of the monicized polynomial; same splitting behavior,
    // same discriminant as the quartic
    Cubic resolvent_cubic() const;
};

CurveInvariants invariants(const WeierstrassCurve& e);

// Global minimal model via Laska-Kraus-Connell (Kraus's conditions at 2, 3).
// An already-minimal input is returned unchanged with the identity transform.
MinimalModel minimal_model(const WeierstrassCurve& e);

// rad(disc_min) = rad(N_E): bad primes are exactly the primes dividing the
// minimal discriminant.
Int conductor_radical(const WeierstrassCurve& e);

// True iff j(E) is one of the 13 rational CM j-invariants.
bool is_cm(const WeierstrassCurve& e);
const std::vector<Int>& rational_cm_j_invariants();

// Quadratic twist by squarefree D != 0. With a1 = a3 = 0 this is literally
// y^2 = x^3 + a2*D*x^2 + a4*D^2*x + a6*D^3; otherwise the twist is formed on
// the (c4, c6) short model, (c4, c6) -> (D^2 c4, D^3 c6), which represents
// the same twist class for every squarefree D.
WeierstrassCurve quadratic_twist(const WeierstrassCurve& e, const Int& d);

// 4x^3 + b2 x^2 + 2 b4 x + b6; its splitting field is the 2-division field.
Cubic two_division_cubic(const WeierstrassCurve& e);

// 3x^4 + b2 x^3 + 3 b4 x^2 + 3 b6 x + b8: roots are the x-coordinates of the
// nonzero 3-torsion; the Galois action on them factors through PGL2(F_3) = S4.
Quartic three_division_quartic(const WeierstrassCurve& e);

// Profile assembly used by the reduction/certification layers.
CurveProfile curve_profile(const WeierstrassCurve& e);

// Apply a model transform exactly; throws DomainError if the resulting
// coefficients are not integral.
WeierstrassCurve apply_transform(const WeierstrassCurve& e, const ModelTransform& t);

// CLI text format: "a1,a2,a3,a4,a6" base-10 signed integers.
WeierstrassCurve parse_curve(const std::string& text);
std::string format_curve(const WeierstrassCurve& e);

} // namespace galrep

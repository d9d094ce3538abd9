#include "galrep/curve.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace galrep {

namespace {

// largest e with p^e | n (n != 0); cap avoids unbounded loops for n = 0
unsigned valuation(const Int& n, const Int& p) {
    Int m = n;
    unsigned v = 0;
    while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
        mpz_divexact(m.get_mpz_t(), m.get_mpz_t(), p.get_mpz_t());
        ++v;
    }
    return v;
}

Int pow_int(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

Int mod_nonneg(const Int& a, const Int& m) {
    Int r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

// Kraus's condition at 2: (c4, c6) arises from an integral model iff
// c6 = -1 (mod 4), or c4 = 0 (mod 16) and c6 = 0 or 8 (mod 32).
bool kraus_at_2(const Int& c4, const Int& c6) {
    if (mod_nonneg(c6, 4) == 3) return true;
    if (mod_nonneg(c4, 16) != 0) return false;
    Int m = mod_nonneg(c6, 32);
    return m == 0 || m == 8;
}

// Kraus's condition at 3: v3(c6) != 2.
bool kraus_at_3(const Int& c6) {
    if (c6 == 0) return true;
    return valuation(c6, 3) != 2;
}

// Reconstruct the canonical reduced model from admissible (c4, c6).
WeierstrassCurve curve_from_c4c6(const Int& c4, const Int& c6) {
    Int b2 = mod_nonneg(-c6, 12);
    if (b2 > 6) b2 -= 12; // balanced representative in (-6, 6]
    Int b4_num = b2 * b2 - c4;
    if (!mpz_divisible_ui_p(b4_num.get_mpz_t(), 24))
        throw DomainError("curve_from_c4c6: (c4, c6) not admissible (b4 division)");
    Int b4 = b4_num / 24;
    Int b6_n = -b2 * b2 * b2 + 36 * b2 * b4 - c6;
    if (!mpz_divisible_ui_p(b6_n.get_mpz_t(), 216))
        throw DomainError("curve_from_c4c6: (c4, c6) not admissible (b6 division)");
    Int b6 = b6_n / 216;
    Int a1 = mpz_odd_p(b2.get_mpz_t()) ? 1 : 0;
    Int a3 = mpz_odd_p(b6.get_mpz_t()) ? 1 : 0;
    WeierstrassCurve e;
    e.a1 = a1;
    e.a3 = a3;
    e.a2 = (b2 - a1) / 4;       // a1^2 = a1
    e.a4 = (b4 - a1 * a3) / 2;
    e.a6 = (b6 - a3) / 4;       // a3^2 = a3
    return e;
}

std::vector<Int> divisors_of(const Int& n) {
    std::vector<Int> divs{1};
    for (const auto& [p, e] : factorize(n)) {
        size_t base = divs.size();
        Int pk = 1;
        for (unsigned k = 1; k <= e; ++k) {
            pk *= p;
            for (size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
        }
    }
    return divs;
}

} // namespace

Int Cubic::discriminant() const {
    const Int &a = c3, &b = c2, &c = c1, &d = c0;
    return 18 * a * b * c * d - 4 * b * b * b * d + b * b * c * c
         - 4 * a * c * c * c - 27 * a * a * d * d;
}

bool Cubic::has_rational_root() const {
    if (c3 == 0) throw DomainError("Cubic: leading coefficient is zero");
    if (c0 == 0) return true; // x = 0
    // Monicize: X = c3*x gives X^3 + c2 X^2 + c1 c3 X + c0 c3^2, so rational
    // roots correspond to integer divisors of c0 c3^2.
    Int g2 = c2, g1 = c1 * c3, g0 = c0 * c3 * c3;
    for (const Int& d : divisors_of(g0)) {
        for (int sign : {1, -1}) {
            Int x = sign * d;
            if (((x + g2) * x + g1) * x + g0 == 0) return true;
        }
    }
    return false;
}

namespace {

// integer roots of monic t^2 - B t + C
bool monic_quadratic_has_integer_root(const Int& B, const Int& C) {
    Int disc = B * B - 4 * C;
    if (disc < 0 || !mpz_perfect_square_p(disc.get_mpz_t())) return false;
    Int s;
    mpz_sqrt(s.get_mpz_t(), disc.get_mpz_t());
    return mpz_even_p(Int(B + s).get_mpz_t());
}

} // namespace

bool Quartic::irreducible_over_q() const {
    if (c4 == 0) throw DomainError("Quartic: leading coefficient is zero");
    // monicize: X = c4 x gives X^4 + g3 X^3 + g2 X^2 + g1 X + g0; monic
    // integer polynomials factor over Q iff they factor over Z (Gauss)
    Int g3 = c3, g2 = c4 * c2, g1 = c4 * c4 * c1, g0 = c4 * c4 * c4 * c0;
    if (g0 == 0) return false;
    // linear factor: integer root divides g0
    for (const Int& d : divisors_of(g0))
        for (int sign : {1, -1}) {
            Int x = sign * d;
            if ((((x + g3) * x + g2) * x + g1) * x + g0 == 0) return false;
        }
    // quadratic factor (X^2 + bX + c)(X^2 + eX + k) with c k = g0
    for (const Int& cdiv : divisors_of(g0))
        for (int sign : {1, -1}) {
            Int c = sign * cdiv;
            if (!mpz_divisible_p(g0.get_mpz_t(), c.get_mpz_t())) continue;
            Int k = g0 / c;
            // b + e = g3, bk + ce = g1, c + k + be = g2
            if (k != c) {
                // b(k - c) = g1 - c g3
                Int num = g1 - c * g3, den = k - c;
                if (!mpz_divisible_p(num.get_mpz_t(), den.get_mpz_t())) continue;
                Int b = num / den;
                Int e = g3 - b;
                if (c + k + b * e == g2) return false;
            } else {
                // b + e = g3 and be = g2 - 2c; consistency: c g3 = g1
                if (c * g3 != g1) continue;
                if (monic_quadratic_has_integer_root(g3, g2 - 2 * c)) return false;
            }
        }
    return true;
}

Cubic Quartic::resolvent_cubic() const {
    // monicized quartic X^4 + pX^3 + qX^2 + rX + s
    Int p = c3, q = c4 * c2, r = c4 * c4 * c1, s = c4 * c4 * c4 * c0;
    return Cubic{1, -q, p * r - 4 * s, -(p * p * s - 4 * q * s + r * r)};
}

CurveInvariants invariants(const WeierstrassCurve& e) {
    CurveInvariants inv;
    inv.b2 = e.a1 * e.a1 + 4 * e.a2;
    inv.b4 = 2 * e.a4 + e.a1 * e.a3;
    inv.b6 = e.a3 * e.a3 + 4 * e.a6;
    inv.b8 = e.a1 * e.a1 * e.a6 + 4 * e.a2 * e.a6 - e.a1 * e.a3 * e.a4
           + e.a2 * e.a3 * e.a3 - e.a4 * e.a4;
    inv.c4 = inv.b2 * inv.b2 - 24 * inv.b4;
    inv.c6 = -inv.b2 * inv.b2 * inv.b2 + 36 * inv.b2 * inv.b4 - 216 * inv.b6;
    inv.disc = -inv.b2 * inv.b2 * inv.b8 - 8 * inv.b4 * inv.b4 * inv.b4
             - 27 * inv.b6 * inv.b6 + 9 * inv.b2 * inv.b4 * inv.b6;
    if (inv.disc == 0)
        throw SingularCurveError("invariants: discriminant is zero");
    inv.j = mpq_class(inv.c4 * inv.c4 * inv.c4, inv.disc);
    inv.j.canonicalize();
    return inv;
}

WeierstrassCurve apply_transform(const WeierstrassCurve& e, const ModelTransform& tr) {
    const mpq_class u = tr.u, r = tr.r, s = tr.s, t = tr.t;
    if (u == 0) throw DomainError("apply_transform: u = 0");
    mpq_class u2 = u * u, u3 = u2 * u, u4 = u2 * u2, u6 = u3 * u3;
    mpq_class a1(e.a1), a2(e.a2), a3(e.a3), a4(e.a4), a6(e.a6);
    mpq_class n1 = (a1 + 2 * s) / u;
    mpq_class n2 = (a2 - s * a1 + 3 * r - s * s) / u2;
    mpq_class n3 = (a3 + r * a1 + 2 * t) / u3;
    mpq_class n4 = (a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t) / u4;
    mpq_class n6 = (a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1) / u6;
    for (const mpq_class* q : {&n1, &n2, &n3, &n4, &n6})
        if (q->get_den() != 1)
            throw DomainError("apply_transform: transform does not produce an integral model");
    return WeierstrassCurve{n1.get_num(), n2.get_num(), n3.get_num(),
                            n4.get_num(), n6.get_num()};
}

MinimalModel minimal_model(const WeierstrassCurve& e) {
    CurveInvariants inv = invariants(e);

    Int u = 1;
    for (const auto& [p, vdisc] : factorize(inv.disc)) {
        if (vdisc < 12) continue;
        unsigned kmax = vdisc / 12;
        if (inv.c4 != 0) kmax = std::min(kmax, valuation(inv.c4, p) / 4);
        if (inv.c6 != 0) kmax = std::min(kmax, valuation(inv.c6, p) / 6);
        unsigned k = kmax;
        if (p == 2 || p == 3) {
            while (k > 0) {
                Int c4k = inv.c4 / pow_int(p, 4 * k);
                Int c6k = inv.c6 / pow_int(p, 6 * k);
                bool ok = (p == 2) ? kraus_at_2(c4k, c6k) : kraus_at_3(c6k);
                if (ok) break;
                --k;
            }
        }
        u *= pow_int(p, k);
    }

    MinimalModel mm;
    if (u == 1) {
        mm.curve = e;
        mm.transform = ModelTransform{};
        mm.disc_min = inv.disc;
        return mm;
    }

    Int c4m = inv.c4 / pow_int(u, 4);
    Int c6m = inv.c6 / pow_int(u, 6);
    mm.curve = curve_from_c4c6(c4m, c6m);
    CurveInvariants check = invariants(mm.curve);
    if (check.c4 != c4m || check.c6 != c6m)
        throw DomainError("minimal_model: reconstruction mismatch");
    mm.disc_min = check.disc;

    mpq_class uq(u);
    mpq_class s = (uq * mm.curve.a1 - mpq_class(e.a1)) / 2;
    mpq_class r = (uq * uq * check.b2 - mpq_class(inv.b2)) / 12;
    mpq_class t = (uq * uq * uq * mm.curve.a3 - mpq_class(e.a3) - r * e.a1) / 2;
    mm.transform = ModelTransform{uq, r, s, t};
    if (apply_transform(e, mm.transform) != mm.curve)
        throw DomainError("minimal_model: transform verification failed");
    return mm;
}

Int conductor_radical(const WeierstrassCurve& e) {
    return radical(minimal_model(e).disc_min);
}

const std::vector<Int>& rational_cm_j_invariants() {
    // j-invariants of the 13 imaginary quadratic orders of class number one
    // (discriminants -3,-4,-7,-8,-11,-12,-16,-19,-27,-28,-43,-67,-163).
    static const std::vector<Int> values = {
        Int(0),
        Int(1728),
        Int(-3375),
        Int(8000),
        Int(-32768),
        Int(54000),
        Int(287496),
        Int(-884736),
        Int(-12288000),
        Int(16581375),
        Int(-884736000),
        Int("-147197952000"),
        Int("-262537412640768000"),
    };
    return values;
}

bool is_cm(const WeierstrassCurve& e) {
    CurveInvariants inv = invariants(e);
    if (inv.j.get_den() != 1) return false;
    const auto& list = rational_cm_j_invariants();
    return std::find(list.begin(), list.end(), inv.j.get_num()) != list.end();
}

WeierstrassCurve quadratic_twist(const WeierstrassCurve& e, const Int& d) {
    if (d == 0) throw DomainError("quadratic_twist: D = 0");
    if (squarefree_part(d) != d)
        throw DomainError("quadratic_twist: D is not squarefree");
    if (e.a1 == 0 && e.a3 == 0)
        return WeierstrassCurve{0, e.a2 * d, 0, e.a4 * d * d, e.a6 * d * d * d};
    CurveInvariants inv = invariants(e);
    return WeierstrassCurve{0, 0, 0, -27 * d * d * inv.c4, -54 * d * d * d * inv.c6};
}

Cubic two_division_cubic(const WeierstrassCurve& e) {
    Int b2 = e.a1 * e.a1 + 4 * e.a2;
    Int b4 = 2 * e.a4 + e.a1 * e.a3;
    Int b6 = e.a3 * e.a3 + 4 * e.a6;
    return Cubic{4, b2, 2 * b4, b6};
}

Quartic three_division_quartic(const WeierstrassCurve& e) {
    Int b2 = e.a1 * e.a1 + 4 * e.a2;
    Int b4 = 2 * e.a4 + e.a1 * e.a3;
    Int b6 = e.a3 * e.a3 + 4 * e.a6;
    Int b8 = e.a1 * e.a1 * e.a6 + 4 * e.a2 * e.a6 - e.a1 * e.a3 * e.a4
           + e.a2 * e.a3 * e.a3 - e.a4 * e.a4;
    return Quartic{3, b2, 3 * b4, 3 * b6, b8};
}

CurveProfile curve_profile(const WeierstrassCurve& e) {
    CurveProfile prof;
    prof.input = e;
    prof.minimal = minimal_model(e);
    prof.minimal_invariants = invariants(prof.minimal.curve);
    Int rad = 1;
    for (const auto& [p, exp] : factorize(prof.minimal.disc_min)) {
        prof.bad_primes.push_back(p);
        rad *= p;
    }
    prof.conductor_radical = rad;
    prof.cm = is_cm(prof.minimal.curve);
    return prof;
}

WeierstrassCurve parse_curve(const std::string& text) {
    std::string cleaned;
    cleaned.reserve(text.size());
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) cleaned.push_back(c);
    std::vector<std::string> parts;
    std::stringstream ss(cleaned);
    std::string item;
    while (std::getline(ss, item, ',')) parts.push_back(item);
    if (parts.size() != 5)
        throw ParseError("curve text must be 5 comma-separated integers a1,a2,a3,a4,a6");
    Int vals[5];
    for (size_t i = 0; i < 5; ++i) {
        if (parts[i].empty() || mpz_set_str(vals[i].get_mpz_t(), parts[i].c_str(), 10) != 0)
            throw ParseError("invalid integer in curve text: '" + parts[i] + "'");
    }
    return WeierstrassCurve{vals[0], vals[1], vals[2], vals[3], vals[4]};
}

std::string format_curve(const WeierstrassCurve& e) {
    std::ostringstream os;
    os << e.a1 << "," << e.a2 << "," << e.a3 << "," << e.a4 << "," << e.a6;
    return os.str();
}

} // namespace galrep

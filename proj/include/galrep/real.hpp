#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>
#include <mpfr.h>

#include "galrep/arith.hpp"

namespace galrep {

// Thin RAII wrapper over mpfr_t with an explicit rounding mode carried by
// each value. Bound formulas are evaluated twice, once rounding every step
// down and once up; the two results bracket the exact value, which is what
// certifies a ceiling.
class Real {
public:
    explicit Real(mpfr_prec_t prec = 128, mpfr_rnd_t rnd = MPFR_RNDN)
        : rnd_(rnd) {
        mpfr_init2(v_, prec);
        mpfr_set_zero(v_, 1);
    }
    Real(const Real& o) : rnd_(o.rnd_) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    Real(Real&& o) noexcept : rnd_(o.rnd_) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_swap(v_, o.v_);
    }
    Real& operator=(Real o) {
        mpfr_swap(v_, o.v_);
        rnd_ = o.rnd_;
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    mpfr_rnd_t rnd() const { return rnd_; }

    static Real from_int(const Int& n, mpfr_prec_t prec, mpfr_rnd_t rnd) {
        Real r(prec, rnd);
        mpfr_set_z(r.v_, n.get_mpz_t(), rnd);
        return r;
    }
    static Real from_rational(const mpq_class& q, mpfr_prec_t prec, mpfr_rnd_t rnd) {
        Real r(prec, rnd);
        mpfr_set_q(r.v_, q.get_mpq_t(), rnd);
        return r;
    }
    static Real from_ui(uint64_t n, mpfr_prec_t prec, mpfr_rnd_t rnd) {
        Real r(prec, rnd);
        mpfr_set_ui(r.v_, n, rnd);
        return r;
    }

    Real add(const Real& o) const { return bin(o, mpfr_add); }
    Real sub(const Real& o) const { return bin(o, mpfr_sub); }
    Real mul(const Real& o) const { return bin(o, mpfr_mul); }
    Real div(const Real& o) const { return bin(o, mpfr_div); }
    Real mul_ui(uint64_t k) const {
        Real r(prec(), rnd_);
        mpfr_mul_ui(r.v_, v_, k, rnd_);
        return r;
    }
    Real add_ui(uint64_t k) const {
        Real r(prec(), rnd_);
        mpfr_add_ui(r.v_, v_, k, rnd_);
        return r;
    }
    Real log() const { return un(mpfr_log); }
    Real exp() const { return un(mpfr_exp); }
    Real sqrt() const { return un(mpfr_sqrt); }
    Real square() const { return mul(*this); }
    Real neg() const {
        Real r(prec(), rnd_);
        mpfr_neg(r.v_, v_, rnd_);
        return r;
    }

    int cmp(const Real& o) const { return mpfr_cmp(v_, o.v_); }
    bool operator<(const Real& o) const { return cmp(o) < 0; }
    bool operator<=(const Real& o) const { return cmp(o) <= 0; }
    int cmp_rational(const mpq_class& q) const { return mpfr_cmp_q(v_, q.get_mpq_t()); }

    Int ceil() const {
        Real c(prec(), rnd_);
        mpfr_ceil(c.v_, v_);
        Int out;
        mpfr_get_z(out.get_mpz_t(), c.v_, MPFR_RNDN);
        return out;
    }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    // Round-to-nearest decimal string with the given number of significant
    // digits, trailing zeros trimmed. Used for report serialization.
    std::string to_decimal(int significant = 24) const {
        mpfr_exp_t e;
        char* s = mpfr_get_str(nullptr, &e, 10, significant, v_, MPFR_RNDN);
        std::string digits(s);
        mpfr_free_str(s);
        bool negative = !digits.empty() && digits[0] == '-';
        if (negative) digits.erase(0, 1);
        while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
        std::string out;
        if (e <= 0) {
            out = "0." + std::string(static_cast<size_t>(-e), '0') + digits;
        } else if (static_cast<size_t>(e) >= digits.size()) {
            out = digits + std::string(static_cast<size_t>(e) - digits.size(), '0');
        } else {
            out = digits.substr(0, static_cast<size_t>(e)) + "." + digits.substr(static_cast<size_t>(e));
        }
        return negative ? "-" + out : out;
    }

    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

private:
    using BinOp = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_srcptr, mpfr_rnd_t);
    using UnOp = int (*)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t);

    Real bin(const Real& o, BinOp op) const {
        Real r(prec(), rnd_);
        op(r.v_, v_, o.v_, rnd_);
        return r;
    }
    Real un(UnOp op) const {
        Real r(prec(), rnd_);
        op(r.v_, v_, rnd_);
        return r;
    }

    mpfr_t v_;
    mpfr_rnd_t rnd_;
};

} // namespace galrep

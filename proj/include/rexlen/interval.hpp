#pragma once

// Directed-rounding interval arithmetic over MPFR. Certificate formulas mix
// exact integers with real powers like p^(1 - log2(n/log2 p)); every such
// value is enclosed in [lo, hi] and comparisons against exact rationals are
// decided by containment, retrying at higher precision when indeterminate.

#include <gmpxx.h>
#include <mpfr.h>

#include <stdexcept>
#include <string>

namespace rexlen {

struct PrecisionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Interval {
public:
    explicit Interval(mpfr_prec_t prec = 128) : prec_(prec) {
        mpfr_init2(lo_, prec_);
        mpfr_init2(hi_, prec_);
        mpfr_set_zero(lo_, 1);
        mpfr_set_zero(hi_, 1);
    }
    Interval(const Interval& o) : Interval(o.prec_) {
        mpfr_set(lo_, o.lo_, MPFR_RNDD);
        mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }
    Interval& operator=(const Interval& o) {
        if (this != &o) {
            mpfr_set_prec(lo_, o.prec_);
            mpfr_set_prec(hi_, o.prec_);
            prec_ = o.prec_;
            mpfr_set(lo_, o.lo_, MPFR_RNDD);
            mpfr_set(hi_, o.hi_, MPFR_RNDU);
        }
        return *this;
    }
    ~Interval() {
        mpfr_clear(lo_);
        mpfr_clear(hi_);
    }

    mpfr_prec_t prec() const { return prec_; }

    static Interval of_long(long v, mpfr_prec_t prec) {
        Interval r(prec);
        mpfr_set_si(r.lo_, v, MPFR_RNDD);
        mpfr_set_si(r.hi_, v, MPFR_RNDU);
        return r;
    }
    static Interval of_mpz(const mpz_class& v, mpfr_prec_t prec) {
        Interval r(prec);
        mpfr_set_z(r.lo_, v.get_mpz_t(), MPFR_RNDD);
        mpfr_set_z(r.hi_, v.get_mpz_t(), MPFR_RNDU);
        return r;
    }
    static Interval of_mpq(const mpq_class& v, mpfr_prec_t prec) {
        Interval r(prec);
        mpfr_set_q(r.lo_, v.get_mpq_t(), MPFR_RNDD);
        mpfr_set_q(r.hi_, v.get_mpq_t(), MPFR_RNDU);
        return r;
    }

    friend Interval operator+(const Interval& a, const Interval& b) {
        Interval r(std::max(a.prec_, b.prec_));
        mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
        mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
        return r;
    }
    friend Interval operator-(const Interval& a, const Interval& b) {
        Interval r(std::max(a.prec_, b.prec_));
        mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
        mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
        return r;
    }
    friend Interval operator*(const Interval& a, const Interval& b) {
        Interval r(std::max(a.prec_, b.prec_));
        mpfr_t t;
        mpfr_init2(t, r.prec_);
        bool first = true;
        for (int i = 0; i < 4; ++i) {
            mpfr_srcptr x = i & 1 ? a.hi_ : a.lo_;
            mpfr_srcptr y = i & 2 ? b.hi_ : b.lo_;
            mpfr_mul(t, x, y, MPFR_RNDD);
            if (first || mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
            mpfr_mul(t, x, y, MPFR_RNDU);
            if (first || mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
            first = false;
        }
        mpfr_clear(t);
        return r;
    }
    friend Interval operator/(const Interval& a, const Interval& b) {
        if (mpfr_sgn(b.lo_) <= 0 && mpfr_sgn(b.hi_) >= 0)
            throw PrecisionError("interval division by an interval containing zero");
        Interval r(std::max(a.prec_, b.prec_));
        mpfr_t t;
        mpfr_init2(t, r.prec_);
        bool first = true;
        for (int i = 0; i < 4; ++i) {
            mpfr_srcptr x = i & 1 ? a.hi_ : a.lo_;
            mpfr_srcptr y = i & 2 ? b.hi_ : b.lo_;
            mpfr_div(t, x, y, MPFR_RNDD);
            if (first || mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
            mpfr_div(t, x, y, MPFR_RNDU);
            if (first || mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
            first = false;
        }
        mpfr_clear(t);
        return r;
    }

    // monotone increasing functions on positive inputs
    static Interval log2(const Interval& a) {
        if (mpfr_sgn(a.lo_) <= 0) throw PrecisionError("log2 of a nonpositive interval");
        Interval r(a.prec_);
        mpfr_log2(r.lo_, a.lo_, MPFR_RNDD);
        mpfr_log2(r.hi_, a.hi_, MPFR_RNDU);
        return r;
    }
    static Interval ln(const Interval& a) {
        if (mpfr_sgn(a.lo_) <= 0) throw PrecisionError("ln of a nonpositive interval");
        Interval r(a.prec_);
        mpfr_log(r.lo_, a.lo_, MPFR_RNDD);
        mpfr_log(r.hi_, a.hi_, MPFR_RNDU);
        return r;
    }
    static Interval exp2(const Interval& a) {
        Interval r(a.prec_);
        mpfr_exp2(r.lo_, a.lo_, MPFR_RNDD);
        mpfr_exp2(r.hi_, a.hi_, MPFR_RNDU);
        return r;
    }
    // base^expo for positive base
    static Interval pow(const Interval& base, const Interval& expo) {
        return exp2(expo * log2(base));
    }

    static Interval max(const Interval& a, const Interval& b) {
        Interval r(std::max(a.prec_, b.prec_));
        mpfr_max(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
        mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
        return r;
    }

    bool definitely_less(const mpq_class& x) const {
        return mpfr_cmp_q(hi_, const_cast<mpq_class&>(x).get_mpq_t()) < 0;
    }
    bool definitely_greater(const mpq_class& x) const {
        return mpfr_cmp_q(lo_, const_cast<mpq_class&>(x).get_mpq_t()) > 0;
    }
    bool is_point() const { return mpfr_cmp(lo_, hi_) == 0; }

    // floor(value * 10^digits) when both endpoints agree on it
    bool fixed_trunc(int digits, mpz_class& out) const {
        mpfr_t scale, a, b;
        mpfr_init2(scale, prec_);
        mpfr_init2(a, prec_);
        mpfr_init2(b, prec_);
        mpfr_ui_pow_ui(scale, 10, static_cast<unsigned long>(digits), MPFR_RNDN);
        mpfr_mul(a, lo_, scale, MPFR_RNDD);
        mpfr_mul(b, hi_, scale, MPFR_RNDU);
        mpfr_floor(a, a);
        mpfr_floor(b, b);
        bool ok = mpfr_cmp(a, b) == 0;
        if (ok) {
            mpz_class z;
            mpfr_get_z(z.get_mpz_t(), a, MPFR_RNDN);
            out = z;
        }
        mpfr_clear(scale);
        mpfr_clear(a);
        mpfr_clear(b);
        return ok;
    }

    // ceil(value) when both endpoints agree on it
    bool ceiling(mpz_class& out) const {
        mpfr_t a, b;
        mpfr_init2(a, prec_);
        mpfr_init2(b, prec_);
        mpfr_ceil(a, lo_);
        mpfr_ceil(b, hi_);
        bool ok = mpfr_cmp(a, b) == 0;
        if (ok) mpfr_get_z(out.get_mpz_t(), a, MPFR_RNDN);
        mpfr_clear(a);
        mpfr_clear(b);
        return ok;
    }

    double lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
    double hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }

    std::string brief(int digits = 6) const {
        char buf[64];
        mpfr_snprintf(buf, sizeof buf, "%.*Rg", digits, lo_);
        std::string s(buf);
        if (!is_point()) {
            mpfr_snprintf(buf, sizeof buf, "%.*Rg", digits, hi_);
            if (s != buf) s += ".." + std::string(buf);
        }
        return s;
    }

private:
    mpfr_prec_t prec_;
    mpfr_t lo_, hi_;
};

// Evaluate at growing precision until the comparison against x is decided.
// eval: mpfr_prec_t -> Interval. Returns -1 (below), +1 (above); exact
// equality is reported as 0 when the interval collapses onto x.
template <typename F>
inline int compare_with_widening(F&& eval, const mpq_class& x, mpfr_prec_t start = 96,
                                 mpfr_prec_t limit = 1 << 16) {
    for (mpfr_prec_t p = start; p <= limit; p *= 2) {
        Interval v = eval(p);
        if (v.definitely_less(x)) return -1;
        if (v.definitely_greater(x)) return 1;
        if (v.is_point() && !v.definitely_less(x) && !v.definitely_greater(x)) return 0;
    }
    throw PrecisionError("comparison stayed indeterminate up to the precision limit");
}

// floor(value * 10^digits) with widening; the usual route to fixed decimals.
template <typename F>
inline mpz_class fixed_trunc_with_widening(F&& eval, int digits, mpfr_prec_t start = 96,
                                           mpfr_prec_t limit = 1 << 16) {
    for (mpfr_prec_t p = start; p <= limit; p *= 2) {
        mpz_class out;
        if (eval(p).fixed_trunc(digits, out)) return out;
    }
    throw PrecisionError("fixed-point truncation stayed indeterminate up to the precision limit");
}

} // namespace rexlen

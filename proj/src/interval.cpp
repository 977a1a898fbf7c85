#include "affint/interval.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace affint {

Interval::Interval(mpfr_prec_t prec) : prec_(prec) {
    mpfr_init2(lo_, prec);
    mpfr_init2(hi_, prec);
    mpfr_set_zero(lo_, 1);
    mpfr_set_zero(hi_, 1);
}

Interval::Interval(const Interval& o) : prec_(o.prec_) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& o) noexcept : prec_(o.prec_) {
    mpfr_init2(lo_, prec_);
    mpfr_init2(hi_, prec_);
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
}

Interval& Interval::operator=(const Interval& o) {
    if (this != &o) {
        if (prec_ != o.prec_) {
            mpfr_set_prec(lo_, o.prec_);
            mpfr_set_prec(hi_, o.prec_);
            prec_ = o.prec_;
        }
        mpfr_set(lo_, o.lo_, MPFR_RNDD);
        mpfr_set(hi_, o.hi_, MPFR_RNDU);
    }
    return *this;
}

Interval& Interval::operator=(Interval&& o) noexcept {
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
    std::swap(prec_, o.prec_);
    return *this;
}

Interval::~Interval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
}

Interval Interval::from_rational(const Rational& q, mpfr_prec_t prec) {
    Interval r(prec);
    mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
    return r;
}

Interval Interval::operator+(const Interval& o) const {
    Interval r(std::max(prec_, o.prec_));
    mpfr_add(r.lo_, lo_, o.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, hi_, o.hi_, MPFR_RNDU);
    return r;
}

Interval Interval::operator-(const Interval& o) const {
    Interval r(std::max(prec_, o.prec_));
    mpfr_sub(r.lo_, lo_, o.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, hi_, o.lo_, MPFR_RNDU);
    return r;
}

Interval Interval::operator-() const {
    Interval r(prec_);
    mpfr_neg(r.lo_, hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, lo_, MPFR_RNDU);
    return r;
}

Interval Interval::operator*(const Interval& o) const {
    Interval r(std::max(prec_, o.prec_));
    mpfr_t t;
    mpfr_init2(t, r.prec_);
    bool first = true;
    const mpfr_srcptr as[2] = {lo_, hi_};
    const mpfr_srcptr bs[2] = {o.lo_, o.hi_};
    for (auto a : as)
        for (auto b : bs) {
            mpfr_mul(t, a, b, MPFR_RNDD);
            if (first || mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
            mpfr_mul(t, a, b, MPFR_RNDU);
            if (first || mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
            first = false;
        }
    mpfr_clear(t);
    return r;
}

Interval Interval::operator/(const Interval& o) const {
    if (o.contains_zero()) throw PoleError("division by an interval containing zero");
    Interval r(std::max(prec_, o.prec_));
    mpfr_t t;
    mpfr_init2(t, r.prec_);
    bool first = true;
    const mpfr_srcptr as[2] = {lo_, hi_};
    const mpfr_srcptr bs[2] = {o.lo_, o.hi_};
    for (auto a : as)
        for (auto b : bs) {
            mpfr_div(t, a, b, MPFR_RNDD);
            if (first || mpfr_cmp(t, r.lo_) < 0) mpfr_set(r.lo_, t, MPFR_RNDD);
            mpfr_div(t, a, b, MPFR_RNDU);
            if (first || mpfr_cmp(t, r.hi_) > 0) mpfr_set(r.hi_, t, MPFR_RNDU);
            first = false;
        }
    mpfr_clear(t);
    return r;
}

Interval Interval::pow_int(long n) const {
    Interval r(prec_);
    if (n == 0) {
        mpfr_set_ui(r.lo_, 1, MPFR_RNDD);
        mpfr_set_ui(r.hi_, 1, MPFR_RNDU);
        return r;
    }
    if (n < 0) {
        Interval one(prec_);
        mpfr_set_ui(one.lo_, 1, MPFR_RNDD);
        mpfr_set_ui(one.hi_, 1, MPFR_RNDU);
        return one / pow_int(-n);
    }
    bool even = n % 2 == 0;
    if (!even || mpfr_sgn(lo_) >= 0) {
        mpfr_pow_si(r.lo_, lo_, n, MPFR_RNDD);
        mpfr_pow_si(r.hi_, hi_, n, MPFR_RNDU);
    } else if (mpfr_sgn(hi_) <= 0) {
        mpfr_pow_si(r.lo_, hi_, n, MPFR_RNDD);
        mpfr_pow_si(r.hi_, lo_, n, MPFR_RNDU);
    } else {
        // even power across zero
        mpfr_set_zero(r.lo_, 1);
        mpfr_t a, b;
        mpfr_init2(a, prec_);
        mpfr_init2(b, prec_);
        mpfr_pow_si(a, lo_, n, MPFR_RNDU);
        mpfr_pow_si(b, hi_, n, MPFR_RNDU);
        mpfr_set(r.hi_, mpfr_cmp(a, b) > 0 ? a : b, MPFR_RNDU);
        mpfr_clear(a);
        mpfr_clear(b);
    }
    return r;
}

Interval Interval::pow_rational(const Rational& q) const {
    if (q.get_den() == 1) {
        if (!q.get_num().fits_slong_p()) throw ExprError("exponent too large");
        return pow_int(q.get_num().get_si());
    }
    if (mpfr_sgn(lo_) < 0)
        throw PoleError("fractional power of an enclosure reaching below zero");
    if (sgn(q) < 0 && mpfr_sgn(lo_) <= 0)
        throw PoleError("negative fractional power of an enclosure reaching zero");
    // x^q = exp(q ln x), monotone in x for either sign of q
    Interval lx = ln_or_zero_edge();
    Interval qq = Interval::from_rational(q, prec_);
    Interval ex = (lx * qq).exp();
    if (mpfr_zero_p(lo_)) {
        // lower endpoint is exactly 0 and q > 0: result lower bound is 0
        mpfr_set_zero(ex.lo_, 1);
    }
    return ex;
}

// helper used by pow_rational: ln that tolerates an exact-zero lower endpoint
Interval Interval::ln_or_zero_edge() const {
    Interval r(prec_);
    if (mpfr_zero_p(lo_))
        mpfr_set_inf(r.lo_, -1);
    else
        mpfr_log(r.lo_, lo_, MPFR_RNDD);
    mpfr_log(r.hi_, hi_, MPFR_RNDU);
    return r;
}

Interval Interval::exp() const {
    Interval r(prec_);
    mpfr_exp(r.lo_, lo_, MPFR_RNDD);
    mpfr_exp(r.hi_, hi_, MPFR_RNDU);
    return r;
}

Interval Interval::ln() const {
    if (mpfr_sgn(lo_) <= 0) throw PoleError("log of a non-positive enclosure");
    Interval r(prec_);
    mpfr_log(r.lo_, lo_, MPFR_RNDD);
    mpfr_log(r.hi_, hi_, MPFR_RNDU);
    return r;
}

Interval Interval::sqrt() const {
    if (mpfr_sgn(lo_) < 0) throw PoleError("square root of an enclosure reaching below zero");
    Interval r(prec_);
    mpfr_sqrt(r.lo_, lo_, MPFR_RNDD);
    mpfr_sqrt(r.hi_, hi_, MPFR_RNDU);
    return r;
}

namespace {
// definite sign of f at a point, 0 when rounding leaves it ambiguous
int definite_sign(int (*f)(mpfr_ptr, mpfr_srcptr, mpfr_rnd_t), mpfr_srcptr x,
                  mpfr_prec_t prec) {
    mpfr_t d, u;
    mpfr_init2(d, prec);
    mpfr_init2(u, prec);
    f(d, x, MPFR_RNDD);
    f(u, x, MPFR_RNDU);
    int s = 0;
    if (mpfr_sgn(d) > 0 && mpfr_sgn(u) > 0) s = 1;
    if (mpfr_sgn(d) < 0 && mpfr_sgn(u) < 0) s = -1;
    mpfr_clear(d);
    mpfr_clear(u);
    return s;
}
}  // namespace

Interval Interval::sin() const {
    // monotone on the interval iff cos keeps a definite sign at both endpoints
    int sa = definite_sign(mpfr_cos, lo_, prec_);
    int sb = definite_sign(mpfr_cos, hi_, prec_);
    Interval r(prec_);
    if (sa != 0 && sa == sb) {
        mpfr_t a, b;
        mpfr_init2(a, prec_);
        mpfr_init2(b, prec_);
        mpfr_sin(a, lo_, MPFR_RNDD);
        mpfr_sin(b, hi_, MPFR_RNDD);
        mpfr_set(r.lo_, mpfr_cmp(a, b) < 0 ? a : b, MPFR_RNDD);
        mpfr_sin(a, lo_, MPFR_RNDU);
        mpfr_sin(b, hi_, MPFR_RNDU);
        mpfr_set(r.hi_, mpfr_cmp(a, b) > 0 ? a : b, MPFR_RNDU);
        mpfr_clear(a);
        mpfr_clear(b);
    } else {
        mpfr_set_si(r.lo_, -1, MPFR_RNDD);
        mpfr_set_si(r.hi_, 1, MPFR_RNDU);
    }
    return r;
}

Interval Interval::cos() const {
    int sa = definite_sign(mpfr_sin, lo_, prec_);
    int sb = definite_sign(mpfr_sin, hi_, prec_);
    Interval r(prec_);
    if (sa != 0 && sa == sb) {
        mpfr_t a, b;
        mpfr_init2(a, prec_);
        mpfr_init2(b, prec_);
        mpfr_cos(a, lo_, MPFR_RNDD);
        mpfr_cos(b, hi_, MPFR_RNDD);
        mpfr_set(r.lo_, mpfr_cmp(a, b) < 0 ? a : b, MPFR_RNDD);
        mpfr_cos(a, lo_, MPFR_RNDU);
        mpfr_cos(b, hi_, MPFR_RNDU);
        mpfr_set(r.hi_, mpfr_cmp(a, b) > 0 ? a : b, MPFR_RNDU);
        mpfr_clear(a);
        mpfr_clear(b);
    } else {
        mpfr_set_si(r.lo_, -1, MPFR_RNDD);
        mpfr_set_si(r.hi_, 1, MPFR_RNDU);
    }
    return r;
}

Interval Interval::tan() const { return sin() / cos(); }
Interval Interval::cot() const { return cos() / sin(); }

bool Interval::contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }
bool Interval::excludes_zero() const { return mpfr_sgn(lo_) > 0 || mpfr_sgn(hi_) < 0; }

bool Interval::width_below(double bound) const {
    mpfr_t w;
    mpfr_init2(w, prec_);
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    bool ok = mpfr_cmp_d(w, bound) < 0;
    mpfr_clear(w);
    return ok;
}

double Interval::lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double Interval::hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }

std::string Interval::str() const {
    char* a = nullptr;
    char* b = nullptr;
    mpfr_asprintf(&a, "%.20Rg", lo_);
    mpfr_asprintf(&b, "%.20Rg", hi_);
    std::string s = std::string("[") + a + ", " + b + "]";
    mpfr_free_str(a);
    mpfr_free_str(b);
    return s;
}

// ---------------------------------------------------------------------------
// Enclosure

bool Enclosure::contains_zero() const {
    if (exact) return sgn(*exact) == 0;
    return iv.contains_zero();
}
bool Enclosure::excludes_zero() const {
    if (exact) return sgn(*exact) != 0;
    return iv.excludes_zero();
}
bool Enclosure::width_below(double bound) const {
    if (exact) return bound > 0;
    return iv.width_below(bound);
}
std::string Enclosure::str() const {
    if (exact) {
        std::ostringstream os;
        os << *exact;
        return os.str();
    }
    return iv.str();
}

namespace {

Enclosure make_exact(Rational q, mpfr_prec_t prec) {
    Enclosure e{std::move(q), Interval(prec)};
    e.iv = Interval::from_rational(*e.exact, prec);
    return e;
}

Enclosure eval_rec(const Expr& e, const Rational& x, const Rational& y, mpfr_prec_t prec) {
    switch (e.kind()) {
        case Kind::Number:
            return make_exact(e.value(), prec);
        case Kind::Symbol: {
            if (e.name() == "X") return make_exact(x, prec);
            if (e.name() == "Y") return make_exact(y, prec);
            throw DomainError("unbound symbol '" + e.name() + "' in evaluation");
        }
        case Kind::Sum: {
            bool all_exact = true;
            Rational acc_q = 0;
            Interval acc(prec);
            for (const Expr& k : e.operands()) {
                Enclosure v = eval_rec(k, x, y, prec);
                if (all_exact && v.exact) {
                    acc_q += *v.exact;
                } else {
                    if (all_exact) {
                        acc = Interval::from_rational(acc_q, prec);
                        all_exact = false;
                    }
                    acc = acc + v.iv;
                }
            }
            if (all_exact) return make_exact(std::move(acc_q), prec);
            return Enclosure{std::nullopt, std::move(acc)};
        }
        case Kind::Product: {
            bool all_exact = true;
            Rational acc_q = 1;
            Interval acc(prec);
            for (const Expr& k : e.operands()) {
                Enclosure v = eval_rec(k, x, y, prec);
                if (all_exact && v.exact) {
                    acc_q *= *v.exact;
                } else {
                    if (all_exact) {
                        acc = Interval::from_rational(acc_q, prec);
                        all_exact = false;
                    }
                    acc = acc * v.iv;
                }
            }
            if (all_exact) return make_exact(std::move(acc_q), prec);
            return Enclosure{std::nullopt, std::move(acc)};
        }
        case Kind::Power: {
            Enclosure b = eval_rec(e.base(), x, y, prec);
            const Rational& r = e.exponent();
            if (b.exact && r.get_den() == 1 && r.get_num().fits_slong_p()) {
                long n = r.get_num().get_si();
                if (sgn(*b.exact) == 0 && n < 0)
                    throw PoleError("division by zero at the sample point");
                Rational out = 1;
                Rational base = n < 0 ? Rational(1) / *b.exact : *b.exact;
                long an = n < 0 ? -n : n;
                for (long i = 0; i < an; ++i) out *= base;
                return make_exact(std::move(out), prec);
            }
            return Enclosure{std::nullopt, b.iv.pow_rational(r)};
        }
        case Kind::Call: {
            Enclosure a = eval_rec(e.base(), x, y, prec);
            const Interval& v = a.iv;
            switch (e.func()) {
                case Func::Sin: return {std::nullopt, v.sin()};
                case Func::Cos: return {std::nullopt, v.cos()};
                case Func::Tan: return {std::nullopt, v.tan()};
                case Func::Cot: return {std::nullopt, v.cot()};
                case Func::Exp: return {std::nullopt, v.exp()};
                case Func::Ln: {
                    if (a.exact && *a.exact == 1) return make_exact(Rational(0), prec);
                    return {std::nullopt, v.ln()};
                }
                case Func::Sqrt: {
                    if (a.exact) {
                        if (sgn(*a.exact) < 0)
                            throw PoleError("square root of a negative value at sample");
                        mpz_class rn, rd;
                        if (mpz_root(rn.get_mpz_t(), a.exact->get_num().get_mpz_t(), 2) != 0 &&
                            mpz_root(rd.get_mpz_t(), a.exact->get_den().get_mpz_t(), 2) != 0) {
                            Rational rr(rn, rd);
                            rr.canonicalize();
                            return make_exact(std::move(rr), prec);
                        }
                    }
                    return {std::nullopt, v.sqrt()};
                }
            }
            throw ExprError("unreachable");
        }
    }
    throw ExprError("unreachable");
}

}  // namespace

Enclosure eval_at(const Expr& e, const Rational& x, const Rational& y, unsigned precision_bits) {
    return eval_rec(e, x, y, static_cast<mpfr_prec_t>(precision_bits));
}

}  // namespace affint

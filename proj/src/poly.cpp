#include "affint/poly.hpp"

#include <algorithm>
#include <cassert>

namespace affint {

int32_t total_degree(const Monomial& m) {
    int32_t d = 0;
    for (int32_t e : m) d += e;
    return d;
}

bool GrlexLess::operator()(const Monomial& a, const Monomial& b) const {
    int32_t da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    std::size_t n = std::max(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        int32_t ea = i < a.size() ? a[i] : 0;
        int32_t eb = i < b.size() ? b[i] : 0;
        if (ea != eb) return ea < eb;  // bigger exponent on an earlier variable wins
    }
    return false;
}

namespace {
void trim(Monomial& m) {
    while (!m.empty() && m.back() == 0) m.pop_back();
}
Monomial mono_mul(const Monomial& a, const Monomial& b) {
    Monomial r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    trim(r);
    return r;
}
// a / b if every exponent of b fits under a
std::optional<Monomial> mono_div(const Monomial& a, const Monomial& b) {
    Monomial r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) {
        r[i] -= b[i];
        if (r[i] < 0) return std::nullopt;
    }
    trim(r);
    return r;
}
}  // namespace

Poly Poly::constant(Rational c) {
    Poly p;
    if (sgn(c) != 0) p.terms_.emplace(Monomial{}, std::move(c));
    return p;
}

Poly Poly::variable(std::size_t index) {
    Poly p;
    Monomial m(index + 1, 0);
    m[index] = 1;
    p.terms_.emplace(std::move(m), Rational(1));
    return p;
}

bool Poly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

const Rational& Poly::constant_value() const { return terms_.begin()->second; }

const std::pair<const Monomial, Rational>& Poly::leading() const {
    assert(!terms_.empty());
    return *terms_.rbegin();
}

int32_t Poly::degree() const {
    return terms_.empty() ? -1 : total_degree(terms_.rbegin()->first);
}

int32_t Poly::degree_in(std::size_t var) const {
    int32_t d = 0;
    for (const auto& [m, c] : terms_)
        if (var < m.size()) d = std::max(d, m[var]);
    return d;
}

int Poly::max_var() const {
    int mv = -1;
    for (const auto& [m, c] : terms_)
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i] > 0) mv = std::max(mv, static_cast<int>(i));
    return mv;
}

void Poly::add_term(Monomial m, Rational c) {
    trim(m);
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        if (sgn(c) != 0) terms_.emplace(std::move(m), std::move(c));
    } else {
        it->second += c;
        if (sgn(it->second) == 0) terms_.erase(it);
    }
}

Poly Poly::operator-() const {
    Poly r;
    for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
    return r;
}

Poly Poly::operator+(const Poly& o) const {
    Poly r = *this;
    r += o;
    return r;
}

Poly& Poly::operator+=(const Poly& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Poly Poly::operator-(const Poly& o) const {
    Poly r = *this;
    for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    Poly r;
    for (const auto& [ma, ca] : terms_)
        for (const auto& [mb, cb] : o.terms_) r.add_term(mono_mul(ma, mb), ca * cb);
    return r;
}

Poly Poly::mul_scalar(const Rational& c) const {
    Poly r;
    if (sgn(c) == 0) return r;
    for (const auto& [m, v] : terms_) r.terms_.emplace(m, v * c);
    return r;
}

Poly Poly::mul_monomial(const Monomial& mono, const Rational& c) const {
    Poly r;
    if (sgn(c) == 0) return r;
    for (const auto& [m, v] : terms_) r.terms_.emplace(mono_mul(m, mono), v * c);
    return r;
}

Poly Poly::pow(unsigned n) const {
    Poly r = Poly::constant(1);
    Poly b = *this;
    while (n) {
        if (n & 1) r = r * b;
        b = b * b;
        n >>= 1;
    }
    return r;
}

std::optional<Poly> Poly::divide_exact(const Poly& o) const {
    if (o.is_zero()) return std::nullopt;
    Poly rem = *this;
    Poly quot;
    const auto& [lm, lc] = o.leading();
    while (!rem.is_zero()) {
        auto q = mono_div(rem.leading().first, lm);
        if (!q) return std::nullopt;
        Rational qc = rem.leading().second / lc;
        quot.add_term(*q, qc);
        rem = rem - o.mul_monomial(*q, qc);
    }
    return quot;
}

Rational Poly::eval(const std::vector<Rational>& point) const {
    Rational acc = 0;
    for (const auto& [m, c] : terms_) {
        Rational t = c;
        for (std::size_t i = 0; i < m.size(); ++i) {
            for (int32_t e = 0; e < m[i]; ++e) t *= point.at(i);
        }
        acc += t;
    }
    return acc;
}

// ---------------------------------------------------------------------------
// multivariate gcd: primitive-PRS recursion on the main variable

namespace {

// View of p as a univariate polynomial in `var` with Poly coefficients.
std::vector<Poly> to_univariate(const Poly& p, std::size_t var) {
    std::vector<Poly> coeffs(static_cast<std::size_t>(p.degree_in(var)) + 1);
    for (const auto& [m, c] : p.terms()) {
        int32_t e = var < m.size() ? m[var] : 0;
        Monomial rest = m;
        if (var < rest.size()) rest[var] = 0;
        while (!rest.empty() && rest.back() == 0) rest.pop_back();
        coeffs[static_cast<std::size_t>(e)].add_term(std::move(rest), c);
    }
    return coeffs;
}

Poly from_univariate(const std::vector<Poly>& coeffs, std::size_t var) {
    Poly out;
    for (std::size_t e = 0; e < coeffs.size(); ++e) {
        Monomial xe(var + 1, 0);
        xe[var] = static_cast<int32_t>(e);
        while (!xe.empty() && xe.back() == 0) xe.pop_back();
        out += coeffs[e].mul_monomial(xe, Rational(1));
    }
    return out;
}

int uni_deg(const std::vector<Poly>& u) {
    for (std::size_t i = u.size(); i-- > 0;)
        if (!u[i].is_zero()) return static_cast<int>(i);
    return -1;
}

// content = gcd of all univariate coefficients (a Poly in the other vars)
Poly uni_content(const std::vector<Poly>& u) {
    Poly g;
    for (const Poly& c : u) {
        if (c.is_zero()) continue;
        g = g.is_zero() ? c : poly_gcd(g, c);
        if (g.is_constant() && !g.is_zero()) break;
    }
    if (!g.is_zero() && g.is_constant()) g = Poly::constant(1);
    return g;
}

std::vector<Poly> uni_divide_content(const std::vector<Poly>& u, const Poly& cont) {
    std::vector<Poly> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i].is_zero()) continue;
        auto q = u[i].divide_exact(cont);
        assert(q);
        out[i] = std::move(*q);
    }
    return out;
}

// pseudo-remainder of a by b in the main variable (coefficients are Polys)
std::vector<Poly> pseudo_rem(std::vector<Poly> a, const std::vector<Poly>& b) {
    int db = uni_deg(b);
    assert(db >= 0);
    const Poly& lb = b[static_cast<std::size_t>(db)];
    int da = uni_deg(a);
    while (da >= db) {
        Poly la = a[static_cast<std::size_t>(da)];
        // a := lb*a - la * x^(da-db) * b
        for (Poly& c : a) c = c * lb;
        for (int i = 0; i <= db; ++i) {
            std::size_t k = static_cast<std::size_t>(da - db + i);
            a[k] = a[k] - la * b[static_cast<std::size_t>(i)];
        }
        int nda = uni_deg(a);
        assert(nda < da);
        da = nda;
    }
    a.resize(static_cast<std::size_t>(std::max(da, 0)) + 1);
    if (da < 0) a.clear();
    return a;
}

Poly normalize_sign(Poly p) {
    if (p.is_zero()) return p;
    if (sgn(p.leading().second) < 0) return -p;
    return p;
}

// scale so the coefficient content over Q is 1 (primitive, integer-free form)
Poly make_primitive_q(const Poly& p) {
    if (p.is_zero()) return p;
    // gcd of numerators / lcm of denominators
    mpz_class num_gcd = 0, den_lcm = 1;
    for (const auto& [m, c] : p.terms()) {
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
    }
    Rational scale(den_lcm, num_gcd);
    scale.canonicalize();
    return normalize_sign(p.mul_scalar(scale));
}

}  // namespace

Poly poly_gcd(const Poly& a, const Poly& b) {
    if (a.is_zero()) return make_primitive_q(b);
    if (b.is_zero()) return make_primitive_q(a);
    if (a.is_constant() || b.is_constant()) return Poly::constant(1);

    // main variable: lowest index present in both
    int var = -1;
    int mva = a.max_var(), mvb = b.max_var();
    for (int v = 0; v <= std::min(mva, mvb); ++v) {
        if (a.degree_in(static_cast<std::size_t>(v)) > 0 &&
            b.degree_in(static_cast<std::size_t>(v)) > 0) {
            var = v;
            break;
        }
    }
    if (var < 0) {
        // no shared variable: gcd of contents in disjoint variables is a constant
        return Poly::constant(1);
    }

    std::size_t v = static_cast<std::size_t>(var);
    auto f = to_univariate(make_primitive_q(a), v);
    auto g = to_univariate(make_primitive_q(b), v);
    Poly ca = uni_content(f), cb = uni_content(g);
    Poly cont = poly_gcd(ca, cb);
    f = uni_divide_content(f, ca);
    g = uni_divide_content(g, cb);
    if (uni_deg(f) < uni_deg(g)) std::swap(f, g);

    while (true) {
        std::vector<Poly> r = pseudo_rem(f, g);
        if (uni_deg(r) < 0) break;
        Poly rc = uni_content(r);
        r = uni_divide_content(r, rc);
        f = std::move(g);
        g = std::move(r);
        if (uni_deg(g) == 0) {
            g = {Poly::constant(1)};
            break;
        }
    }
    Poly result = from_univariate(g, v) * cont;
    result = make_primitive_q(result);

    // primitive PRS yields the gcd up to content for primitive inputs; the
    // divide_exact checks below guard against transcription slips
    assert(a.divide_exact(result));
    assert(b.divide_exact(result));
    return result;
}

// ---------------------------------------------------------------------------
// RatPoly

void RatPoly::reduce() {
    if (den.is_zero()) throw DomainError("division by an identically zero expression");
    if (num.is_zero()) {
        den = Poly::constant(1);
        return;
    }
    Poly g = poly_gcd(num, den);
    if (!g.is_constant()) {
        auto qn = num.divide_exact(g);
        auto qd = den.divide_exact(g);
        assert(qn && qd);
        num = std::move(*qn);
        den = std::move(*qd);
    }
    // monic denominator
    const Rational& lc = den.leading().second;
    if (lc != 1) {
        Rational inv = 1 / lc;
        num = num.mul_scalar(inv);
        den = den.mul_scalar(inv);
    }
}

RatPoly RatPoly::operator+(const RatPoly& o) const {
    RatPoly r{num * o.den + o.num * den, den * o.den};
    r.reduce();
    return r;
}

RatPoly RatPoly::operator-(const RatPoly& o) const {
    RatPoly r{num * o.den - o.num * den, den * o.den};
    r.reduce();
    return r;
}

RatPoly RatPoly::operator*(const RatPoly& o) const {
    RatPoly r{num * o.num, den * o.den};
    r.reduce();
    return r;
}

RatPoly RatPoly::operator/(const RatPoly& o) const {
    if (o.num.is_zero()) throw DomainError("division by an identically zero expression");
    RatPoly r{num * o.den, den * o.num};
    r.reduce();
    return r;
}

RatPoly RatPoly::operator-() const { return RatPoly{-num, den}; }

RatPoly RatPoly::pow(long n) const {
    if (n == 0) return RatPoly{Poly::constant(1), Poly::constant(1)};
    RatPoly base = *this;
    if (n < 0) {
        if (num.is_zero()) throw DomainError("division by an identically zero expression");
        base = RatPoly{den, num};
        base.reduce();
        n = -n;
    }
    RatPoly r{base.num.pow(static_cast<unsigned>(n)), base.den.pow(static_cast<unsigned>(n))};
    r.reduce();
    return r;
}

}  // namespace affint

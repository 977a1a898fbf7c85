#include "affint/normalize.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>

namespace affint {

std::string Atom::sort_key() const {
    return is_root() ? base.str() + "#root" : base.str();
}

bool PolyContext::has_root_atoms() const {
    for (const Atom& a : atoms)
        if (a.is_root()) return true;
    return false;
}

namespace {

// ---------------------------------------------------------------------------
// context merging

struct ColumnMap {
    // source column -> (target column, exponent scale)
    std::vector<std::pair<std::size_t, int32_t>> map;
};

bool plain_less(const std::string& a, const std::string& b) {
    auto rank = [](const std::string& s) { return s == "X" ? 0 : s == "Y" ? 1 : 2; };
    int ra = rank(a), rb = rank(b);
    if (ra != rb) return ra < rb;
    return a < b;
}

PolyContext merge_contexts(const PolyContext& a, const PolyContext& b, ColumnMap& ma,
                           ColumnMap& mb) {
    PolyContext m;
    m.plain = a.plain;
    for (const auto& v : b.plain)
        if (std::find(m.plain.begin(), m.plain.end(), v) == m.plain.end()) m.plain.push_back(v);
    std::sort(m.plain.begin(), m.plain.end(), plain_less);

    // atoms unioned by sort key; shared root atoms get the lcm root
    std::vector<Atom> atoms = a.atoms;
    for (const Atom& at : b.atoms) {
        auto it = std::find_if(atoms.begin(), atoms.end(),
                               [&](const Atom& x) { return x.sort_key() == at.sort_key(); });
        if (it == atoms.end())
            atoms.push_back(at);
        else if (it->is_root())
            it->root = std::lcm(it->root, at.root);
    }
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& x, const Atom& y) { return x.sort_key() < y.sort_key(); });
    m.atoms = std::move(atoms);

    auto build_map = [&m](const PolyContext& src, ColumnMap& out) {
        out.map.clear();
        for (const auto& v : src.plain) {
            auto it = std::find(m.plain.begin(), m.plain.end(), v);
            out.map.emplace_back(static_cast<std::size_t>(it - m.plain.begin()), 1);
        }
        for (const Atom& at : src.atoms) {
            auto it = std::find_if(m.atoms.begin(), m.atoms.end(), [&](const Atom& x) {
                return x.sort_key() == at.sort_key();
            });
            std::size_t col = m.plain.size() + static_cast<std::size_t>(it - m.atoms.begin());
            int32_t scale = static_cast<int32_t>(it->root / at.root);
            out.map.emplace_back(col, scale);
        }
    };
    build_map(a, ma);
    build_map(b, mb);
    return m;
}

Poly remap_poly(const Poly& p, const ColumnMap& cm, std::size_t ncols) {
    Poly out;
    for (const auto& [m, c] : p.terms()) {
        Monomial nm(ncols, 0);
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            const auto& [col, scale] = cm.map.at(i);
            nm[col] += m[i] * scale;
        }
        out.add_term(std::move(nm), c);
    }
    return out;
}

CanonicalForm cf_reduce_roots(CanonicalForm f);

CanonicalForm make_form(PolyContext ctx, RatPoly rp) {
    rp.reduce();
    CanonicalForm f;
    f.ctx = std::move(ctx);
    f.num = std::move(rp.num);
    f.den = std::move(rp.den);
    return cf_reduce_roots(std::move(f));
}

CanonicalForm cf_const(Rational c) {
    CanonicalForm f;
    f.num = Poly::constant(std::move(c));
    return f;
}

CanonicalForm cf_plain_var(std::string name) {
    CanonicalForm f;
    f.ctx.plain = {std::move(name)};
    f.num = Poly::variable(0);
    return f;
}

CanonicalForm cf_atom(Atom a, int32_t expnt) {
    CanonicalForm f;
    f.ctx.atoms = {std::move(a)};
    Monomial m{1};
    m[0] = expnt;
    Poly p;
    p.add_term(std::move(m), Rational(1));
    f.num = std::move(p);
    return cf_reduce_roots(std::move(f));
}

enum class Op { Add, Sub, Mul, Div };

CanonicalForm cf_binary(const CanonicalForm& a, const CanonicalForm& b, Op op) {
    ColumnMap ma, mb;
    PolyContext ctx = merge_contexts(a.ctx, b.ctx, ma, mb);
    std::size_t n = ctx.var_count();
    RatPoly ra{remap_poly(a.num, ma, n), remap_poly(a.den, ma, n)};
    RatPoly rb{remap_poly(b.num, mb, n), remap_poly(b.den, mb, n)};
    RatPoly rr;
    switch (op) {
        case Op::Add: rr = ra + rb; break;
        case Op::Sub: rr = ra - rb; break;
        case Op::Mul: rr = ra * rb; break;
        case Op::Div: rr = ra / rb; break;
    }
    return make_form(std::move(ctx), std::move(rr));
}

CanonicalForm cf_add(const CanonicalForm& a, const CanonicalForm& b) {
    return cf_binary(a, b, Op::Add);
}
CanonicalForm cf_mul(const CanonicalForm& a, const CanonicalForm& b) {
    return cf_binary(a, b, Op::Mul);
}

CanonicalForm cf_neg(const CanonicalForm& a) {
    CanonicalForm f = a;
    f.num = -f.num;
    return f;
}

CanonicalForm cf_pow(const CanonicalForm& a, long n) {
    RatPoly r{a.num, a.den};
    CanonicalForm f;
    f.ctx = a.ctx;
    RatPoly p = r.pow(n);
    f.num = std::move(p.num);
    f.den = std::move(p.den);
    return cf_reduce_roots(std::move(f));
}

// drop context columns that no longer occur (keeps forms comparable)
CanonicalForm compact(CanonicalForm f) {
    std::size_t n = f.ctx.var_count();
    std::vector<bool> used(n, false);
    auto scan = [&](const Poly& p) {
        for (const auto& [m, c] : p.terms())
            for (std::size_t i = 0; i < m.size(); ++i)
                if (m[i] != 0) used[i] = true;
    };
    scan(f.num);
    scan(f.den);
    if (std::all_of(used.begin(), used.end(), [](bool b) { return b; })) return f;

    PolyContext ctx;
    ColumnMap cm;
    cm.map.resize(n, {0, 1});
    for (std::size_t i = 0; i < f.ctx.plain.size(); ++i) {
        if (used[i]) {
            cm.map[i] = {ctx.plain.size(), 1};
            ctx.plain.push_back(f.ctx.plain[i]);
        }
    }
    std::size_t np = ctx.plain.size();
    for (std::size_t i = 0; i < f.ctx.atoms.size(); ++i) {
        std::size_t col = f.ctx.plain.size() + i;
        if (used[col]) {
            cm.map[col] = {np + ctx.atoms.size(), 1};
            ctx.atoms.push_back(f.ctx.atoms[i]);
        }
    }
    std::size_t nn = ctx.var_count();
    CanonicalForm out;
    out.num = remap_poly(f.num, cm, nn);
    out.den = remap_poly(f.den, cm, nn);
    out.ctx = std::move(ctx);
    return out;
}

CanonicalForm canon(const Expr& e);

// Replace atom^e (e >= root) by base^(e/root) * atom^(e mod root).
CanonicalForm cf_reduce_roots(CanonicalForm f) {
    for (int guard = 0; guard < 64; ++guard) {
        std::size_t np = f.ctx.plain.size();
        int found_atom = -1;
        auto find_over = [&](const Poly& p) {
            for (const auto& [m, c] : p.terms())
                for (std::size_t i = np; i < m.size(); ++i) {
                    const Atom& at = f.ctx.atoms[i - np];
                    if (at.is_root() && m[i] >= static_cast<int32_t>(at.root))
                        return static_cast<int>(i);
                }
            return -1;
        };
        found_atom = find_over(f.num);
        if (found_atom < 0) found_atom = find_over(f.den);
        if (found_atom < 0) return compact(std::move(f));

        std::size_t col = static_cast<std::size_t>(found_atom);
        const Atom at = f.ctx.atoms[col - np];
        CanonicalForm base_form = canon(at.base);

        auto expand = [&](const Poly& p) {
            CanonicalForm acc = cf_const(0);
            for (const auto& [m, c] : p.terms()) {
                Monomial rest = m;
                int32_t e = col < rest.size() ? rest[col] : 0;
                int32_t q = e / static_cast<int32_t>(at.root);
                if (col < rest.size()) rest[col] = e % static_cast<int32_t>(at.root);
                CanonicalForm term;
                term.ctx = f.ctx;
                Poly tp;
                tp.add_term(std::move(rest), c);
                term.num = std::move(tp);
                CanonicalForm full = term;
                for (int32_t k = 0; k < q; ++k) full = cf_binary(full, base_form, Op::Mul);
                acc = cf_binary(acc, full, Op::Add);
            }
            return acc;
        };
        CanonicalForm nf = cf_binary(expand(f.num), expand(f.den), Op::Div);
        f = std::move(nf);
        // loop again in case other atoms overflow
    }
    throw ExprError("fractional power reduction did not terminate");
}

// ---------------------------------------------------------------------------
// expression -> canonical form

bool leading_negative(const CanonicalForm& f) {
    if (f.num.is_zero()) return false;
    return sgn(f.num.leading().second) < 0;
}

CanonicalForm canon_call(Func fn, const Expr& arg) {
    CanonicalForm fa = canon(arg);
    Expr na = rebuild(fa);

    if (fn == Func::Exp && na.kind() == Kind::Call && na.func() == Func::Ln)
        return canon(na.base());
    if (fn == Func::Ln && na.kind() == Kind::Call && na.func() == Func::Exp)
        return canon(na.base());
    if (fn == Func::Sqrt) {
        // sqrt(u) == u^(1/2)
        return canon(Expr::pow(na, rat(1, 2)));
    }

    bool odd = fn == Func::Sin || fn == Func::Tan || fn == Func::Cot;
    bool even = fn == Func::Cos;
    if ((odd || even) && leading_negative(fa)) {
        Expr flipped = rebuild(cf_neg(fa));
        CanonicalForm at = cf_atom(Atom{Expr::call(fn, flipped), 1}, 1);
        return odd ? cf_neg(at) : at;
    }
    return cf_atom(Atom{Expr::call(fn, na), 1}, 1);
}

CanonicalForm canon(const Expr& e) {
    switch (e.kind()) {
        case Kind::Number:
            return cf_const(e.value());
        case Kind::Symbol:
            return cf_plain_var(e.name());
        case Kind::Sum: {
            CanonicalForm acc = cf_const(0);
            for (const Expr& k : e.operands()) acc = cf_add(acc, canon(k));
            return acc;
        }
        case Kind::Product: {
            CanonicalForm acc = cf_const(1);
            for (const Expr& k : e.operands()) acc = cf_mul(acc, canon(k));
            return acc;
        }
        case Kind::Power: {
            const Rational& r = e.exponent();
            CanonicalForm fb = canon(e.base());
            if (r.get_den() == 1) {
                if (!r.get_num().fits_slong_p()) throw ExprError("exponent too large");
                return cf_pow(fb, r.get_num().get_si());
            }
            // split r = n + f with f in (0,1)
            mpz_class nfloor;
            mpz_fdiv_q(nfloor.get_mpz_t(), r.get_num().get_mpz_t(), r.get_den().get_mpz_t());
            Rational frac = r - Rational(nfloor);
            if (fb.is_zero()) {
                if (sgn(r) > 0) return cf_const(0);
                throw DomainError("zero raised to a negative power");
            }
            if (!nfloor.fits_slong_p()) throw ExprError("exponent too large");
            if (!frac.get_den().fits_ulong_p() || frac.get_den().get_ui() > 1u << 20)
                throw ExprError("fractional exponent denominator too large");
            unsigned root = static_cast<unsigned>(frac.get_den().get_ui());
            int32_t en = static_cast<int32_t>(frac.get_num().get_si());
            Expr base_norm = rebuild(fb);
            CanonicalForm at = cf_atom(Atom{base_norm, root}, en);
            return cf_mul(cf_pow(fb, nfloor.get_si()), at);
        }
        case Kind::Call:
            return canon_call(e.func(), e.base());
    }
    throw ExprError("unreachable");
}

// ---------------------------------------------------------------------------
// canonical form -> expression

Expr var_power(const PolyContext& ctx, std::size_t col, int32_t e) {
    if (col < ctx.plain.size()) return Expr::pow(Expr::symbol(ctx.plain[col]), rat(e));
    const Atom& at = ctx.atoms[col - ctx.plain.size()];
    if (!at.is_root()) return Expr::pow(at.base, rat(e));
    return Expr::pow(at.base, Rational(e) / Rational(at.root));
}

Expr poly_expr(const Poly& p, const PolyContext& ctx) {
    if (p.is_zero()) return Expr::number(0);
    std::vector<Expr> terms;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        const auto& [m, c] = *it;
        std::vector<Expr> factors;
        factors.push_back(Expr::number(c));
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i] != 0) factors.push_back(var_power(ctx, i, m[i]));
        terms.push_back(Expr::product(std::move(factors)));
    }
    return Expr::sum(std::move(terms));
}

}  // namespace

Expr rebuild(const CanonicalForm& f) {
    Expr n = poly_expr(f.num, f.ctx);
    if (f.den.is_constant()) return n;  // monic constant denominator is 1
    Expr d = poly_expr(f.den, f.ctx);
    return Expr::product({n, Expr::pow(d, rat(-1))});
}

CanonicalForm canonical_form(const Expr& e) { return canon(e); }

Expr normalize(const Expr& e) { return rebuild(canon(e)); }

Expr denominator_expr(const Expr& e) {
    CanonicalForm f = canon(e);
    if (f.den.is_constant()) return Expr::number(1);
    return poly_expr(f.den, f.ctx);
}

bool is_rational_expr(const Expr& e) { return canon(e).rational(); }

bool needs_positive_domain(const Expr& e) {
    // fractional powers anywhere in the tree force positive-quadrant sampling
    switch (e.kind()) {
        case Kind::Number:
        case Kind::Symbol:
            return false;
        case Kind::Sum:
        case Kind::Product: {
            for (const Expr& k : e.operands())
                if (needs_positive_domain(k)) return true;
            return false;
        }
        case Kind::Power:
            return e.exponent().get_den() != 1 || needs_positive_domain(e.base());
        case Kind::Call:
            return e.func() == Func::Sqrt || needs_positive_domain(e.base());
    }
    return false;
}

}  // namespace affint

#include "affint/tensor.hpp"

#include <cassert>

#include "affint/normalize.hpp"

namespace affint {

TensorField::TensorField(std::vector<Variance> variance)
    : var_(std::move(variance)), c_(std::size_t{1} << var_.size(), Expr::number(0)) {}

TensorField TensorField::scalar(Expr e) {
    TensorField t{std::vector<Variance>{}};
    t.c_[0] = std::move(e);
    return t;
}

namespace {
std::size_t flatten(const std::vector<Variance>& var, std::initializer_list<int> idx) {
    assert(idx.size() == var.size());
    (void)var;
    std::size_t flat = 0;
    for (int i : idx) {
        assert(i == 1 || i == 2);
        flat = (flat << 1) | static_cast<std::size_t>(i - 1);
    }
    return flat;
}
}  // namespace

const Expr& TensorField::at(std::initializer_list<int> idx) const {
    return c_[flatten(var_, idx)];
}
Expr& TensorField::at(std::initializer_list<int> idx) { return c_[flatten(var_, idx)]; }

TensorField TensorField::map(Expr (*f)(const Expr&)) const {
    TensorField out(var_);
    for (std::size_t i = 0; i < c_.size(); ++i) out.c_[i] = f(c_[i]);
    return out;
}

TensorField operator+(const TensorField& a, const TensorField& b) {
    assert(a.variance() == b.variance());
    TensorField out(a.variance());
    for (std::size_t i = 0; i < a.size(); ++i) out.comp(i) = a.comp(i) + b.comp(i);
    return out;
}

TensorField operator-(const TensorField& a, const TensorField& b) {
    assert(a.variance() == b.variance());
    TensorField out(a.variance());
    for (std::size_t i = 0; i < a.size(); ++i) out.comp(i) = a.comp(i) - b.comp(i);
    return out;
}

TensorField scale(const Expr& s, const TensorField& t) {
    TensorField out(t.variance());
    for (std::size_t i = 0; i < t.size(); ++i) out.comp(i) = s * t.comp(i);
    return out;
}

Connection::Connection() {
    for (auto& a : gamma)
        for (auto& b : a)
            for (auto& c : b) c = Expr::number(0);
}

Connection Connection::flat() { return Connection(); }

const Expr& Connection::G(int a, int b, int c) const {
    return gamma[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b - 1)]
                [static_cast<std::size_t>(c - 1)];
}

void Connection::set_G(int a, int b, int c, Expr v) {
    gamma[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b - 1)]
         [static_cast<std::size_t>(c - 1)] = v;
    gamma[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(c - 1)]
         [static_cast<std::size_t>(b - 1)] = std::move(v);
}

SampleConfig Connection::sample_config(const SampleConfig& base) const {
    SampleConfig cfg = base;
    for (const Expr& e : regular_locus) cfg.avoid.push_back(e);
    return cfg;
}

TensorField eps_lower(const Connection& conn) {
    TensorField e({Variance::Down, Variance::Down});
    e.at({1, 2}) = conn.eps12;
    e.at({2, 1}) = -conn.eps12;
    return e;
}

TensorField eps_upper(const Connection& conn) {
    // eps^{ab} eps_{cb} = delta^a_c  =>  eps^{12} = 1/eps_{12}
    TensorField e({Variance::Up, Variance::Up});
    Expr inv = Expr::integer(1) / conn.eps12;
    e.at({1, 2}) = inv;
    e.at({2, 1}) = -inv;
    return e;
}

TensorField covariant_derivative(const TensorField& t, const Connection& conn) {
    const int r = t.rank();
    std::vector<Variance> nv;
    nv.push_back(Variance::Down);
    for (Variance v : t.variance()) nv.push_back(v);
    TensorField out(nv);

    const std::string vars[2] = {"X", "Y"};
    std::vector<int> idx(static_cast<std::size_t>(r), 0);
    const std::size_t n = std::size_t{1} << r;
    for (int a = 0; a < 2; ++a) {
        for (std::size_t flat = 0; flat < n; ++flat) {
            for (int s = 0; s < r; ++s) idx[static_cast<std::size_t>(s)] = (flat >> (r - 1 - s)) & 1;
            Expr acc = differentiate(t.comp(flat), vars[a]);
            for (int s = 0; s < r; ++s) {
                int is = idx[static_cast<std::size_t>(s)];
                for (int e = 0; e < 2; ++e) {
                    std::size_t swapped = flat;
                    std::size_t bit = std::size_t{1} << (r - 1 - s);
                    swapped = (swapped & ~bit) | (static_cast<std::size_t>(e) << (r - 1 - s));
                    if (t.variance()[static_cast<std::size_t>(s)] == Variance::Up) {
                        // + Gamma^{i_s}_{a e} t^{...e...}
                        acc = acc + conn.G(is + 1, a + 1, e + 1) * t.comp(swapped);
                    } else {
                        // - Gamma^{e}_{a i_s} t_{...e...}
                        acc = acc - conn.G(e + 1, a + 1, is + 1) * t.comp(swapped);
                    }
                }
            }
            std::size_t oflat = (static_cast<std::size_t>(a) << r) | flat;
            out.comp(oflat) = normalize(acc);
        }
    }
    return out;
}

namespace {
TensorField apply_eps(const TensorField& t, int slot, const TensorField& eps, bool raising) {
    std::vector<Variance> nv = t.variance();
    nv[static_cast<std::size_t>(slot)] = raising ? Variance::Up : Variance::Down;
    TensorField out(nv);
    const int r = t.rank();
    const std::size_t n = std::size_t{1} << r;
    const std::size_t bit = std::size_t{1} << (r - 1 - slot);
    for (std::size_t flat = 0; flat < n; ++flat) {
        int a = static_cast<int>((flat & bit) != 0);
        Expr acc = Expr::number(0);
        for (int b = 0; b < 2; ++b) {
            std::size_t src = (flat & ~bit) | (static_cast<std::size_t>(b) << (r - 1 - slot));
            // raising: V^a = eps^{ab} V_b ; lowering: V_a = eps_{ba} V^b
            const Expr& factor = raising ? eps.at({a + 1, b + 1}) : eps.at({b + 1, a + 1});
            acc = acc + factor * t.comp(src);
        }
        out.comp(flat) = normalize(acc);
    }
    return out;
}
}  // namespace

TensorField raise_index(const TensorField& t, int slot, const Connection& conn) {
    if (slot < 0 || slot >= t.rank()) throw ExprError("raise_index: slot out of range");
    if (t.variance()[static_cast<std::size_t>(slot)] != Variance::Down)
        throw ExprError("raise_index: slot is already contravariant");
    return apply_eps(t, slot, eps_upper(conn), true);
}

TensorField lower_index(const TensorField& t, int slot, const Connection& conn) {
    if (slot < 0 || slot >= t.rank()) throw ExprError("lower_index: slot out of range");
    if (t.variance()[static_cast<std::size_t>(slot)] != Variance::Up)
        throw ExprError("lower_index: slot is already covariant");
    return apply_eps(t, slot, eps_lower(conn), false);
}

CurvatureTower curvature_tower(const Connection& conn, const SampleConfig& cfg) {
    CurvatureTower tw;
    const std::string vars[2] = {"X", "Y"};

    // R_{ab}{}^c{}_d = d_a G^c_{bd} - d_b G^c_{ad} + G^c_{ae} G^e_{bd} - G^c_{be} G^e_{ad}
    tw.riem = TensorField({Variance::Down, Variance::Down, Variance::Up, Variance::Down});
    for (int a = 1; a <= 2; ++a)
        for (int b = 1; b <= 2; ++b)
            for (int c = 1; c <= 2; ++c)
                for (int d = 1; d <= 2; ++d) {
                    Expr acc = differentiate(conn.G(c, b, d), vars[a - 1]) -
                               differentiate(conn.G(c, a, d), vars[b - 1]);
                    for (int e = 1; e <= 2; ++e)
                        acc = acc + conn.G(c, a, e) * conn.G(e, b, d) -
                              conn.G(c, b, e) * conn.G(e, a, d);
                    tw.riem.at({a, b, c, d}) = normalize(acc);
                }

    // R_{ab} = R_{ca}{}^c{}_b
    tw.ricci = TensorField({Variance::Down, Variance::Down});
    for (int a = 1; a <= 2; ++a)
        for (int b = 1; b <= 2; ++b) {
            Expr acc = Expr::number(0);
            for (int c = 1; c <= 2; ++c) acc = acc + tw.riem.at({c, a, c, b});
            tw.ricci.at({a, b}) = normalize(acc);
        }

    tw.schouten = TensorField({Variance::Down, Variance::Down});
    for (int a = 1; a <= 2; ++a)
        for (int b = 1; b <= 2; ++b)
            tw.schouten.at({a, b}) = normalize(Expr::number(rat(2, 3)) * tw.ricci.at({a, b}) +
                                               Expr::number(rat(1, 3)) * tw.ricci.at({b, a}));

    tw.bform = TensorField({Variance::Down, Variance::Down});
    for (int a = 1; a <= 2; ++a)
        for (int b = 1; b <= 2; ++b)
            tw.bform.at({a, b}) = normalize(tw.schouten.at({b, a}) - tw.schouten.at({a, b}));

    TensorField eu = eps_upper(conn);
    Expr beta = Expr::number(0);
    for (int a = 1; a <= 2; ++a)
        for (int b = 1; b <= 2; ++b) beta = beta + tw.bform.at({a, b}) * eu.at({a, b});
    tw.beta = normalize(beta);

    // theta_a = (1/2) eps^{bc} nabla_a eps_{bc}
    TensorField deps = covariant_derivative(eps_lower(conn), conn);
    tw.theta = TensorField({Variance::Down});
    for (int a = 1; a <= 2; ++a) {
        Expr acc = Expr::number(0);
        for (int b = 1; b <= 2; ++b)
            for (int c = 1; c <= 2; ++c) acc = acc + eu.at({b, c}) * deps.at({a, b, c});
        tw.theta.at({a}) = normalize(Expr::number(rat(1, 2)) * acc);
    }

    // decomposition residual: R_{ab}{}^c{}_d - (delta_a^c P_bd - delta_b^c P_ad + B_ab delta_d^c)
    SampleConfig scfg = conn.sample_config(cfg);
    Expr residual_sum = Expr::number(0);
    for (int a = 1; a <= 2; ++a)
        for (int b = 1; b <= 2; ++b)
            for (int c = 1; c <= 2; ++c)
                for (int d = 1; d <= 2; ++d) {
                    Expr rhs = Expr::number(0);
                    if (a == c) rhs = rhs + tw.schouten.at({b, d});
                    if (b == c) rhs = rhs - tw.schouten.at({a, d});
                    if (d == c) rhs = rhs + tw.bform.at({a, b});
                    Expr res = tw.riem.at({a, b, c, d}) - rhs;
                    residual_sum = residual_sum + res * res;
                }
    tw.decomposition_check = is_zero(residual_sum, scfg);
    if (tw.decomposition_check.kind == Verdict::ProvenNonzero)
        throw InvariantViolation("curvature decomposition residual is provably nonzero");

    return tw;
}

}  // namespace affint

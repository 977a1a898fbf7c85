#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "affint/normalize.hpp"
#include "affint/tensor.hpp"

using namespace affint;

namespace {

bool canon_equal(const Expr& a, const Expr& b) { return normalize(a).same(normalize(b)); }

// the normal-form connection with only Gamma^2_{12} = Gamma^2_{21} = Y
Connection gamma212_y() {
    Connection c;
    c.set_G(2, 1, 2, Expr::symbol("Y"));
    return c;
}

// hydrodynamic-type connection built by hand from A, B
Connection hydro_conn(const Expr& A, const Expr& B) {
    Connection c;
    c.set_G(1, 1, 1, normalize(dx(A) / A - Expr::integer(2) * B));
    c.set_G(2, 2, 2, normalize(dy(B) / B - Expr::integer(2) * A));
    c.set_G(1, 1, 2, normalize(-(dy(A) / (Expr::integer(2) * A) + A)));
    c.set_G(2, 1, 2, normalize(-(dx(B) / (Expr::integer(2) * B) + B)));
    c.regular_locus = {A, B};
    return c;
}

}  // namespace

TEST_CASE("covariant derivative of a constant scalar vanishes") {
    TensorField s = TensorField::scalar(Expr::integer(5));
    TensorField ds = covariant_derivative(s, gamma212_y());
    CHECK(ds.at({1}).is_literal_zero());
    CHECK(ds.at({2}).is_literal_zero());
}

TEST_CASE("theta for the Gamma^2_12 = Y connection") {
    CurvatureTower tw = curvature_tower(gamma212_y());
    CHECK(canon_equal(tw.theta.at({1}), -Expr::symbol("Y")));
    CHECK(tw.theta.at({2}).is_literal_zero());
}

TEST_CASE("Killing covector dX is parallel-symmetric for the flat connection") {
    Connection flat = Connection::flat();
    TensorField k({Variance::Down});
    k.at({1}) = Expr::integer(1);
    TensorField dk = covariant_derivative(k, flat);
    for (int a = 1; a <= 2; ++a)
        for (int b = 1; b <= 2; ++b)
            CHECK(normalize(dk.at({a, b}) + dk.at({b, a})).is_literal_zero());
}

TEST_CASE("index raising and lowering") {
    Connection conn;  // eps12 = 1
    TensorField v({Variance::Down});
    v.at({1}) = Expr::integer(0);
    v.at({2}) = Expr::integer(1);
    TensorField up = raise_index(v, 0, conn);
    CHECK(canon_equal(up.at({1}), Expr::integer(1)));
    CHECK(up.at({2}).is_literal_zero());

    // raise then lower dX
    TensorField k({Variance::Down});
    k.at({1}) = Expr::integer(1);
    TensorField back = lower_index(raise_index(k, 0, conn), 0, conn);
    CHECK(canon_equal(back.at({1}), k.at({1})));
    CHECK(canon_equal(back.at({2}), k.at({2})));

    // eps^{ab} eps_{ab} = 2, also with a nontrivial area form
    for (const Expr& e12 : {Expr::integer(1), parse_expr("3+X^2")}) {
        Connection c2;
        c2.eps12 = e12;
        TensorField el = eps_lower(c2), eu = eps_upper(c2);
        Expr acc = Expr::number(0);
        for (int a = 1; a <= 2; ++a)
            for (int b = 1; b <= 2; ++b) acc = acc + eu.at({a, b}) * el.at({a, b});
        CHECK(canon_equal(acc, Expr::integer(2)));
    }

    CHECK_THROWS_AS(raise_index(v, 3, conn), ExprError);
}

TEST_CASE("curvature tower of the flat connection is zero") {
    CurvatureTower tw = curvature_tower(Connection::flat());
    for (std::size_t i = 0; i < tw.riem.size(); ++i) CHECK(tw.riem.comp(i).is_literal_zero());
    for (std::size_t i = 0; i < tw.ricci.size(); ++i) CHECK(tw.ricci.comp(i).is_literal_zero());
    CHECK(tw.beta.is_literal_zero());
    CHECK(tw.decomposition_check.kind == Verdict::ProvenZero);
}

TEST_CASE("curvature tower of the Gamma^2_12 = Y connection") {
    CurvatureTower tw = curvature_tower(gamma212_y());
    // frozen from an independent hand expansion of the curvature definition
    CHECK(canon_equal(tw.ricci.at({1, 1}), parse_expr("-Y^2")));
    CHECK(canon_equal(tw.ricci.at({1, 2}), Expr::integer(1)));
    CHECK(tw.ricci.at({2, 1}).is_literal_zero());
    CHECK(tw.ricci.at({2, 2}).is_literal_zero());

    CHECK(canon_equal(tw.schouten.at({1, 1}), parse_expr("-Y^2")));
    CHECK(canon_equal(tw.schouten.at({1, 2}), parse_expr("2/3")));
    CHECK(canon_equal(tw.schouten.at({2, 1}), parse_expr("1/3")));
    CHECK(tw.schouten.at({2, 2}).is_literal_zero());

    CHECK(canon_equal(tw.beta, parse_expr("-2/3")));
    CHECK(tw.decomposition_check.kind == Verdict::ProvenZero);
}

TEST_CASE("curvature antisymmetry in the first index pair") {
    for (const Connection& conn : {gamma212_y(), hydro_conn(parse_expr("3*X+Y"), parse_expr("X+3*Y"))}) {
        CurvatureTower tw = curvature_tower(conn);
        for (int a = 1; a <= 2; ++a)
            for (int b = 1; b <= 2; ++b)
                for (int c = 1; c <= 2; ++c)
                    for (int d = 1; d <= 2; ++d)
                        CHECK(normalize(tw.riem.at({a, b, c, d}) + tw.riem.at({b, a, c, d}))
                                  .is_literal_zero());
    }
}

TEST_CASE("beta computed from B and from the skew Schouten part agree") {
    Connection conn = hydro_conn(parse_expr("3*X+Y"), parse_expr("X+3*Y"));
    CurvatureTower tw = curvature_tower(conn);
    TensorField eu = eps_upper(conn);
    Expr beta2 = Expr::number(0);
    for (int a = 1; a <= 2; ++a)
        for (int b = 1; b <= 2; ++b)
            beta2 = beta2 - (tw.schouten.at({a, b}) - tw.schouten.at({b, a})) * eu.at({a, b});
    CHECK(canon_equal(tw.beta, beta2));
}

TEST_CASE("parallel volume form exists for the c=0 linear-speed connection") {
    // A = Y, B = X: the skew Ricci part must vanish identically
    Connection conn = hydro_conn(Expr::symbol("Y"), Expr::symbol("X"));
    CurvatureTower tw = curvature_tower(conn, SampleConfig{}.with_seed(3));
    CHECK(is_zero(tw.beta).kind == Verdict::ProvenZero);
}

TEST_CASE("Levi-Civita style connection has symmetric Ricci") {
    // the log-diagonal connection of the metric m dX dY with m = (3X+Y)(X+3Y)
    Expr m = parse_expr("(3*X+Y)*(X+3*Y)");
    Connection lc;
    lc.set_G(1, 1, 1, normalize(dx(m) / m));
    lc.set_G(2, 2, 2, normalize(dy(m) / m));
    lc.regular_locus = {m};
    CurvatureTower tw = curvature_tower(lc, SampleConfig{}.with_seed(5));
    CHECK(is_zero(tw.beta).kind == Verdict::ProvenZero);
}

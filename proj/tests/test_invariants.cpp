#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "affint/invariants.hpp"
#include "affint/normalize.hpp"

using namespace affint;

namespace {

bool canon_equal(const Expr& a, const Expr& b) { return normalize(a).same(normalize(b)); }

// hydrodynamic-type connection built from A, B (independent transcription,
// also exercised through the hydro module elsewhere)
Connection hydro_conn(const Expr& A, const Expr& B) {
    Connection c;
    c.set_G(1, 1, 1, normalize(dx(A) / A - Expr::integer(2) * B));
    c.set_G(2, 2, 2, normalize(dy(B) / B - Expr::integer(2) * A));
    c.set_G(1, 1, 2, normalize(-(dy(A) / (Expr::integer(2) * A) + A)));
    c.set_G(2, 1, 2, normalize(-(dx(B) / (Expr::integer(2) * B) + B)));
    c.regular_locus = {A, B};
    return c;
}

Connection example1(long cval) {
    Expr A = substitute(parse_expr("c*X+Y"), {{"c", Expr::integer(cval)}});
    Expr B = substitute(parse_expr("X+c*Y"), {{"c", Expr::integer(cval)}});
    return hydro_conn(normalize(A), normalize(B));
}

}  // namespace

TEST_CASE("flat connection carries three first integrals") {
    ObstructionTower tw = obstruction_tower(Connection::flat());
    CHECK(tw.cotton.at({1}).is_literal_zero());
    CHECK(tw.cotton.at({2}).is_literal_zero());
    CHECK(tw.i_n.is_literal_zero());
    for (std::size_t i = 0; i < tw.w.size(); ++i) CHECK(tw.w.comp(i).is_literal_zero());
    for (std::size_t i = 0; i < tw.t.size(); ++i) CHECK(tw.t.comp(i).is_literal_zero());
    for (const auto& row : tw.mmatrix)
        for (const Expr& e : row) CHECK(e.is_literal_zero());

    ClassificationReport rep = classify(Connection::flat());
    CHECK(rep.count == 3);
    CHECK(rep.certainty == Certainty::Proven);
}

TEST_CASE("linear-speed family sweep (c = 0, 3, -3, 2, 1)") {
    struct Case {
        long c;
        int count;
    };
    const Case cases[] = {{0, 3}, {3, 2}, {-3, 2}, {2, 1}, {1, 1}};
    for (const Case& tc : cases) {
        CAPTURE(tc.c);
        ClassificationReport rep = classify(example1(tc.c));
        CHECK(rep.count == tc.count);
        CHECK(rep.certainty == Certainty::Proven);
    }

    // c = 2 shows a provably nonzero component of the two-integral tensor
    ClassificationReport rep2 = classify(example1(2));
    bool t_nonzero = false;
    for (const Diagnostic& d : rep2.diagnostics)
        if (d.name.starts_with("T_") && d.verdict.kind == Verdict::ProvenNonzero)
            t_nonzero = true;
    CHECK(t_nonzero);

    // c = 1 admits a parallel volume form: beta proven zero
    ClassificationReport rep1 = classify(example1(1));
    REQUIRE(rep1.find("beta") != nullptr);
    CHECK(rep1.find("beta")->kind == Verdict::ProvenZero);
}

TEST_CASE("two-integral tensor closed form for c = 2") {
    long c = 2;
    Expr A = normalize(substitute(parse_expr("c*X+Y"), {{"c", Expr::integer(c)}}));
    Expr B = normalize(substitute(parse_expr("X+c*Y"), {{"c", Expr::integer(c)}}));
    ObstructionTower tw = obstruction_tower(hydro_conn(A, B));

    Expr s = normalize(Expr::number(rat(8 * c * c * (c * c - 9), 9)) /
                       (Expr::pow(A, rat(3)) * Expr::pow(B, rat(3))));
    // T = s (dY x dY' - dX x dX' + (B/A) dY x dX' - (A/B) dX x dY')
    CHECK(canon_equal(tw.t.at({2, 2}), s));
    CHECK(canon_equal(tw.t.at({1, 1}), -s));
    CHECK(canon_equal(tw.t.at({2, 1}), normalize(s * B / A)));
    CHECK(canon_equal(tw.t.at({1, 2}), normalize(-(s * A / B))));
}

TEST_CASE("normal forms of two-integral connections") {
    SUBCASE("c=0, P=Y^2, Q=1") {
        Connection conn = normal_form(0, parse_expr("Y^2"), Expr::integer(1));
        CHECK(canon_equal(conn.G(2, 1, 2), Expr::symbol("Y")));
        CHECK(conn.G(1, 1, 1).is_literal_zero());
        CHECK(conn.G(1, 1, 2).is_literal_zero());
        CHECK(conn.G(2, 1, 1).is_literal_zero());
        CHECK(conn.G(2, 2, 2).is_literal_zero());

        ClassificationReport rep = classify(conn);
        CHECK(rep.count == 2);
        CHECK(rep.find("beta")->kind == Verdict::ProvenNonzero);

        auto [K, L] = normal_form_integrals(0, parse_expr("Y^2"), Expr::integer(1));
        CHECK(killing_verify(conn, K).kind == Verdict::ProvenZero);
        CHECK(killing_verify(conn, L).kind == Verdict::ProvenZero);
    }
    SUBCASE("c=0, P=Y, Q=1 degenerates to three integrals") {
        Connection conn = normal_form(0, Expr::symbol("Y"), Expr::integer(1));
        ClassificationReport rep = classify(conn);
        CHECK(rep.count == 3);
    }
    SUBCASE("c=1, P=0, Q=1 has the K = e^Y dX integral") {
        Connection conn = normal_form(1, Expr::number(0), Expr::integer(1));
        auto [K, L] = normal_form_integrals(1, Expr::number(0), Expr::integer(1));
        CHECK(killing_verify(conn, K).kind == Verdict::ProvenZero);
        CHECK(killing_verify(conn, L).kind == Verdict::ProvenZero);
    }
    SUBCASE("zero Q is rejected") {
        CHECK_THROWS_AS(normal_form(0, Expr::symbol("Y"), Expr::number(0)), DomainError);
    }
    SUBCASE("every generic normal form classifies as 2 or 3 with T zero") {
        const char* ps[] = {"Y^2", "X*Y", "Y^3+X", "X^2-Y"};
        const char* qs[] = {"1", "2", "1", "3"};
        for (int i = 0; i < 4; ++i) {
            Connection conn = normal_form(0, parse_expr(ps[i]), parse_expr(qs[i]));
            ClassificationReport rep = classify(conn);
            CAPTURE(ps[i]);
            CHECK(rep.count >= 2);
            for (const Diagnostic& d : rep.diagnostics)
                if (d.name.starts_with("T_")) CHECK(d.verdict.zero_like());
        }
    }
}

TEST_CASE("killing_verify basics") {
    Connection flat = Connection::flat();
    TensorField k({Variance::Down});
    k.at({1}) = Expr::integer(1);
    CHECK(killing_verify(flat, k).kind == Verdict::ProvenZero);

    TensorField xk({Variance::Down});
    xk.at({1}) = Expr::symbol("X");
    CHECK(killing_verify(flat, xk).kind == Verdict::ProvenNonzero);
}

TEST_CASE("killing covector from the flat-metric equations (c = 0)") {
    // A = Y, B = X; f = exp(-X^2-Y^2), k = -f solve the flat-metric system,
    // giving K = (A f, B k)
    Connection conn = example1(0);
    Expr E = parse_expr("exp(-X^2-Y^2)");
    TensorField K({Variance::Down});
    K.at({1}) = normalize(Expr::symbol("Y") * E);
    K.at({2}) = normalize(-(Expr::symbol("X") * E));
    ZeroVerdict v = killing_verify(conn, K);
    CHECK(v.zero_like());
}

TEST_CASE("unparametrised geodesic ODE coefficients") {
    auto flat = geodesic_ode_coefficients(Connection::flat());
    for (const Expr& a : flat) CHECK(a.is_literal_zero());

    Connection conn;
    conn.set_G(2, 1, 2, Expr::symbol("Y"));
    auto co = geodesic_ode_coefficients(conn);
    CHECK(co[0].is_literal_zero());
    CHECK(canon_equal(co[1], parse_expr("-2*Y")));
    CHECK(co[2].is_literal_zero());
    CHECK(co[3].is_literal_zero());
}

TEST_CASE("theta-free row reduction matches the raw prolongation rows") {
    // raw rows: M~_a^b = nabla_a F^b + (P^b_a + beta/2 delta) beta,
    //           N~_a  = -F_a + nabla_a beta - beta theta_a;
    // the stored rows must equal raw + 2 theta_a (F^b | beta)
    for (const Connection& conn :
         {example1(3), example1(2), normal_form(0, parse_expr("Y^2"), Expr::integer(1))}) {
        ObstructionTower tw = obstruction_tower(conn);
        TensorField eu = eps_upper(conn);
        TensorField dF = covariant_derivative(tw.fvec, conn);
        TensorField flow = lower_index(tw.fvec, 0, conn);
        const Expr& beta = tw.curv.beta;
        for (int a = 1; a <= 2; ++a) {
            for (int b = 1; b <= 2; ++b) {
                Expr pba = Expr::number(0);
                for (int cc = 1; cc <= 2; ++cc)
                    pba = pba + eu.at({b, cc}) * tw.curv.schouten.at({cc, a});
                Expr raw = dF.at({a, b}) + pba * beta;
                if (a == b) raw = raw + Expr::number(rat(1, 2)) * beta * beta;
                Expr expected = raw + Expr::integer(2) * tw.curv.theta.at({a}) * tw.fvec.at({b});
                CHECK(is_zero(tw.m.at({a, b}) - expected, SampleConfig{}).zero_like());
            }
            Expr rawn = -flow.at({a}) + differentiate(beta, a == 1 ? "X" : "Y") -
                        beta * tw.curv.theta.at({a});
            Expr expectedn = rawn + Expr::integer(2) * tw.curv.theta.at({a}) * beta;
            CHECK(is_zero(tw.n.at({a}) - expectedn, SampleConfig{}).zero_like());
        }
    }
}

TEST_CASE("W is symmetric in its last two slots") {
    for (const Connection& conn : {example1(2), example1(1)}) {
        ObstructionTower tw = obstruction_tower(conn);
        for (int a = 1; a <= 2; ++a)
            CHECK(normalize(tw.w.at({a, 1, 2}) - tw.w.at({a, 2, 1})).is_literal_zero());
    }
}

TEST_CASE("I_N is a relative invariant of weight -5") {
    SampleConfig cfg;
    for (long cval : {2L, 3L}) {
        Connection conn = example1(cval);
        Connection scaled = conn;
        scaled.eps12 = Expr::integer(2);
        Expr in1 = obstruction_tower(conn).i_n;
        Expr in2 = obstruction_tower(scaled).i_n;
        // exact rational identity: I_N(2 eps) = 2^-5 I_N(eps)
        CHECK(is_zero(in2 * Expr::integer(32) - in1, conn.sample_config(cfg)).kind ==
              Verdict::ProvenZero);
    }
}

TEST_CASE("special connections satisfy the I_N / nu_5 bridge") {
    for (long cval : {0L, 1L}) {
        Connection conn = example1(cval);
        ObstructionTower tw = obstruction_tower(conn);
        REQUIRE(tw.nu5.has_value());
        Expr bridge = tw.i_n + *tw.nu5 / Expr::integer(27);
        CHECK(is_zero(bridge, conn.sample_config(SampleConfig{})).zero_like());
    }
    // beta != 0: nu_5 must be absent with an explanatory note
    ObstructionTower tw = obstruction_tower(example1(3));
    CHECK(!tw.nu5.has_value());
    CHECK(!tw.nu5_note.empty());
}

TEST_CASE("classification is invariant under a chart change") {
    // (X, Y) -> (X + Y^2, Y) with inverse (X - Y^2, Y)
    for (long cval : {3L, 2L}) {
        Connection conn = example1(cval);
        Connection moved = transform_connection(conn, parse_expr("X+Y^2"), Expr::symbol("Y"),
                                                parse_expr("X-Y^2"), Expr::symbol("Y"));
        ClassificationReport a = classify(conn);
        ClassificationReport b = classify(moved);
        CHECK(a.count == b.count);
    }
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <functional>

#include "affint/expr.hpp"
#include "affint/interval.hpp"
#include "affint/normalize.hpp"
#include "affint/zerotest.hpp"

using namespace affint;

namespace {

bool canon_equal(const Expr& a, const Expr& b) { return normalize(a).same(normalize(b)); }

// deterministic random rational expressions of bounded degree
struct ExprGen {
    std::uint64_t state;
    explicit ExprGen(std::uint64_t seed) : state(seed * 0x9e3779b97f4a7c15ULL + 1) {}
    std::uint64_t u64() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    long pick(long n) { return static_cast<long>(u64() % static_cast<std::uint64_t>(n)); }

    Expr gen(int depth) {
        if (depth <= 0) {
            switch (pick(4)) {
                case 0: return Expr::symbol("X");
                case 1: return Expr::symbol("Y");
                case 2: return Expr::number(rat(pick(11) - 5));
                default: return Expr::number(rat(pick(9) - 4, 1 + pick(4)));
            }
        }
        switch (pick(5)) {
            case 0: return gen(depth - 1) + gen(depth - 1);
            case 1: return gen(depth - 1) - gen(depth - 1);
            case 2: return gen(depth - 1) * gen(depth - 1);
            case 3: {
                Expr d = gen(depth - 1);
                if (is_rational_expr(d) && canonical_form(d).is_zero()) d = d + Expr::integer(1);
                try {
                    return gen(depth - 1) / d;
                } catch (const DomainError&) {
                    return gen(depth - 1);
                }
            }
            default: return Expr::pow(gen(depth - 1), rat(1 + pick(3)));
        }
    }
};

}  // namespace

TEST_CASE("parser basics") {
    CHECK(parse_expr("0").is_literal_zero());
    CHECK(parse_expr("  0 ").is_literal_zero());

    // parameter c bound later: matches 3X+Y
    Expr e = parse_expr("(c*X+Y)");
    Expr bound = substitute(e, {{"c", Expr::integer(3)}});
    CHECK(canon_equal(bound, parse_expr("3*X+Y")));

    // product expansion against a hand expansion
    Expr p = parse_expr("(X-Y)^2*(X+Y)");
    CHECK(canon_equal(p, parse_expr("X^3 - X^2*Y - X*Y^2 + Y^3")));

    CHECK_THROWS_AS(parse_expr("X +* Y"), ExprError);
    CHECK_THROWS_AS(parse_expr("foo(X)"), ExprError);   // unknown identifier
    CHECK_THROWS_AS(parse_expr("(X"), ExprError);
    CHECK(parse_expr("1/2").is_number());
    CHECK(parse_expr("1/2").value() == rat(1, 2));
    CHECK(parse_expr("X^(-1/2)").exponent() == rat(-1, 2));
    CHECK(parse_expr("-X^2").same(-Expr::pow(Expr::symbol("X"), rat(2))));
}

TEST_CASE("differentiate basics") {
    Expr x = Expr::symbol("X"), y = Expr::symbol("Y");
    CHECK(canon_equal(dx(x * y), y));
    CHECK(canon_equal(dy(Expr::call(Func::Ln, y)), parse_expr("1/Y")));
}

TEST_CASE("differentiate matches finite differences") {
    // oracle: central finite difference, step 1e-6, relative tolerance 1e-6
    auto f = [](double X, double Y) { return std::pow(X - Y, 2) * (X + Y); };
    const double h = 1e-6, X0 = 2.0, Y0 = 1.0;
    const double fd = (f(X0 + h, Y0) - f(X0 - h, Y0)) / (2 * h);

    Expr e = parse_expr("(X-Y)^2*(X+Y)");
    Expr de = dx(e);
    Enclosure v = eval_at(de, rat(2), rat(1), 128);
    REQUIRE(v.exact.has_value());
    double sym = v.exact->get_d();
    CHECK(std::abs(sym - fd) / std::abs(fd) < 1e-6);
    CHECK(*v.exact == rat(7));  // frozen from the oracle above
}

TEST_CASE("normalize canonical forms") {
    CHECK(canon_equal(parse_expr("(X^2-Y^2)/(X-Y)"), parse_expr("X+Y")));
    CHECK(normalize(parse_expr("exp(ln(Y))")).same(Expr::symbol("Y")));
    CHECK(normalize(parse_expr("ln(exp(X))")).same(Expr::symbol("X")));
    CHECK(canon_equal(parse_expr("sqrt(X)*sqrt(X)"), Expr::symbol("X")));
    CHECK(canon_equal(parse_expr("sin(Y-X)"), -parse_expr("sin(X-Y)")));
    CHECK(canon_equal(parse_expr("cos(Y-X)"), parse_expr("cos(X-Y)")));
    CHECK_THROWS_AS(normalize(parse_expr("1/(X-X)")), DomainError);
}

TEST_CASE("normalize is idempotent on random rational expressions") {
    // 100 random rational expressions, generator seeded 0
    ExprGen gen(0);
    for (int i = 0; i < 100; ++i) {
        Expr e = gen.gen(3);
        Expr n1, n2;
        try {
            n1 = normalize(e);
            n2 = normalize(n1);
        } catch (const DomainError&) {
            continue;  // a random denominator vanished identically
        }
        CAPTURE(e.str());
        CHECK(n1.same(n2));
    }
}

TEST_CASE("normalize preserves values at sample points") {
    ExprGen gen(42);
    SampleConfig cfg;
    for (int i = 0; i < 25; ++i) {
        Expr e = gen.gen(3);
        Expr n;
        try {
            n = normalize(e);
        } catch (const DomainError&) {
            continue;
        }
        PointSampler sampler(cfg.with_seed(7 + i));
        int checked = 0;
        for (int t = 0; t < 32 && checked < 8; ++t) {
            auto [x, y] = sampler.next();
            try {
                Enclosure a = eval_at(e, x, y, 256);
                Enclosure b = eval_at(n, x, y, 256);
                REQUIRE(a.exact.has_value());
                REQUIRE(b.exact.has_value());
                CHECK(*a.exact == *b.exact);
                ++checked;
            } catch (const PoleError&) {
                continue;
            }
        }
    }
}

TEST_CASE("mixed partial derivatives commute") {
    ExprGen gen(11);
    for (int i = 0; i < 30; ++i) {
        Expr e = gen.gen(3);
        try {
            Expr a = dy(dx(e));
            Expr b = dx(dy(e));
            CHECK(canon_equal(a, b));
        } catch (const DomainError&) {
            continue;
        }
    }
    // a transcendental case as well
    Expr t = parse_expr("sin(X*Y)*exp(X+Y^2)");
    CHECK(normalize(dy(dx(t))).same(normalize(dx(dy(t)))));
}

TEST_CASE("printer round-trips through the parser") {
    ExprGen gen(5);
    for (int i = 0; i < 40; ++i) {
        Expr e = gen.gen(3);
        try {
            Expr n = normalize(e);
            CHECK(normalize(parse_expr(n.str())).same(n));
        } catch (const DomainError&) {
            continue;
        }
    }
    Expr t = parse_expr("sin(X)^2+cos(X*Y)*sqrt(X+3)");
    CHECK(normalize(parse_expr(normalize(t).str())).same(normalize(t)));
}

TEST_CASE("is_zero verdicts") {
    Expr x = Expr::symbol("X"), y = Expr::symbol("Y");

    ZeroVerdict vz = is_zero(x - x);
    CHECK(vz.kind == Verdict::ProvenZero);

    ZeroVerdict vs = is_zero(parse_expr("sin(X)^2+cos(X)^2-1"));
    CHECK(vs.kind == Verdict::ProbablyZero);
    CHECK(vs.samples == 8);

    ZeroVerdict vn = is_zero(x + y);
    CHECK(vn.kind == Verdict::ProvenNonzero);
    CHECK(vn.witness.has_value());

    // transcendental and nonzero
    ZeroVerdict vt = is_zero(parse_expr("sin(X)^2+cos(X)^2"));
    CHECK(vt.kind == Verdict::ProvenNonzero);

    // nonzero constant
    ZeroVerdict vc = is_zero(parse_expr("3/7"));
    CHECK(vc.kind == Verdict::ProvenNonzero);
}

TEST_CASE("is_zero never calls a sampled-nonzero expression zero") {
    ExprGen gen(99);
    SampleConfig cfg;
    for (int i = 0; i < 40; ++i) {
        Expr e = gen.gen(3);
        ZeroVerdict v;
        try {
            v = is_zero(e, cfg.with_seed(1000 + i));
        } catch (const DomainError&) {
            continue;
        }
        if (v.kind != Verdict::ProvenZero) continue;
        PointSampler sampler(cfg.with_seed(2000 + i));
        for (int t = 0; t < 8; ++t) {
            auto [x, y] = sampler.next();
            try {
                Enclosure val = eval_at(e, x, y, 256);
                CHECK(!val.excludes_zero());
            } catch (const PoleError&) {
            }
        }
    }
}

TEST_CASE("eval_at enclosures") {
    Expr e = parse_expr("X+Y");
    Enclosure v = eval_at(e, rat(1, 2), rat(1, 2), 256);
    REQUIRE(v.exact.has_value());
    CHECK(*v.exact == 1);

    Enclosure l = eval_at(parse_expr("ln(Y)"), rat(0), rat(1), 256);
    CHECK(l.contains_zero());
    CHECK(l.width_below(1e-70));

    CHECK_THROWS_AS(eval_at(parse_expr("1/(X-Y)"), rat(1), rat(1), 256), PoleError);
    CHECK_THROWS_AS(eval_at(parse_expr("c*X"), rat(1), rat(1), 256), DomainError);
}

TEST_CASE("substitution") {
    Expr e = parse_expr("c*X+Y");
    CHECK(canon_equal(substitute(e, {{"c", Expr::integer(3)}}), parse_expr("3*X+Y")));

    Expr id = substitute(e, {{"X", Expr::symbol("X")}, {"Y", Expr::symbol("Y")}});
    CHECK(id.same(e));

    Expr sq = parse_expr("X^2-Y^2");
    Expr sub = substitute(sq, {{"X", parse_expr("u+v")}, {"Y", parse_expr("u-v")}});
    CHECK(canon_equal(sub, parse_expr("4*u*v")));
}

TEST_CASE("interval trig stays rigorous") {
    // pi/2 is within rounding of a sin extremum; result must still contain 1
    Interval x = Interval::from_rational(rat(157079632679489662, 100000000000000000), 64);
    Interval s = x.sin();
    CHECK(s.hi_double() >= 0.999999999);
    CHECK(s.lo_double() <= 1.0);
}

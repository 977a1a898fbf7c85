#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "affint/expr.hpp"

namespace affint {

/// Exponent vector aligned to a fixed variable list; trailing zeros trimmed.
using Monomial = std::vector<int32_t>;

/// Graded lexicographic order; variable 0 is the most significant (X before
/// Y before parameters before atoms).
struct GrlexLess {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

int32_t total_degree(const Monomial& m);

/// Sparse multivariate polynomial over Q. The variable list lives outside
/// (see PolyContext in normalize.hpp); Poly only sees column indices.
class Poly {
public:
    using Terms = std::map<Monomial, Rational, GrlexLess>;

    Poly() = default;
    static Poly constant(Rational c);
    static Poly variable(std::size_t index);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    const Rational& constant_value() const;  // requires is_constant and nonzero handled by caller

    const Terms& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    /// Leading term under grlex.
    const std::pair<const Monomial, Rational>& leading() const;
    int32_t degree() const;                  // total degree, -1 for zero
    int32_t degree_in(std::size_t var) const;

    Poly operator-() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly& operator+=(const Poly& o);
    bool operator==(const Poly& o) const { return terms_ == o.terms_; }

    Poly mul_scalar(const Rational& c) const;
    Poly mul_monomial(const Monomial& m, const Rational& c) const;
    Poly pow(unsigned n) const;

    /// Exact division; nullopt if o does not divide *this.
    std::optional<Poly> divide_exact(const Poly& o) const;

    /// Exact evaluation at rational values for every variable.
    Rational eval(const std::vector<Rational>& point) const;

    void add_term(Monomial m, Rational c);  // accumulate, erasing zeros

    /// Largest variable index used, or -1.
    int max_var() const;

private:
    Terms terms_;
};

/// GCD of multivariate polynomials over Q, normalized with content 1 over Z
/// and positive leading coefficient. gcd(0,0) = 0.
Poly poly_gcd(const Poly& a, const Poly& b);

/// num/den with gcd cancelled and den scaled monic (leading coefficient 1).
struct RatPoly {
    Poly num;
    Poly den = Poly::constant(1);

    void reduce();

    RatPoly operator+(const RatPoly& o) const;
    RatPoly operator-(const RatPoly& o) const;
    RatPoly operator*(const RatPoly& o) const;
    RatPoly operator/(const RatPoly& o) const;  // throws DomainError on zero divisor
    RatPoly operator-() const;
    RatPoly pow(long n) const;

    bool is_zero() const { return num.is_zero(); }
};

}  // namespace affint

#pragma once

#include <mpfr.h>

#include <optional>
#include <string>

#include "affint/expr.hpp"

namespace affint {

/// Evaluation reached a pole or left the real domain (division by an interval
/// containing zero, log of a non-positive enclosure, even root of a negative).
struct PoleError : ExprError {
    using ExprError::ExprError;
};

/// Rigorous floating-point enclosure [lo, hi] with directed rounding.
class Interval {
public:
    explicit Interval(mpfr_prec_t prec = 256);
    Interval(const Interval& o);
    Interval(Interval&& o) noexcept;
    Interval& operator=(const Interval& o);
    Interval& operator=(Interval&& o) noexcept;
    ~Interval();

    static Interval from_rational(const Rational& q, mpfr_prec_t prec);

    mpfr_prec_t precision() const { return prec_; }

    Interval operator+(const Interval& o) const;
    Interval operator-(const Interval& o) const;
    Interval operator*(const Interval& o) const;
    Interval operator/(const Interval& o) const;  // throws PoleError
    Interval operator-() const;

    Interval pow_int(long n) const;                 // throws PoleError for n<0 across 0
    Interval pow_rational(const Rational& r) const; // principal branch, needs lo >= 0
    Interval sin() const;
    Interval cos() const;
    Interval tan() const;
    Interval cot() const;
    Interval exp() const;
    Interval ln() const;
    Interval sqrt() const;

    bool contains_zero() const;
    bool excludes_zero() const;
    /// True when hi - lo (rounded up) is strictly below the bound.
    bool width_below(double bound) const;
    double lo_double() const;
    double hi_double() const;
    std::string str() const;

private:
    mpfr_t lo_, hi_;
    mpfr_prec_t prec_;
    Interval ln_or_zero_edge() const;
};

/// Result of eval_at: exact rational when the expression evaluates within Q,
/// otherwise a rigorous interval.
struct Enclosure {
    std::optional<Rational> exact;
    Interval iv;

    bool contains_zero() const;
    bool excludes_zero() const;
    bool width_below(double bound) const;
    std::string str() const;
};

/// Rigorous evaluation at a rational chart point. All symbols other than X
/// and Y must have been substituted away beforehand. Throws PoleError on
/// poles/domain violations and DomainError on unbound symbols.
Enclosure eval_at(const Expr& e, const Rational& x, const Rational& y, unsigned precision_bits);

}  // namespace affint

#pragma once

#include <string>
#include <vector>

#include "affint/expr.hpp"
#include "affint/poly.hpp"

namespace affint {

/// A non-polynomial building block treated as an independent variable by the
/// canonical form: either a function application (root == 1) or a fractional
/// power base^(1/root) with root > 1.
struct Atom {
    Expr base;
    unsigned root = 1;

    bool is_root() const { return root > 1; }
    std::string sort_key() const;
};

/// Variable layout for Poly columns: plain chart variables and parameters
/// first (X, then Y, then others by name), atoms after (by sort key).
struct PolyContext {
    std::vector<std::string> plain;
    std::vector<Atom> atoms;

    std::size_t var_count() const { return plain.size() + atoms.size(); }
    bool has_atoms() const { return !atoms.empty(); }
    bool has_root_atoms() const;
};

/// Canonical p/q form: gcd-cancelled, q monic under grlex. Unique for purely
/// rational expressions; deterministic for expressions with atoms.
struct CanonicalForm {
    PolyContext ctx;
    Poly num;
    Poly den = Poly::constant(1);

    bool is_zero() const { return num.is_zero(); }
    bool rational() const { return !ctx.has_atoms(); }
    bool is_constant() const { return num.is_constant() && den.is_constant(); }
};

/// Compute the canonical form. Applies the fixed rewrite set on the way:
/// sqrt(u) -> u^(1/2), exp(ln u) -> u and ln(exp u) -> u on syntactic
/// matches, power-law merging, trig parity (sin(-u) = -sin(u) etc).
/// Throws DomainError if a divisor is identically zero.
CanonicalForm canonical_form(const Expr& e);

/// Rebuild the canonical expression; idempotent.
Expr normalize(const Expr& e);

Expr rebuild(const CanonicalForm& f);

/// Denominator of the canonical form as an expression (1 if polynomial).
Expr denominator_expr(const Expr& e);

bool is_rational_expr(const Expr& e);

/// True when the canonical form involves fractional powers, in which case
/// evaluation is only guaranteed on the positive quadrant.
bool needs_positive_domain(const Expr& e);

}  // namespace affint

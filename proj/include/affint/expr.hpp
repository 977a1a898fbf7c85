#pragma once

#include <gmpxx.h>

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace affint {

using Rational = mpq_class;

/// Exact rational from machine integers.
Rational rat(long num, long den = 1);

struct ExprError : std::runtime_error {
    explicit ExprError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a syntactically valid expression cannot be evaluated or
/// normalized (division by an identically zero expression, unbound symbol).
struct DomainError : ExprError {
    using ExprError::ExprError;
};

enum class Kind { Number, Symbol, Sum, Product, Power, Call };

enum class Func { Sin, Cos, Tan, Cot, Exp, Ln, Sqrt };

const char* func_name(Func f);
std::optional<Func> func_from_name(std::string_view name);

/// Immutable expression tree over chart variables X, Y and named rational
/// parameters. Nodes are shared; all operations build new trees.
class Expr {
public:
    Expr();  // the zero constant

    static Expr number(Rational value);
    static Expr integer(long value);
    static Expr symbol(std::string name);
    static Expr sum(std::vector<Expr> terms);
    static Expr product(std::vector<Expr> factors);
    static Expr pow(Expr base, Rational exponent);
    static Expr call(Func f, Expr arg);

    Kind kind() const;
    const Rational& value() const;           // Number
    const std::string& name() const;         // Symbol
    const std::vector<Expr>& operands() const;  // Sum, Product
    const Expr& base() const;                // Power; Call argument
    const Rational& exponent() const;        // Power
    Func func() const;                       // Call

    bool is_number() const { return kind() == Kind::Number; }
    bool is_literal_zero() const;
    bool is_literal_one() const;
    bool is_integer_number() const;

    std::size_t hash() const;
    bool same(const Expr& other) const;  // structural equality

    /// Fully parenthesized text form; parse(str()) reproduces the tree
    /// up to canonical form.
    std::string str() const;

    struct Node;  // implementation detail, defined in expr.cpp

private:
    explicit Expr(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
    std::shared_ptr<const Node> n_;
};

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

/// Exact partial derivative with respect to the named variable.
Expr differentiate(const Expr& e, const std::string& var);

/// Simultaneous capture-free substitution of symbols.
Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings);

std::set<std::string> free_symbols(const Expr& e);

/// Parser for the expression grammar: rational literals, symbols, + - * / ^,
/// unary minus, and sin/cos/tan/cot/exp/ln/sqrt with parenthesized argument.
/// Throws ExprError with a character position on malformed input.
Expr parse_expr(std::string_view text);

inline Expr dx(const Expr& e) { return differentiate(e, "X"); }
inline Expr dy(const Expr& e) { return differentiate(e, "Y"); }

}  // namespace affint

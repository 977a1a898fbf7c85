#include "affint/expr.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace affint {

Rational rat(long num, long den) {
    Rational r(num, den);
    r.canonicalize();
    return r;
}

const char* func_name(Func f) {
    switch (f) {
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
        case Func::Tan: return "tan";
        case Func::Cot: return "cot";
        case Func::Exp: return "exp";
        case Func::Ln: return "ln";
        case Func::Sqrt: return "sqrt";
    }
    return "?";
}

std::optional<Func> func_from_name(std::string_view name) {
    if (name == "sin") return Func::Sin;
    if (name == "cos") return Func::Cos;
    if (name == "tan") return Func::Tan;
    if (name == "cot") return Func::Cot;
    if (name == "exp") return Func::Exp;
    if (name == "ln") return Func::Ln;
    if (name == "sqrt") return Func::Sqrt;
    return std::nullopt;
}

struct Expr::Node {
    Kind kind;
    Rational number;          // Number, Power exponent
    std::string symbol;       // Symbol
    std::vector<Expr> kids;   // Sum/Product operands; Power base / Call arg in kids[0]
    Func func = Func::Sin;
    std::size_t hash = 0;
};

namespace {

std::size_t hash_combine(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t hash_rational(const Rational& r) {
    // cheap but stable: fold limb data of num and den
    std::size_t h = 0x243f6a8885a308d3ULL;
    auto fold = [&h](const mpz_class& z) {
        h = hash_combine(h, static_cast<std::size_t>(mpz_sgn(z.get_mpz_t())));
        std::size_t n = mpz_size(z.get_mpz_t());
        for (std::size_t i = 0; i < n; ++i)
            h = hash_combine(h, static_cast<std::size_t>(mpz_getlimbn(z.get_mpz_t(), i)));
    };
    fold(r.get_num());
    fold(r.get_den());
    return h;
}

std::size_t node_hash(const Expr::Node& n);

}  // namespace

namespace {
std::size_t node_hash(const Expr::Node& n) {
    std::size_t h = hash_combine(0x9e3779b9, static_cast<std::size_t>(n.kind));
    switch (n.kind) {
        case Kind::Number:
            h = hash_combine(h, hash_rational(n.number));
            break;
        case Kind::Symbol:
            for (char c : n.symbol) h = hash_combine(h, static_cast<std::size_t>(c));
            break;
        case Kind::Sum:
        case Kind::Product:
            for (const Expr& k : n.kids) h = hash_combine(h, k.hash());
            break;
        case Kind::Power:
            h = hash_combine(h, n.kids[0].hash());
            h = hash_combine(h, hash_rational(n.number));
            break;
        case Kind::Call:
            h = hash_combine(h, static_cast<std::size_t>(n.func));
            h = hash_combine(h, n.kids[0].hash());
            break;
    }
    return h;
}
}  // namespace

Expr::Expr() {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Number;
    n->number = 0;
    n->hash = node_hash(*n);
    n_ = std::move(n);
}

Kind Expr::kind() const { return n_->kind; }
const Rational& Expr::value() const { return n_->number; }
const std::string& Expr::name() const { return n_->symbol; }
const std::vector<Expr>& Expr::operands() const { return n_->kids; }
const Expr& Expr::base() const { return n_->kids[0]; }
const Rational& Expr::exponent() const { return n_->number; }
Func Expr::func() const { return n_->func; }
std::size_t Expr::hash() const { return n_->hash; }

bool Expr::is_literal_zero() const { return kind() == Kind::Number && sgn(value()) == 0; }
bool Expr::is_literal_one() const { return kind() == Kind::Number && value() == 1; }
bool Expr::is_integer_number() const {
    return kind() == Kind::Number && value().get_den() == 1;
}

bool Expr::same(const Expr& other) const {
    if (n_ == other.n_) return true;
    if (hash() != other.hash() || kind() != other.kind()) return false;
    switch (kind()) {
        case Kind::Number: return value() == other.value();
        case Kind::Symbol: return name() == other.name();
        case Kind::Sum:
        case Kind::Product: {
            const auto& a = operands();
            const auto& b = other.operands();
            if (a.size() != b.size()) return false;
            for (std::size_t i = 0; i < a.size(); ++i)
                if (!a[i].same(b[i])) return false;
            return true;
        }
        case Kind::Power:
            return exponent() == other.exponent() && base().same(other.base());
        case Kind::Call:
            return func() == other.func() && base().same(other.base());
    }
    return false;
}

Expr Expr::number(Rational value) {
    value.canonicalize();
    auto n = std::make_shared<Node>();
    n->kind = Kind::Number;
    n->number = std::move(value);
    n->hash = node_hash(*n);
    return Expr(std::move(n));
}

Expr Expr::integer(long value) { return number(Rational(value)); }

Expr Expr::symbol(std::string name) {
    if (name.empty()) throw ExprError("empty symbol name");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Symbol;
    n->symbol = std::move(name);
    n->hash = node_hash(*n);
    return Expr(std::move(n));
}

Expr Expr::sum(std::vector<Expr> terms) {
    std::vector<Expr> flat;
    Rational c = 0;
    for (Expr& t : terms) {
        if (t.kind() == Kind::Sum) {
            for (const Expr& k : t.operands()) {
                if (k.is_number())
                    c += k.value();
                else
                    flat.push_back(k);
            }
        } else if (t.is_number()) {
            c += t.value();
        } else {
            flat.push_back(std::move(t));
        }
    }
    if (sgn(c) != 0 || flat.empty()) flat.push_back(number(c));
    if (flat.size() == 1) return flat[0];
    auto n = std::make_shared<Node>();
    n->kind = Kind::Sum;
    n->kids = std::move(flat);
    n->hash = node_hash(*n);
    return Expr(std::move(n));
}

Expr Expr::product(std::vector<Expr> factors) {
    std::vector<Expr> flat;
    Rational c = 1;
    for (Expr& f : factors) {
        if (f.kind() == Kind::Product) {
            for (const Expr& k : f.operands()) {
                if (k.is_number())
                    c *= k.value();
                else
                    flat.push_back(k);
            }
        } else if (f.is_number()) {
            c *= f.value();
        } else {
            flat.push_back(std::move(f));
        }
    }
    if (sgn(c) == 0) return number(0);
    if (flat.empty()) return number(c);
    if (c != 1) flat.insert(flat.begin(), number(c));
    if (flat.size() == 1) return flat[0];
    auto n = std::make_shared<Node>();
    n->kind = Kind::Product;
    n->kids = std::move(flat);
    n->hash = node_hash(*n);
    return Expr(std::move(n));
}

namespace {

// Exact base^(p/q) for rational base, if the q-th root is rational.
std::optional<Rational> try_exact_pow(const Rational& base, const Rational& e) {
    const mpz_class& p = e.get_num();
    const mpz_class& q = e.get_den();
    if (!p.fits_slong_p() || !q.fits_ulong_p()) return std::nullopt;
    long pn = p.get_si();
    unsigned long qn = q.get_ui();
    if (qn > 64 || pn > 512 || pn < -512) return std::nullopt;
    Rational b = base;
    if (pn < 0) {
        if (sgn(b) == 0) throw DomainError("zero raised to a negative power");
        b = 1 / b;
        pn = -pn;
    }
    mpz_class num_root, den_root;
    if (qn > 1) {
        if (sgn(b) < 0) return std::nullopt;  // even/odd root of a negative: keep symbolic
        if (mpz_root(num_root.get_mpz_t(), b.get_num().get_mpz_t(), qn) == 0) return std::nullopt;
        if (mpz_root(den_root.get_mpz_t(), b.get_den().get_mpz_t(), qn) == 0) return std::nullopt;
    } else {
        num_root = b.get_num();
        den_root = b.get_den();
    }
    Rational root(num_root, den_root);
    root.canonicalize();
    Rational out = 1;
    for (long i = 0; i < pn; ++i) out *= root;
    return out;
}

}  // namespace

Expr Expr::pow(Expr base, Rational exponent) {
    exponent.canonicalize();
    if (sgn(exponent) == 0) return number(1);
    if (exponent == 1) return base;
    if (base.kind() == Kind::Power) {
        Rational merged = base.exponent() * exponent;
        return pow(base.base(), merged);
    }
    if (base.is_number()) {
        if (sgn(base.value()) == 0) {
            if (sgn(exponent) < 0) throw DomainError("zero raised to a negative power");
            return number(0);
        }
        if (auto v = try_exact_pow(base.value(), exponent)) return number(*v);
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::Power;
    n->kids = {std::move(base)};
    n->number = std::move(exponent);
    n->hash = node_hash(*n);
    return Expr(std::move(n));
}

Expr Expr::call(Func f, Expr arg) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Call;
    n->func = f;
    n->kids = {std::move(arg)};
    n->hash = node_hash(*n);
    return Expr(std::move(n));
}

Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, -b}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }
Expr operator/(const Expr& a, const Expr& b) {
    if (b.is_number()) {
        if (sgn(b.value()) == 0) throw DomainError("division by zero constant");
        return Expr::product({a, Expr::number(1 / b.value())});
    }
    return Expr::product({a, Expr::pow(b, rat(-1))});
}
Expr operator-(const Expr& a) { return Expr::product({Expr::integer(-1), a}); }

Expr differentiate(const Expr& e, const std::string& var) {
    switch (e.kind()) {
        case Kind::Number:
            return Expr::number(0);
        case Kind::Symbol:
            return Expr::number(e.name() == var ? 1 : 0);
        case Kind::Sum: {
            std::vector<Expr> terms;
            terms.reserve(e.operands().size());
            for (const Expr& t : e.operands()) terms.push_back(differentiate(t, var));
            return Expr::sum(std::move(terms));
        }
        case Kind::Product: {
            const auto& fs = e.operands();
            std::vector<Expr> terms;
            for (std::size_t i = 0; i < fs.size(); ++i) {
                std::vector<Expr> prod;
                prod.reserve(fs.size());
                for (std::size_t j = 0; j < fs.size(); ++j)
                    prod.push_back(i == j ? differentiate(fs[j], var) : fs[j]);
                terms.push_back(Expr::product(std::move(prod)));
            }
            return Expr::sum(std::move(terms));
        }
        case Kind::Power: {
            // d(u^r) = r u^(r-1) u'
            const Expr& u = e.base();
            const Rational& r = e.exponent();
            return Expr::product({Expr::number(r), Expr::pow(u, r - 1), differentiate(u, var)});
        }
        case Kind::Call: {
            const Expr& u = e.base();
            Expr du = differentiate(u, var);
            switch (e.func()) {
                case Func::Sin: return Expr::call(Func::Cos, u) * du;
                case Func::Cos: return -(Expr::call(Func::Sin, u) * du);
                case Func::Tan: {
                    Expr t = Expr::call(Func::Tan, u);
                    return (Expr::integer(1) + t * t) * du;
                }
                case Func::Cot: {
                    Expr t = Expr::call(Func::Cot, u);
                    return -((Expr::integer(1) + t * t) * du);
                }
                case Func::Exp: return Expr::call(Func::Exp, u) * du;
                case Func::Ln: return du / u;
                case Func::Sqrt:
                    return du / (Expr::integer(2) * Expr::call(Func::Sqrt, u));
            }
            throw ExprError("unreachable");
        }
    }
    throw ExprError("unreachable");
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings) {
    switch (e.kind()) {
        case Kind::Number:
            return e;
        case Kind::Symbol: {
            auto it = bindings.find(e.name());
            return it == bindings.end() ? e : it->second;
        }
        case Kind::Sum:
        case Kind::Product: {
            std::vector<Expr> kids;
            kids.reserve(e.operands().size());
            for (const Expr& k : e.operands()) kids.push_back(substitute(k, bindings));
            return e.kind() == Kind::Sum ? Expr::sum(std::move(kids))
                                         : Expr::product(std::move(kids));
        }
        case Kind::Power:
            return Expr::pow(substitute(e.base(), bindings), e.exponent());
        case Kind::Call:
            return Expr::call(e.func(), substitute(e.base(), bindings));
    }
    throw ExprError("unreachable");
}

namespace {
void collect_symbols(const Expr& e, std::set<std::string>& out) {
    switch (e.kind()) {
        case Kind::Number: return;
        case Kind::Symbol: out.insert(e.name()); return;
        case Kind::Sum:
        case Kind::Product:
            for (const Expr& k : e.operands()) collect_symbols(k, out);
            return;
        case Kind::Power:
        case Kind::Call:
            collect_symbols(e.base(), out);
            return;
    }
}
}  // namespace

std::set<std::string> free_symbols(const Expr& e) {
    std::set<std::string> out;
    collect_symbols(e, out);
    return out;
}

// ---------------------------------------------------------------------------
// printer

namespace {
std::string rational_str(const Rational& r) {
    std::ostringstream os;
    os << r.get_num();
    if (r.get_den() != 1) os << "/" << r.get_den();
    return os.str();
}
}  // namespace

std::string Expr::str() const {
    switch (kind()) {
        case Kind::Number: {
            if (sgn(value()) < 0 || value().get_den() != 1)
                return "(" + rational_str(value()) + ")";
            return rational_str(value());
        }
        case Kind::Symbol:
            return name();
        case Kind::Sum: {
            std::string out = "(";
            for (std::size_t i = 0; i < operands().size(); ++i) {
                if (i) out += "+";
                out += operands()[i].str();
            }
            return out + ")";
        }
        case Kind::Product: {
            std::string out = "(";
            for (std::size_t i = 0; i < operands().size(); ++i) {
                if (i) out += "*";
                out += operands()[i].str();
            }
            return out + ")";
        }
        case Kind::Power:
            return "(" + base().str() + "^(" + rational_str(exponent()) + "))";
        case Kind::Call:
            return std::string(func_name(func())) + "(" + base().str() + ")";
    }
    return "?";
}

// ---------------------------------------------------------------------------
// parser

namespace {

struct Parser {
    std::string_view text;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ExprError("parse error at position " + std::to_string(pos) + ": " + msg);
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    Expr parse() {
        Expr e = parse_sum();
        skip_ws();
        if (pos != text.size()) fail("unexpected trailing input");
        return e;
    }

    Expr parse_sum() {
        Expr e = parse_term();
        for (;;) {
            if (eat('+'))
                e = e + parse_term();
            else if (eat('-'))
                e = e - parse_term();
            else
                return e;
        }
    }

    Expr parse_term() {
        Expr e = parse_unary();
        for (;;) {
            if (eat('*'))
                e = e * parse_unary();
            else if (eat('/'))
                e = e / parse_unary();
            else
                return e;
        }
    }

    Expr parse_unary() {
        if (eat('-')) return -parse_unary();
        if (eat('+')) return parse_unary();
        return parse_power();
    }

    Expr parse_power() {
        Expr b = parse_atom();
        if (eat('^')) {
            Expr e = parse_exponent();
            if (!e.is_number()) fail("exponent must be a rational constant");
            return Expr::pow(b, e.value());
        }
        return b;
    }

    // An exponent is a possibly signed, possibly parenthesized rational.
    Expr parse_exponent() {
        if (eat('-')) return -parse_exponent();
        if (eat('+')) return parse_exponent();
        if (peek() == '(') {
            eat('(');
            Expr e = parse_sum();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        return parse_number();
    }

    Expr parse_atom() {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of input");
        char c = text[pos];
        if (c == '(') {
            ++pos;
            Expr e = parse_sum();
            if (!eat(')')) fail("expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        fail(std::string("unexpected character '") + c + "'");
    }

    Expr parse_number() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (start == pos) fail("expected a number");
        mpz_class n(std::string(text.substr(start, pos - start)), 10);
        return Expr::number(Rational(n));
    }

    Expr parse_identifier() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        std::string id(text.substr(start, pos - start));
        if (peek() == '(') {
            auto f = func_from_name(id);
            if (!f) {
                pos = start;
                fail("unknown identifier '" + id + "'");
            }
            eat('(');
            Expr arg = parse_sum();
            if (!eat(')')) fail("expected ')'");
            return Expr::call(*f, arg);
        }
        return Expr::symbol(std::move(id));
    }
};

}  // namespace

Expr parse_expr(std::string_view text) {
    Parser p{text};
    return p.parse();
}

}  // namespace affint

#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "affint/expr.hpp"
#include "affint/zerotest.hpp"

namespace affint {

/// Raised when a computed tensor identity that must hold by construction
/// fails its zero test (signals a sign-convention or transcription bug).
struct InvariantViolation : ExprError {
    using ExprError::ExprError;
};

enum class Variance : std::uint8_t { Up, Down };

/// Expr-valued tensor field on the 2D chart. Indices are 1-based {1,2} at
/// the API surface, 0-based internally (value v <-> paper index v+1).
class TensorField {
public:
    TensorField() = default;
    explicit TensorField(std::vector<Variance> variance);
    static TensorField scalar(Expr e);

    int rank() const { return static_cast<int>(var_.size()); }
    const std::vector<Variance>& variance() const { return var_; }

    /// 1-based component access, e.g. t.at({1,2}).
    const Expr& at(std::initializer_list<int> idx) const;
    Expr& at(std::initializer_list<int> idx);

    /// 0-based flat access; slot 0 is the most significant bit.
    const Expr& comp(std::size_t flat) const { return c_[flat]; }
    Expr& comp(std::size_t flat) { return c_[flat]; }
    std::size_t size() const { return c_.size(); }

    TensorField map(Expr (*f)(const Expr&)) const;

private:
    std::vector<Variance> var_;
    std::vector<Expr> c_;
};

/// Symmetric affine connection on the chart: Christoffel symbols
/// Gamma^a_{bc} plus the chosen area-form component eps_{12}.
struct Connection {
    // gamma[a][b][c] = Gamma^a_{bc}, 0-based, symmetric in (b,c)
    std::array<std::array<std::array<Expr, 2>, 2>, 2> gamma;
    Expr eps12 = Expr::integer(1);
    // expressions that must stay nonzero at sample points (denominators,
    // hyperbolicity constraints); consumed by zero-test configs
    std::vector<Expr> regular_locus;

    Connection();
    static Connection flat();

    /// 1-based accessor, symmetrized.
    const Expr& G(int a, int b, int c) const;
    void set_G(int a, int b, int c, Expr v);  // sets both (b,c) and (c,b)

    SampleConfig sample_config(const SampleConfig& base) const;
};

TensorField operator+(const TensorField& a, const TensorField& b);
TensorField operator-(const TensorField& a, const TensorField& b);
TensorField scale(const Expr& s, const TensorField& t);

/// eps_{ab} as a (Down,Down) field built from eps12; eps^{ab} derived from
/// eps^{ab} eps_{cb} = delta^a_c.
TensorField eps_lower(const Connection& conn);
TensorField eps_upper(const Connection& conn);

/// Covariant derivative; the new Down slot comes first.
TensorField covariant_derivative(const TensorField& t, const Connection& conn);

/// Index raising V^a = eps^{ab} V_b and lowering V_a = eps_{ba} V^b applied
/// to one slot (0-based).
TensorField raise_index(const TensorField& t, int slot, const Connection& conn);
TensorField lower_index(const TensorField& t, int slot, const Connection& conn);

struct CurvatureTower {
    TensorField riem;      // R_{ab}{}^c{}_d, slots (Down a, Down b, Up c, Down d)
    TensorField ricci;     // R_{ab} = R_{ca}{}^c{}_b
    TensorField schouten;  // P_{ab} = (2/3) R_{ab} + (1/3) R_{ba}
    TensorField bform;     // B_{ab} = P_{ba} - P_{ab}
    Expr beta;             // B_{ab} eps^{ab}
    TensorField theta;     // theta_a = (1/2) eps^{bc} nabla_a eps_{bc}
    ZeroVerdict decomposition_check;  // residual of the curvature split
};

/// Full curvature tower; throws InvariantViolation if the canonical 2D
/// decomposition of the curvature fails its zero test.
CurvatureTower curvature_tower(const Connection& conn, const SampleConfig& cfg = {});

}  // namespace affint

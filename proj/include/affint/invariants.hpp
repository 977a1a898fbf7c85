#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "affint/tensor.hpp"

namespace affint {

/// The obstruction tower controlling the number of independent linear first
/// integrals of the geodesic flow: Cotton covector L_b, the curvature row
/// (F^1, F^2, beta) of the prolongation connection, its first derived row
/// pair (M_a{}^b | N_a), the 3x3 matrix of all three, the determinant scalar
/// I_N (relative weight -5), the sufficiency tensor W_abc, the two-integral
/// tensor T_a{}^b, and the Liouville invariant nu_5 (special connections).
struct ObstructionTower {
    CurvatureTower curv;
    TensorField cotton;  // L_b
    TensorField fvec;    // F^a
    TensorField m;       // M_a{}^b, slots (Down a, Up b)
    TensorField n;       // N_a
    TensorField y;       // Y_cdb = nabla_[c P_d]b
    std::array<std::array<Expr, 3>, 3> mmatrix;  // rows: (F^1 F^2 beta), (M_a^b | N_a)
    Expr i_n;
    TensorField w;  // W_abc, symmetric in (b,c)
    TensorField t;  // T_a{}^b = N_a F^b - beta M_a{}^b
    std::optional<Expr> nu5;
    std::string nu5_note;
};

ObstructionTower obstruction_tower(const Connection& conn, const SampleConfig& cfg = {});

enum class Certainty { Proven, Probabilistic };

struct Diagnostic {
    std::string name;
    ZeroVerdict verdict;
};

/// Outcome of the first-integral count decision.
struct ClassificationReport {
    int count = 0;  // 0..3 independent linear first integrals
    Certainty certainty = Certainty::Proven;
    std::vector<Diagnostic> diagnostics;
    std::vector<std::string> notes;
    std::vector<std::string> indeterminate;  // names of undecided diagnostics
    std::vector<std::pair<Rational, Rational>> witness_points;

    const ZeroVerdict* find(const std::string& name) const;
};

/// Decision tree: all of the 3x3 matrix zero -> 3; T zero with beta nonzero
/// -> 2; I_N and W zero -> 1; otherwise 0. Proven only when every verdict
/// used is proven.
ClassificationReport classify(const Connection& conn, const SampleConfig& cfg = {});

/// Normal form of a connection with (generically) exactly two independent
/// linear first integrals: c01 must be 0 or 1, Q nonzero on the chart.
Connection normal_form(int c01, const Expr& P, const Expr& Q, const SampleConfig& cfg = {});

/// The two Killing covectors of the normal form: K (dX or e^Y dX) and
/// L = P dX + Q dY.
std::pair<TensorField, TensorField> normal_form_integrals(int c01, const Expr& P, const Expr& Q);

/// Zero test of the symmetrized covariant derivative nabla_(a K_b).
ZeroVerdict killing_verify(const Connection& conn, const TensorField& k,
                           const SampleConfig& cfg = {});

/// Coefficients (A0, A1, A2, A3) of the unparametrised geodesic equation
/// Y'' = A3 Y'^3 + A2 Y'^2 + A1 Y' + A0.
std::array<Expr, 4> geodesic_ode_coefficients(const Connection& conn);

/// Pullback of a connection under the chart map (X,Y) -> (u(X,Y), v(X,Y))
/// with explicit inverse; Christoffel symbols transform with the standard
/// rule. Used to check coordinate invariance of the classification.
Connection transform_connection(const Connection& conn, const Expr& fwd_u, const Expr& fwd_v,
                                const Expr& inv_x, const Expr& inv_y);

}  // namespace affint

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "affint/expr.hpp"
#include "affint/interval.hpp"
#include "affint/normalize.hpp"

namespace affint {

enum class Verdict { ProvenZero, ProvenNonzero, ProbablyZero, Indeterminate };

const char* verdict_name(Verdict v);

struct ZeroVerdict {
    Verdict kind = Verdict::Indeterminate;
    int samples = 0;
    std::optional<Expr> canonical;                          // proof by normalization
    std::optional<std::pair<Rational, Rational>> witness;   // point with value != 0
    std::string note;

    bool proven() const { return kind == Verdict::ProvenZero || kind == Verdict::ProvenNonzero; }
    bool zero_like() const { return kind == Verdict::ProvenZero || kind == Verdict::ProbablyZero; }
    bool nonzero() const { return kind == Verdict::ProvenNonzero; }
    bool indeterminate() const { return kind == Verdict::Indeterminate; }
};

/// Sampling policy for the probabilistic part of the zero test. The defaults
/// implement: 8 random rational points in [-3,3]^2 (positive quadrant when
/// fractional powers are present), 256-bit interval arithmetic, zero declared
/// when every enclosure contains 0 with width < 1e-60.
struct SampleConfig {
    Rational x_lo = rat(-3), x_hi = rat(3);
    Rational y_lo = rat(-3), y_hi = rat(3);
    unsigned samples = 8;
    unsigned precision = 256;
    double width_threshold = 1e-60;
    std::uint64_t seed = 0;
    std::vector<Expr> avoid;  // expressions required nonzero at sample points

    SampleConfig with_seed(std::uint64_t s) const {
        SampleConfig c = *this;
        c.seed = s;
        return c;
    }
    SampleConfig with_avoid(std::vector<Expr> a) const;
};

/// All sampling attempts hit poles; carries the attempted points.
struct SampleExhausted : ExprError {
    explicit SampleExhausted(const std::string& what) : ExprError(what) {}
};

/// Deterministic random rational points in the configured box.
class PointSampler {
public:
    explicit PointSampler(const SampleConfig& cfg);
    std::pair<Rational, Rational> next();

private:
    Rational x_lo_, x_wid_, y_lo_, y_wid_;
    std::uint64_t state_;
    std::uint64_t next_u64();
};

/// Decide whether e vanishes identically. Exact (by canonical form) for
/// rational expressions; probabilistic interval sampling otherwise.
ZeroVerdict is_zero(const Expr& e, const SampleConfig& cfg = {});

}  // namespace affint

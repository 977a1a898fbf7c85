#include "affint/zerotest.hpp"

#include <sstream>

namespace affint {

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::ProvenZero: return "ProvenZero";
        case Verdict::ProvenNonzero: return "ProvenNonzero";
        case Verdict::ProbablyZero: return "ProbablyZero";
        case Verdict::Indeterminate: return "Indeterminate";
    }
    return "?";
}

SampleConfig SampleConfig::with_avoid(std::vector<Expr> a) const {
    SampleConfig c = *this;
    for (Expr& e : a) c.avoid.push_back(std::move(e));
    return c;
}

// splitmix64; deterministic across platforms
std::uint64_t PointSampler::next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

PointSampler::PointSampler(const SampleConfig& cfg)
    : x_lo_(cfg.x_lo),
      x_wid_(cfg.x_hi - cfg.x_lo),
      y_lo_(cfg.y_lo),
      y_wid_(cfg.y_hi - cfg.y_lo),
      state_(cfg.seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL) {}

std::pair<Rational, Rational> PointSampler::next() {
    // rationals with moderate denominators so exact arithmetic stays cheap
    auto coord = [this](const Rational& lo, const Rational& wid) -> Rational {
        std::uint64_t den = 97 + (next_u64() % 160);  // 97..256
        std::uint64_t num = next_u64() % (den + 1);
        Rational frac(static_cast<unsigned long>(num), static_cast<unsigned long>(den));
        frac.canonicalize();
        return lo + wid * frac;
    };
    Rational x = coord(x_lo_, x_wid_);
    Rational y = coord(y_lo_, y_wid_);
    return {x, y};
}

namespace {

bool point_admissible(const std::vector<Expr>& avoid, const Rational& x, const Rational& y,
                      unsigned prec) {
    for (const Expr& a : avoid) {
        try {
            Enclosure v = eval_at(a, x, y, prec);
            if (!v.excludes_zero()) return false;
        } catch (const PoleError&) {
            return false;
        }
    }
    return true;
}

}  // namespace

ZeroVerdict is_zero(const Expr& e, const SampleConfig& cfg) {
    CanonicalForm f = canonical_form(e);

    ZeroVerdict v;
    if (f.is_zero()) {
        v.kind = Verdict::ProvenZero;
        v.canonical = Expr::number(0);
        return v;
    }
    Expr norm = rebuild(f);
    v.canonical = norm;

    if (f.rational()) {
        if (f.num.is_constant()) {
            v.kind = Verdict::ProvenNonzero;
            v.note = "nonzero constant canonical form";
            return v;
        }
        // the numerator is a nonzero polynomial: find a witness point
        PointSampler sampler(cfg);
        for (unsigned attempt = 0; attempt < 64 * std::max(1u, cfg.samples); ++attempt) {
            auto [x, y] = sampler.next();
            if (!point_admissible(cfg.avoid, x, y, cfg.precision)) continue;
            try {
                Enclosure val = eval_at(norm, x, y, cfg.precision);
                if (val.excludes_zero()) {
                    v.kind = Verdict::ProvenNonzero;
                    v.witness = {x, y};
                    return v;
                }
            } catch (const PoleError&) {
                continue;
            }
        }
        // canonical form is a nonzero rational function, so nonzero holds even
        // though random sampling failed to exhibit a witness
        v.kind = Verdict::ProvenNonzero;
        v.note = "nonzero canonical rational form (no sampled witness)";
        return v;
    }

    // transcendental atoms present: sample
    SampleConfig c = cfg;
    if (f.ctx.has_root_atoms() || needs_positive_domain(norm)) {
        auto clamp_lo = [](Rational& lo, const Rational& hi) {
            Rational eps = rat(1, 100);
            if (sgn(lo) <= 0) lo = sgn(hi) > 0 ? hi / 100 : eps;
        };
        clamp_lo(c.x_lo, c.x_hi);
        clamp_lo(c.y_lo, c.y_hi);
    }

    PointSampler sampler(c);
    unsigned good = 0;
    unsigned attempts = 0;
    const unsigned max_attempts = 64 * std::max(1u, c.samples);
    bool all_tight = true;
    std::ostringstream tried;
    while (good < c.samples && attempts < max_attempts) {
        ++attempts;
        auto [x, y] = sampler.next();
        if (!point_admissible(c.avoid, x, y, c.precision)) continue;
        try {
            unsigned prec = c.precision;
            Enclosure val = eval_at(norm, x, y, prec);
            // escalate precision when the enclosure is too wide to decide
            while (!val.excludes_zero() && !val.width_below(c.width_threshold) && prec < 4096) {
                prec *= 2;
                val = eval_at(norm, x, y, prec);
            }
            if (val.excludes_zero()) {
                v.kind = Verdict::ProvenNonzero;
                v.witness = {x, y};
                v.samples = static_cast<int>(good + 1);
                return v;
            }
            if (!val.width_below(c.width_threshold)) all_tight = false;
            ++good;
        } catch (const PoleError&) {
            tried << " (" << x << "," << y << ")";
            continue;
        }
    }
    if (good == 0) {
        throw SampleExhausted("every sample point hit a pole; attempted:" + tried.str());
    }
    if (good < c.samples) {
        v.kind = Verdict::Indeterminate;
        v.samples = static_cast<int>(good);
        v.note = "only " + std::to_string(good) + " admissible sample points found";
        return v;
    }
    if (all_tight) {
        v.kind = Verdict::ProbablyZero;
        v.samples = static_cast<int>(good);
        return v;
    }
    v.kind = Verdict::Indeterminate;
    v.samples = static_cast<int>(good);
    v.note = "enclosures contain zero but exceed the width threshold";
    return v;
}

}  // namespace affint

#pragma once

#include <optional>
#include <string>

#include "ptower/operators/operators.hpp"
#include "ptower/partitions/tower.hpp"

namespace ptower {

struct ScalarResult {
    std::optional<u64> C;                // nullopt: no scalar fits
    bool degenerate = false;             // f and g both vanish on the window
    std::size_t checked = 0;             // indices compared
    std::size_t unit_indices = 0;        // indices where g is a unit
    std::optional<std::size_t> first_mismatch;
};

// The C with f = C g on the window. When g has no unit coefficient, C is solved at an
// index of least valuation, which fixes it modulo ell^(m-v); the least representative is returned.
inline ScalarResult scalar_relation(std::span<const u64> f, std::span<const u64> g, const RingSpec& R) {
    require(f.size() == g.size(), Errc::InvalidArgument, "scalar_relation: window lengths differ");
    ScalarResult out;
    out.checked = f.size();
    std::optional<std::size_t> pick;
    u32 best = R.m;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const u32 v = R.valuation(g[i]);
        if (v == 0) ++out.unit_indices;
        if (v < best) {
            best = v;
            pick = i;
        }
    }
    if (!pick) {
        for (std::size_t i = 0; i < f.size(); ++i)
            if (f[i] != 0) {
                out.first_mismatch = i;
                return out;
            }
        out.C = 0;
        out.degenerate = true;
        return out;
    }
    const u64 pv = ipow(R.ell, best);
    const RingSpec low(R.ell, R.m - best == 0 ? 1 : R.m - best);
    if (f[*pick] % pv != 0) {
        out.first_mismatch = *pick;
        return out;
    }
    const u64 C = best == 0 ? R.mul(f[*pick], R.inv(g[*pick]))
                            : low.mul(low.reduce_u(f[*pick] / pv), low.inv(low.reduce_u(g[*pick] / pv)));
    for (std::size_t i = 0; i < f.size(); ++i)
        if (R.mul(C, g[i]) != f[i]) {
            out.first_mismatch = i;
            return out;
        }
    out.C = C;
    return out;
}

// Compares two series on the slots common to both precisions, aligned on 24ths.
inline ScalarResult scalar_relation(const ResidueSeries& f, const ResidueSeries& g) {
    require_same_ring(f, g);
    const i64 step = std::gcd(f.step24(), g.step24());
    const i64 lo = std::min(f.offset24(), g.offset24());
    const i64 hi = std::min(f.prec24(), g.prec24());
    Vec a, b;
    for (i64 e = lo; e < hi; e += step) {
        a.push_back(f.at24(e));
        b.push_back(g.at24(e));
    }
    return scalar_relation(a, b, f.ring());
}

// Character of P(spt, b; 24z): chi12 when eta(24z) was divided out (even b), (12 ell / .)
// when it was eta(24 ell z) (odd b).
inline Character p_character(u32 ell, u32 b) {
    return b % 2 == 0 ? Character::chi_12() : Character::kronecker_of(12 * static_cast<i64>(ell));
}

struct HeckeResult {
    ScalarResult relation;
    ResidueSeries image;  // P(24z) | T(c^2)
};

// Eigenvalue of T(c^2) in weight lambda + 1/2 on P(24z). Fewer than `min_units` unit
// coefficients in the compared window raises InsufficientPrecision so callers can retry.
inline HeckeResult hecke_eigenvalue(const PSeries& P, u32 c, int lambda, const Character& chi,
                                    std::size_t min_units = 5) {
    const ResidueSeries g = P.rescaled();
    ResidueSeries h = hecke_half(g, c, lambda, chi);
    HeckeResult out{scalar_relation(h, g.truncated(h.prec24())), h};
    require(out.relation.unit_indices >= min_units, Errc::InsufficientPrecision,
            "only " + std::to_string(out.relation.unit_indices) + " unit coefficients in the Hecke window");
    return out;
}

} // namespace ptower

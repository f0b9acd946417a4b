#pragma once

#include <optional>

#include "ptower/forms/basis.hpp"

namespace ptower {

// nullopt stands for -infinity (f == 0 mod ell).
using Filtration = std::optional<int>;

inline bool is_member_Mk(const ResidueSeries& f, int k, i64 W) {
    const RingSpec& R = f.ring();
    if (k < 0 || k % 2 != 0) return false;
    auto B = basis_Mk(k, false, 24 * W, R);
    return B->coordinates(f, W).has_value();
}

// Least k' = k_known (mod ell-1), 0 <= k' <= k_known, with f == g (mod ell) for some g in M_k'.
inline Filtration filtration(const ResidueSeries& f, int k_known) {
    require_even_weight(k_known);
    const RingSpec R1 = f.ring().with_m(1);
    const ResidueSeries g = f.ring().m == 1 ? f : f.reduced(R1);
    const i64 W = sturm_bound(k_known) + 8;
    require(g.prec24() >= 24 * W, Errc::InsufficientPrecision,
            "filtration needs " + std::to_string(W) + " coefficients");
    const Vec w = g.window(0, W);
    if (std::all_of(w.begin(), w.end(), [](u64 x) { return x == 0; })) return std::nullopt;
    const int step = static_cast<int>(R1.ell) - 1;
    for (int k = k_known % step; k <= k_known; k += step) {
        if (dim_Mk(k) == 0) continue;
        auto B = basis_Mk(k, false, 24 * W, R1);
        if (B->coordinates(w).has_value()) return k;
    }
    fail(Errc::NoCandidateWeight, "no weight <= " + std::to_string(k_known) + " in the class matches");
}

} // namespace ptower

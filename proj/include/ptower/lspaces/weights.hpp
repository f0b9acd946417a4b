#pragma once

#include "ptower/forms/basis.hpp"
#include "ptower/partitions/tower.hpp"

namespace ptower {

inline int k_spt(u32 ell, u32 m) { return static_cast<int>(ipow(ell, m - 1) * (ell - 1) + 2); }

inline int k_even(u32 ell, u32 m) { return static_cast<int>(ipow(ell, m - 1) * (ell - 1)); }

inline int k_odd(u32 r, u32 ell, u32 j) {
    const i64 l = ell;
    if (j == 1) return static_cast<int>((r / 2 + 1) * (l - 1));
    if (j == 2) return static_cast<int>((r / 2) * l * (l - 1));
    return static_cast<int>(ipow(ell, j - 1) * (l - 1));
}

// Weight k with L(b) congruent mod ell^m to a level-1 form of weight k.
inline int tower_weight(const TowerKind& kind, u32 ell, u32 m, u32 b) {
    if (kind.spt) return k_spt(ell, m);
    return b % 2 == 0 ? k_even(ell, m) : k_odd(kind.r, ell, m);
}

inline i64 membership_window(int k) { return sturm_bound(k) + 8; }

inline int r_bound(const TowerKind& kind, u32 ell) {
    const i64 l = ell;
    if (kind.spt) {
        i64 R = (l + 1) / 12 - (l * l - 1) / (24 * l);
        if (l % 12 == 1) R -= 1;
        return static_cast<int>(R);
    }
    const i64 k = k_odd(kind.r, ell, 1);
    i64 R = k / 12 - static_cast<i64>(kind.r) * (l * l - 1) / (24 * l);
    if (k % 12 == 2) R -= 1;
    return static_cast<int>(R);
}

// Least exponent carried by f | D_r(ell) when f has nonnegative valuation.
inline i64 d_r_min_exponent(u32 ell, u32 r) {
    const i64 l = ell;
    return ceil_div(static_cast<i64>(r) * (l * l - 1), 24 * l);
}

struct DInvariants {
    bool spt = false;
    int d = 0;                  // d_ell(spt) or d_ell(r)
    std::optional<int> d_prime; // d'_ell(r), p_r only
};

// Theoretical stabilization index bound given the d-invariants.
inline i64 theoretical_b_bound(const TowerKind& kind, u32 m, const DInvariants& d) {
    if (kind.spt) return 2 * (d.d + 1) * static_cast<i64>(m) + 1;
    if (m == 1) return 2 * d.d + 1;
    return 2 * (d.d + 1) + 2 * (d.d_prime.value_or(0) + 1) * static_cast<i64>(m - 1);
}

} // namespace ptower

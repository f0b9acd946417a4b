#pragma once

#include <functional>
#include <vector>

#include "ptower/lspaces/weights.hpp"

namespace ptower {

namespace detail {

struct OpContext {
    RingSpec ring;
    u32 r = 1;
    ResidueSeries phi;  // Phi_ell^r to the largest precision any input needs

    ResidueSeries U(const ResidueSeries& f) const { return u_ell(f, ring.ell); }
    ResidueSeries D(const ResidueSeries& f) const { return u_ell(series_mul(f, phi), ring.ell); }
    ResidueSeries X(const ResidueSeries& f) const { return D(U(f)); }
    ResidueSeries Y(const ResidueSeries& f) const { return U(D(f)); }
};

// Coordinates in the cusp basis of weight k of op(f) for each f.
inline std::vector<Vec> image_coordinates(const std::vector<ResidueSeries>& inputs,
                                          const std::function<ResidueSeries(const ResidueSeries&)>& op, int k,
                                          const RingSpec& ring) {
    const i64 W = membership_window(k);
    auto S = basis_Mk(k, true, 24 * W, ring);
    std::vector<Vec> out;
    for (const auto& f : inputs) {
        const ResidueSeries g = op(f);
        auto c = S->coordinates(g.window(0, W));
        require(c.has_value(), Errc::InvariantViolation,
                "operator image is not congruent to a cusp form of weight " + std::to_string(k));
        out.push_back(std::move(*c));
    }
    return out;
}

inline std::vector<ResidueSeries> basis_inputs(int k, bool cusp, i64 prec24, const RingSpec& ring, i64 min_pivot = 0) {
    auto B = basis_Mk(k, cusp, prec24, ring);
    std::vector<ResidueSeries> v;
    for (std::size_t i = 0; i < B->dim(); ++i)
        if (B->pivot(i) >= min_pivot) v.push_back(B->rows[i].truncated(prec24));
    return v;
}

// min t with V A^t inside the stable image of A.
inline int iterations_to_stable(std::vector<Vec> V, const std::vector<Vec>& A, u64 p) {
    const StableSubspace S = stable_image(A, p);
    const std::size_t n = A.size();
    for (std::size_t t = 0; t <= n + 1; ++t) {
        bool inside = true;
        for (const auto& v : V)
            if (!in_subspace(v, S)) {
                inside = false;
                break;
            }
        if (inside) return static_cast<int>(t);
        for (auto& v : V) v = vec_mat(v, A, p);
    }
    fail(Errc::NonTermination, "images never entered the stable subspace");
}

} // namespace detail

// Matrices over F_ell used by the d-invariants, exposed for inspection and testing.
struct DOperators {
    int k_from = 0;              // weight of the starting space (M_{l+1} or M_{l-1})
    int k_odd = 0;               // cusp space carrying the odd recursion
    std::vector<Vec> A_odd;      // X_r on S_{k_odd}
    std::vector<Vec> V_odd;      // D_r images of M_{k_from}
    std::vector<Vec> A_even;     // Y_r on S_{l-1} (p_r only)
    std::vector<Vec> V_even;     // restricted M_{l-1} in S_{l-1} (p_r only)
};

inline DOperators d_operators(const TowerKind& kind, u32 ell) {
    const RingSpec R(ell, 1);
    const u32 r = kind.phi_power();
    const int k_from = kind.spt ? static_cast<int>(ell) + 1 : static_cast<int>(ell) - 1;
    const int ko = kind.spt ? static_cast<int>(ell) + 1 : k_odd(r, ell, 1);
    const i64 l2 = i64(ell) * ell;
    const i64 W = std::max(membership_window(ko), membership_window(k_from));
    const i64 prec = 24 * l2 * W;
    detail::OpContext ctx{R, r, phi_ell(R, r, prec + static_cast<i64>(r) * (l2 - 1)).series};

    DOperators ops;
    ops.k_from = k_from;
    ops.k_odd = ko;
    auto Sodd = detail::basis_inputs(ko, true, prec, R);
    ops.A_odd = detail::image_coordinates(Sodd, [&](const ResidueSeries& f) { return ctx.X(f); }, ko, R);
    auto Mfrom = detail::basis_inputs(k_from, false, prec, R);
    ops.V_odd = detail::image_coordinates(Mfrom, [&](const ResidueSeries& f) { return ctx.D(f); }, ko, R);
    if (!kind.spt) {
        const int ke = static_cast<int>(ell) - 1;
        auto Seven = detail::basis_inputs(ke, true, prec, R);
        ops.A_even = detail::image_coordinates(Seven, [&](const ResidueSeries& f) { return ctx.Y(f); }, ke, R);
        const i64 c0 = ceil_div(static_cast<i64>(r) * (l2 - 1), 24 * l2);
        auto restricted = detail::basis_inputs(ke, false, prec, R, c0);
        ops.V_even = detail::image_coordinates(restricted, [](const ResidueSeries& f) { return f; }, ke, R);
    }
    return ops;
}

inline DInvariants d_invariants(const TowerKind& kind, u32 ell) {
    require_tower_prime(kind, ell);
    const DOperators ops = d_operators(kind, ell);
    DInvariants d;
    d.spt = kind.spt;
    d.d = detail::iterations_to_stable(ops.V_odd, ops.A_odd, ell);
    if (!kind.spt) d.d_prime = detail::iterations_to_stable(ops.V_even, ops.A_even, ell);
    return d;
}

} // namespace ptower

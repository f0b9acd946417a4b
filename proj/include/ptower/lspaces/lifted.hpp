#pragma once

#include <map>
#include <memory>
#include <vector>

#include "ptower/lspaces/weights.hpp"

namespace ptower {

// Matrix of one tower step restricted to a level-1 weight space: row i holds the first
// `window` coefficients of (basis_i)|step, where basis is the diagonal basis of weight k_in.
struct StepMatrix {
    int k_in = 0;
    int k_out = 0;
    i64 window = 0;
    std::vector<Vec> rows;
};

inline StepMatrix step_matrix(StepKind kind, u32 r, int k_in, int k_out, const RingSpec& ring) {
    const u32 l = ring.ell;
    const i64 W = membership_window(k_out);
    const i64 in_prec = u_input_precision(l, 24 * W);
    auto B = basis_Mk(k_in, false, in_prec, ring);
    StepMatrix S{k_in, k_out, W, {}};
    std::optional<ResidueSeries> phi;
    if (kind == StepKind::D) phi = phi_ell(ring, r, in_prec).series;
    for (const auto& f : B->rows) {
        const ResidueSeries g = f.truncated(in_prec);
        const ResidueSeries out = kind == StepKind::U ? u_ell(g, l, 24 * W)
                                                      : u_ell(series_mul(g, *phi, in_prec), l, 24 * W);
        S.rows.push_back(out.window(0, W));
    }
    return S;
}

// Tower levels held as coordinates in diagonal bases of the weights they are congruent to.
// Level b+1 is obtained exactly from level b by a matrix product on the first Sturm+8
// coefficients and re-identified in the target basis, so depth costs nothing in precision.
class LiftedTower {
public:
    LiftedTower(const TowerKind& kind, const RingSpec& ring) : kind_(kind), ring_(ring) {
        require_tower_prime(kind, ring.ell);
        require(kind.spt || kind.r >= 2 || ring.m == 1, Errc::InvalidArgument,
                "lifted p_1 towers are only available mod ell");
        const u32 b0 = kind.first_level();
        const int k0 = weight(b0);
        const i64 W = membership_window(k0);
        Vec w;
        if (kind.spt) {
            w = spt_base_level(ring, 24 * W).window(0, W);
        } else {
            w.assign(static_cast<std::size_t>(W), 0);
            w[0] = 1;
        }
        push_level(b0, std::move(w));
    }

    const TowerKind& kind() const { return kind_; }
    const RingSpec& ring() const { return ring_; }
    u32 first() const { return kind_.first_level(); }
    u32 top() const { return first() + static_cast<u32>(windows_.size()) - 1; }
    int weight(u32 b) const { return tower_weight(kind_, ring_.ell, ring_.m, b); }
    i64 window_length(u32 b) const { return membership_window(weight(b)); }

    const Vec& window(u32 b) const { return windows_.at(b - first()); }
    const Vec& coordinates(u32 b) const { return coords_.at(b - first()); }

    // L(b) as a q-series to prec24, recovered from its weight-space coordinates.
    ResidueSeries series(u32 b, i64 prec24) const {
        auto B = basis_Mk(weight(b), false, prec24, ring_);
        return B->combine(coordinates(b), prec24);
    }

    void extend_to(u32 B) {
        while (top() < B) {
            const u32 b = top() + 1;
            const StepMatrix& M = matrix_for(b);
            Vec w = vec_mat(coordinates(b - 1), M.rows, ring_.modulus);
            push_level(b, std::move(w));
        }
    }

private:
    void push_level(u32 b, Vec w) {
        const int k = weight(b);
        auto B = basis_Mk(k, false, 24 * static_cast<i64>(w.size()), ring_);
        auto c = B->coordinates(w);
        require(c.has_value(), Errc::InvariantViolation,
                "L(" + std::to_string(b) + ") is not congruent to a weight " + std::to_string(k) + " form mod " +
                    std::to_string(ring_.modulus));
        windows_.push_back(std::move(w));
        coords_.push_back(std::move(*c));
    }

    const StepMatrix& matrix_for(u32 b) {
        const ScheduleStep st = tower_step(kind_, ring_.ell, b);
        const int k_in = weight(b - 1), k_out = weight(b);
        const auto key = std::make_tuple(st.kind == StepKind::U, k_in, k_out);
        auto it = matrices_.find(key);
        if (it == matrices_.end())
            it = matrices_.emplace(key, step_matrix(st.kind, st.r, k_in, k_out, ring_)).first;
        return it->second;
    }

    TowerKind kind_;
    RingSpec ring_;
    std::vector<Vec> windows_;
    std::vector<Vec> coords_;
    std::map<std::tuple<bool, int, int>, StepMatrix> matrices_;
};

} // namespace ptower

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ptower/lspaces/dinv.hpp"
#include "ptower/lspaces/lifted.hpp"

namespace ptower {

enum class Parity { Odd, Even };

inline std::string parity_name(Parity p) { return p == Parity::Odd ? "odd" : "even"; }

struct ParityStabilization {
    Parity parity = Parity::Odd;
    u32 stable_from = 0;                 // least beta of this parity with Lambda(beta) = Omega
    u32 certified_through = 0;           // Lambda(beta) known exactly for beta <= this
    ModuleSpan omega;
    std::size_t rank = 0;
    std::vector<std::size_t> span_ranks;  // rank of Lambda(beta) for beta = first, first+2, ...
    std::vector<bool> nested;             // Lambda(beta+2) inside Lambda(beta)
};

struct StabilizationResult {
    TowerKind kind;
    RingSpec ring;
    u32 b_max = 0;
    ParityStabilization odd;
    ParityStabilization even;
    u32 observed_b = 0;       // least b' with both parities constant from b'
    std::size_t rank = 0;     // rank of Omega^odd
    int bound_R = 0;
    i64 bound_b = 0;
    DInvariants dinv;

    const ParityStabilization& parity(Parity p) const { return p == Parity::Odd ? odd : even; }
};

namespace detail {

inline u32 first_of_parity(u32 first, Parity p) {
    const u32 want = p == Parity::Odd ? 1 : 0;
    return first % 2 == want ? first : first + 1;
}

// Spans Lambda(beta) for beta of parity p in [lo, hi], truncated at hi, plus the
// exactness certificate from the level hi + 2.
inline std::optional<ParityStabilization> stabilize_parity(const LiftedTower& T, Parity p, u32 hi) {
    const u32 lo = first_of_parity(T.first(), p);
    if (hi % 2 != lo % 2) --hi;
    const u32 extra = hi + 2;
    const RingSpec& R = T.ring();
    const i64 W = T.window_length(lo);
    const std::size_t count = (hi - lo) / 2 + 1;
    std::vector<ModuleSpan> S(count);
    for (std::size_t i = count; i-- > 0;) {
        const u32 beta = lo + 2 * static_cast<u32>(i);
        std::vector<Vec> gens = i + 1 < count ? S[i + 1].rows : std::vector<Vec>{};
        gens.push_back(T.window(beta));
        S[i] = howell(std::move(gens), R, Window{0, W, 24});
    }
    // Lambda(beta) = S[beta] exactly once S[beta] already holds the next level past the top.
    std::optional<std::size_t> exact;
    for (std::size_t i = 0; i < count; ++i) {
        if (member(T.window(extra), S[i]).has_value())
            exact = i;
        else
            break;
    }
    if (!exact || *exact == 0) return std::nullopt;
    ParityStabilization out;
    out.parity = p;
    out.certified_through = lo + 2 * static_cast<u32>(*exact);
    bool found = false;
    for (std::size_t i = 0; i + 1 <= *exact; ++i) {
        if (S[i] == S[i + 1]) {
            out.stable_from = lo + 2 * static_cast<u32>(i);
            out.omega = S[i];
            found = true;
            break;
        }
    }
    if (!found) return std::nullopt;
    out.rank = out.omega.rank();
    for (std::size_t i = 0; i <= *exact; ++i) {
        out.span_ranks.push_back(S[i].rank());
        if (i + 1 <= *exact) out.nested.push_back(contains(S[i], S[i + 1]));
    }
    return out;
}

} // namespace detail

// Stabilized spans of both parities. With b_max = 0 the depth grows until the spans are
// certified; a fixed b_max that is too shallow raises NotStabilized.
inline StabilizationResult stabilize(const TowerKind& kind, const RingSpec& ring, u32 b_max = 0) {
    StabilizationResult res;
    res.kind = kind;
    res.ring = ring;
    res.dinv = d_invariants(kind, ring.ell);
    res.bound_R = r_bound(kind, ring.ell);
    res.bound_b = theoretical_b_bound(kind, ring.m, res.dinv);

    LiftedTower T(kind, ring);
    const bool automatic = b_max == 0;
    const int dim = dim_Mk(tower_weight(kind, ring.ell, ring.m, 1));
    const u32 limit = static_cast<u32>(res.bound_b) + 4 * (ring.m * static_cast<u32>(dim) + 4);
    u32 hi = automatic ? static_cast<u32>(std::max<i64>(res.bound_b, 3)) +
                             2 * (ring.m * static_cast<u32>(std::max(res.bound_R, 0) + 1) + 2)
                       : b_max;
    while (true) {
        T.extend_to(hi + 2);
        auto odd = detail::stabilize_parity(T, Parity::Odd, hi);
        auto even = detail::stabilize_parity(T, Parity::Even, hi);
        if (odd && even) {
            res.b_max = hi;
            res.odd = std::move(*odd);
            res.even = std::move(*even);
            break;
        }
        if (!automatic || hi >= limit)
            fail(Errc::NotStabilized, "spans of " + kind.name() + " mod " + std::to_string(ring.modulus) +
                                          " still shrinking at b_max=" + std::to_string(hi));
        hi = std::min(limit, 2 * hi);
    }
    const i64 b_odd = res.odd.stable_from, b_even = res.even.stable_from;
    res.observed_b = static_cast<u32>(std::max<i64>({b_odd - 1, b_even - 1, i64(kind.first_level())}));
    res.rank = res.odd.rank;
    return res;
}

} // namespace ptower

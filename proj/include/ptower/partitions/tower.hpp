#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ptower/operators/operators.hpp"
#include "ptower/partitions/arith.hpp"
#include "ptower/series/precision.hpp"

namespace ptower {

struct TowerKind {
    bool spt = false;
    u32 r = 1;

    static TowerKind pr(u32 r) { return {false, r}; }
    static TowerKind spt_kind() { return {true, 1}; }

    u32 phi_power() const { return spt ? 1 : r; }
    u32 first_level() const { return spt ? 1 : 0; }
    std::string name() const { return spt ? "spt" : "p" + std::to_string(r); }

    friend bool operator==(const TowerKind&, const TowerKind&) = default;
};

inline void require_tower_prime(const TowerKind& kind, u32 ell) {
    require(is_prime(ell), Errc::InvalidArgument, std::to_string(ell) + " is not prime");
    if (kind.spt)
        require(ell >= 5, Errc::PrimeTooSmall, "spt towers need ell >= 5");
    else
        require(ell >= kind.r + 5, Errc::PrimeTooSmall,
                "p_r towers need ell >= r + 5 (ell=" + std::to_string(ell) + ", r=" + std::to_string(kind.r) + ")");
}

// Step producing level b from level b-1: U for even b, D for odd b.
inline ScheduleStep tower_step(const TowerKind& kind, u32 ell, u32 b) {
    return b % 2 == 0 ? ScheduleStep{StepKind::U, ell, 0} : ScheduleStep{StepKind::D, ell, kind.phi_power()};
}

inline std::vector<ScheduleStep> tower_schedule(const TowerKind& kind, u32 ell, u32 from_b, u32 to_b) {
    std::vector<ScheduleStep> s;
    for (u32 b = from_b + 1; b <= to_b; ++b) s.push_back(tower_step(kind, ell, b));
    return s;
}

struct Tower {
    TowerKind kind;
    RingSpec ring;
    u32 first = 0;
    std::vector<ResidueSeries> levels;
    PrecisionPlan plan;
    // Levels below this were skipped because a stored deeper level was reused.
    u32 materialized_from = 0;

    u32 top() const { return first + static_cast<u32>(levels.size()) - 1; }

    const ResidueSeries& level(u32 b) const {
        require(b >= materialized_from && b <= top(), Errc::InvalidArgument,
                "tower level " + std::to_string(b) + " not built");
        return levels[b - first];
    }
};

// L_ell(spt,1) = eta(ell z) alpha_ell to prec24.
inline ResidueSeries spt_base_level(const RingSpec& ring, i64 prec24) {
    const i64 l = ring.ell;
    const ResidueSeries alpha = alpha_ell(ring, prec24 - l);
    const ResidueSeries eta = eta_power(l, 1, prec24 + l, ring).series;
    ResidueSeries L = series_mul(eta, alpha, prec24);
    return L.rebased(L.offset24(), 24);
}

struct TowerOptions {
    // Optional persistence hooks: lookup(b, prec24) returns a stored level with at least prec24.
    std::function<std::optional<ResidueSeries>(u32, i64)> lookup;
    std::function<void(u32, const ResidueSeries&)> store;
    std::function<void(const std::string&)> log;
};

inline Tower build_tower(const TowerKind& kind, const RingSpec& ring, u32 B, i64 target_prec24,
                         const TowerOptions& opt = {}) {
    require_tower_prime(kind, ring.ell);
    const u32 first = kind.first_level();
    require(B >= first, Errc::InvalidArgument, "tower top below base level");
    const auto sched = tower_schedule(kind, ring.ell, first, B);
    Tower T{kind, ring, first, {}, plan_precision(sched, target_prec24), first};

    // Resume from the deepest stored level that carries the planned precision.
    u32 start = first;
    std::optional<ResidueSeries> cur;
    if (opt.lookup) {
        for (u32 b = B + 1; b-- > first;) {
            if (auto s = opt.lookup(b, T.plan.level[b - first])) {
                start = b;
                cur = s->truncated(T.plan.level[b - first]);
                break;
            }
        }
    }
    if (!cur) {
        const i64 p0 = T.plan.base();
        cur = kind.spt ? spt_base_level(ring, p0) : ResidueSeries::one(ring, p0);
        if (opt.store && kind.spt) opt.store(first, *cur);
    }
    T.materialized_from = start;
    for (u32 b = first; b < start; ++b) T.levels.emplace_back(ring, 0, 24, 0);
    T.levels.push_back(*cur);

    i64 phi_prec = 0;
    for (std::size_t i = start - first; i < sched.size(); ++i) phi_prec = std::max(phi_prec, T.plan.factor[i]);
    std::optional<ResidueSeries> phi;
    if (phi_prec > 0) phi = phi_ell(ring, kind.phi_power(), phi_prec).series;

    for (u32 b = start + 1; b <= B; ++b) {
        const std::size_t i = b - 1 - first;
        const ScheduleStep& st = sched[i];
        const i64 out = T.plan.level[i + 1];
        ResidueSeries next;
        if (st.kind == StepKind::U) {
            next = u_ell(*cur, ring.ell, out);
        } else {
            const i64 prod = u_input_precision(ring.ell, out);
            next = u_ell(series_mul(*cur, phi->truncated(std::min(phi->prec24(), T.plan.factor[i])), prod), ring.ell, out);
        }
        if (opt.log) opt.log("level " + std::to_string(b) + " via " + step_name(st) + ": " + next.describe());
        if (opt.store) opt.store(b, next);
        T.levels.push_back(next);
        cur = std::move(next);
    }
    return T;
}

struct PValue {
    i64 n24 = 0;  // index n of q^(n/24)
    std::optional<i64> argument;
    std::optional<i64> secondary;  // spt only: (ell^(b-2) n + 1)/24
    u64 coeff = 0;
};

struct PSeries {
    TowerKind kind;
    u32 ell = 5;
    u32 b = 0;
    ResidueSeries series;

    // (ell^b n + r)/24 when it is a nonnegative integer.
    std::optional<i64> argument(i64 n) const {
        const i128 x = i128(ipow(ell, b)) * n + kind.phi_power();
        if (x < 0 || x % 24 != 0) return std::nullopt;
        return static_cast<i64>(x / 24);
    }

    std::optional<i64> secondary_argument(i64 n) const {
        if (!kind.spt) return std::nullopt;
        i128 num;
        i128 den = 24;
        if (b >= 2)
            num = i128(ipow(ell, b - 2)) * n + 1;
        else {
            num = i128(n) + ipow(ell, 2 - b);
            den = 24 * i128(ipow(ell, 2 - b));
        }
        if (num < 0 || num % den != 0) return std::nullopt;
        return static_cast<i64>(num / den);
    }

    u64 at(i64 n) const { return series.at24(n); }

    // Indices n (in 24ths) carried by the series, paired with their argument map.
    std::vector<PValue> values() const {
        std::vector<PValue> out;
        for (std::size_t k = 0; k < series.size(); ++k) {
            const i64 n = series.exponent24(k);
            out.push_back({n, argument(n), secondary_argument(n), series.slot(k)});
        }
        return out;
    }

    std::vector<i64> negative_support() const {
        std::vector<i64> out;
        for (std::size_t k = 0; k < series.size(); ++k)
            if (series.exponent24(k) < 0 && series.slot(k)) out.push_back(series.exponent24(k));
        return out;
    }

    // P(24z): exponent n/24 becomes n.
    ResidueSeries rescaled() const { return dilate(series, 24); }
};

// L / eta(z)^r for even b, L / eta(ell z)^r for odd b.
inline PSeries extract_P(const ResidueSeries& L, const TowerKind& kind, u32 b) {
    const RingSpec& ring = L.ring();
    const i64 t = b % 2 == 0 ? 1 : ring.ell;
    const i64 r = kind.phi_power();
    const i64 out = L.prec24() - r * t;
    const ResidueSeries inv_eta = eta_power(t, -r, out, ring).series;
    ResidueSeries P = series_mul(L, inv_eta, out);
    return PSeries{kind, ring.ell, b, P.rebased(P.offset24(), 24)};
}

inline PSeries extract_P(const Tower& T, u32 b) { return extract_P(T.level(b), T.kind, b); }

// The value P's coefficient at n must equal, computed from direct tables.
inline u64 expected_P_coefficient(const PSeries& P, i64 n, const ResidueSeries& direct, const RingSpec& ring) {
    if (!P.kind.spt) {
        auto x = P.argument(n);
        return x ? direct.at(*x) % ring.modulus : 0;
    }
    const i64 l = P.ell;
    const auto x = P.argument(n), y = P.secondary_argument(n);
    const u64 v = x ? a_at(direct, *x) : 0, w = y ? a_at(direct, *y) : 0;
    return ring.sub(v % ring.modulus, ring.mul(ring.reduce(chi12(l) * l), w % ring.modulus));
}

} // namespace ptower

#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "ptower/forms/eta.hpp"

namespace ptower {

// sum p_r(n) q^n = E(q)^(-r).
inline ResidueSeries pr_series(u32 r, i64 prec24, const RingSpec& ring) {
    require(r >= 1, Errc::InvalidArgument, "p_r needs r >= 1");
    return detail::euler_power(-static_cast<i64>(r), prec24, ring);
}

namespace detail {

// s(n) for n < N by the running product
//   sum_n q^n/(1-q^n) prod_{m<n}(1-q^m), then one product with sum p(n) q^n.
inline std::vector<u64> spt_values_uncached(i64 N, const RingSpec& ring) {
    if (N <= 0) return {};
    const u32 M = static_cast<u32>(ring.modulus);
    const std::size_t n_max = static_cast<std::size_t>(N);
    std::vector<u32> R(n_max, 0), S(n_max, 0), c(n_max, 0);
    R[0] = 1;
    for (std::size_t n = 1; n < n_max; ++n) {
        const std::size_t len = n_max - n;
        // c = R / (1 - q^n) truncated to len.
        for (std::size_t j = 0; j < len && j < n; ++j) c[j] = R[j];
        for (std::size_t j = n; j < len; ++j) {
            u32 v = R[j] + c[j - n];
            c[j] = v >= M ? v - M : v;
        }
        u32* s = S.data() + n;
        for (std::size_t j = 0; j < len; ++j) {
            u32 v = s[j] + c[j];
            s[j] = v >= M ? v - M : v;
        }
        // R *= (1 - q^n), only the first len - 1 entries matter from here on.
        const std::size_t keep = len > 0 ? len - 1 : 0;
        for (std::size_t j = keep; j-- > n;) {
            u32 v = R[j] + M - R[j - n];
            R[j] = v >= M ? v - M : v;
        }
    }
    std::vector<u64> inner(S.begin(), S.end());
    ResidueSeries Sser(ring, 0, 24, 24 * N, std::move(inner));
    ResidueSeries prod = series_mul(Sser, pr_series(1, 24 * N, ring), 24 * N);
    return std::vector<u64>(prod.coeffs().begin(), prod.coeffs().end());
}

class SptCache {
public:
    std::vector<u64> get(i64 N, const RingSpec& ring) {
        std::lock_guard lock(mu_);
        auto key = std::make_pair(ring.ell, ring.m);
        auto it = map_.find(key);
        if (it == map_.end() || static_cast<i64>(it->second.size()) < N) {
            // Reuse a higher power of the same prime if one is cached.
            for (auto& [k, v] : map_)
                if (k.first == ring.ell && k.second > ring.m && static_cast<i64>(v.size()) >= N) {
                    std::vector<u64> r(v.begin(), v.begin() + N);
                    for (auto& x : r) x %= ring.modulus;
                    return r;
                }
            map_[key] = spt_values_uncached(N, ring);
            it = map_.find(key);
        }
        return std::vector<u64>(it->second.begin(), it->second.begin() + N);
    }

private:
    std::mutex mu_;
    std::map<std::pair<u32, u32>, std::vector<u64>> map_;
};

inline SptCache& spt_cache() {
    static SptCache c;
    return c;
}

} // namespace detail

inline ResidueSeries spt_series(i64 prec24, const RingSpec& ring) {
    const i64 N = std::max<i64>(0, ceil_div(prec24, 24));
    return ResidueSeries(ring, 0, 24, prec24, detail::spt_cache().get(N, ring));
}

// a(n) = 12 s(n) + (24n - 1) p(n).
inline ResidueSeries a_series(i64 prec24, const RingSpec& ring) {
    const ResidueSeries s = spt_series(prec24, ring), p = pr_series(1, prec24, ring);
    std::vector<u64> a(s.size());
    for (std::size_t n = 0; n < a.size(); ++n)
        a[n] = ring.add(ring.mul(12, s.slot(n)), ring.mul(ring.reduce(24 * static_cast<i64>(n) - 1), p.slot(n)));
    return ResidueSeries(ring, 0, 24, prec24, std::move(a));
}

// s(n) = 12^(-1) (a(n) - (24n - 1) p(n)).
inline ResidueSeries spt_from_a(const ResidueSeries& a) {
    const RingSpec& R = a.ring();
    const ResidueSeries p = pr_series(1, a.prec24(), R);
    const u64 inv12 = R.inv(12);
    std::vector<u64> s(a.size());
    for (std::size_t n = 0; n < s.size(); ++n)
        s[n] = R.mul(inv12, R.sub(a.slot(n), R.mul(R.reduce(24 * static_cast<i64>(n) - 1), p.slot(n))));
    return ResidueSeries(R, 0, 24, a.prec24(), std::move(s));
}

// a(x) with a(x) = 0 for negative x; x beyond the table is a precision error.
inline u64 a_at(const ResidueSeries& a, i64 x) { return x < 0 ? 0 : a.at(x); }

inline i64 alpha_top_index(u32 ell, i64 prec24) {
    const i64 l = ell;
    const i64 nmax = ceil_div(prec24 + l, 24) - 1;
    return l * nmax - (l * l - 1) / 24;
}

// alpha_ell = sum_{n>=0} (a(ell n - (ell^2-1)/24) - chi12(ell) ell a(n/ell)) q^(n - ell/24).
inline ResidueSeries alpha_ell(const RingSpec& ring, i64 prec24, const ResidueSeries& a) {
    const i64 l = ring.ell, shift = (l * l - 1) / 24;
    ResidueSeries out(ring, -l, 24, prec24);
    const u64 corr = ring.reduce(-chi12(l) * l);
    std::vector<u64> c(out.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
        const i64 n = static_cast<i64>(k);
        u64 v = a_at(a, l * n - shift);
        if (n % l == 0) v = ring.add(v, ring.mul(corr, a_at(a, n / l)));
        c[k] = v;
    }
    return ResidueSeries(ring, -l, 24, prec24, std::move(c));
}

inline ResidueSeries alpha_ell(const RingSpec& ring, i64 prec24) {
    const i64 top = std::max<i64>(alpha_top_index(ring.ell, prec24), 0);
    return alpha_ell(ring, prec24, a_series(24 * (top + 1), ring));
}

// Least nonnegative residue of 24^(-1) mod ell^b.
inline i64 delta_ell(u32 ell, u32 b) {
    if (b == 0) return 0;
    return static_cast<i64>(res_inv(24, RingSpec(ell, b)));
}

} // namespace ptower

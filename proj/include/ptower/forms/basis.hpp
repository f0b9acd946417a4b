#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <tuple>
#include <vector>

#include "ptower/forms/eta.hpp"
#include "ptower/linalg/modmat.hpp"

namespace ptower {

inline void require_even_weight(int k) {
    require(k % 2 == 0, Errc::OddWeight, "weight " + std::to_string(k) + " is odd");
}

inline int dim_Mk(int k) {
    require_even_weight(k);
    if (k < 0) return 0;
    return k % 12 == 2 ? k / 12 : k / 12 + 1;
}

inline int dim_Sk(int k) {
    const int d = dim_Mk(k);
    return k >= 4 || d == 0 ? std::max(d - 1, 0) : d - 1;
}

inline int sturm_bound(int k) { return k / 12 + 1; }

// Level-1 basis with integer coefficients, diagonal on its pivot exponents:
// row i is q^{p_i} + O(q^{p_last+1}) with zero coefficients at every other pivot.
struct FormBasis {
    int weight = 0;
    bool cuspidal = false;
    RingSpec ring;
    i64 prec24 = 0;
    std::vector<ResidueSeries> rows;

    std::size_t dim() const { return rows.size(); }
    int sturm() const { return sturm_bound(weight); }
    i64 pivot(std::size_t i) const { return static_cast<i64>(i) + (cuspidal ? 1 : 0); }
    i64 terms() const { return ceil_div(prec24, 24); }

    std::vector<Vec> window_rows(i64 W) const {
        require(W <= terms(), Errc::InsufficientPrecision, "basis window beyond precision");
        std::vector<Vec> out;
        for (const auto& r : rows) out.push_back(r.window(0, W));
        return out;
    }

    ModuleSpan span(i64 W) const { return howell(window_rows(W), ring, Window{0, W, 24}); }

    // Coordinates of the first W coefficients of f, or nullopt if no combination matches.
    std::optional<Vec> coordinates(std::span<const u64> f) const {
        const i64 W = static_cast<i64>(f.size());
        require(W <= terms(), Errc::InsufficientPrecision, "membership window beyond basis precision");
        Vec c(rows.size(), 0);
        Vec rest(f.begin(), f.end());
        for (auto& x : rest) x %= ring.modulus;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const i64 p = pivot(i);
            if (p >= W) return std::nullopt;
            c[i] = rest[static_cast<std::size_t>(p)];
            if (!c[i]) continue;
            const auto rc = rows[i].coeffs();
            for (i64 n = p; n < W; ++n)
                rest[static_cast<std::size_t>(n)] = ring.sub(rest[static_cast<std::size_t>(n)], ring.mul(c[i], rc[static_cast<std::size_t>(n)]));
        }
        for (u64 x : rest)
            if (x) return std::nullopt;
        return c;
    }

    std::optional<Vec> coordinates(const ResidueSeries& f, i64 W) const {
        require(f.ring().modulus % ring.modulus == 0 && f.ring().ell == ring.ell, Errc::RingMismatch,
                "series ring incompatible with basis ring");
        Vec w = f.window(0, W);
        for (auto& x : w) x %= ring.modulus;
        return coordinates(w);
    }

    ResidueSeries combine(const Vec& c, i64 out_prec24) const {
        require(out_prec24 <= prec24, Errc::InsufficientPrecision, "combination beyond basis precision");
        ResidueSeries acc(ring, 0, 24, out_prec24);
        std::vector<u64> a(acc.size(), 0);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (!c[i]) continue;
            const auto rc = rows[i].coeffs();
            for (std::size_t n = 0; n < a.size(); ++n) a[n] = ring.add(a[n], ring.mul(c[i], rc[n]));
        }
        return ResidueSeries(ring, 0, 24, out_prec24, std::move(a));
    }
};

namespace detail {

inline FormBasis build_basis(int k, bool cuspidal, i64 prec24, const RingSpec& ring) {
    FormBasis B{k, cuspidal, ring, prec24, {}};
    const int d = dim_Mk(k);
    if (d == 0) return B;
    if (k == 0) {
        if (!cuspidal) B.rows.push_back(ResidueSeries::one(ring, prec24));
        return B;
    }
    const ResidueSeries E4 = eisenstein(4, prec24, ring).series;
    const ResidueSeries E6 = eisenstein(6, prec24, ring).series;
    const ResidueSeries E4cube = series_pow(E4, 3, prec24);
    const ResidueSeries Delta = (E4cube - series_mul(E6, E6, prec24)).scaled(ring.inv(1728));
    const ResidueSeries E6sq = series_mul(E6, E6, prec24);

    // Monomial of the lowest weight row, then climb by E6^2 (weight 12) per row.
    auto split = [](int w) {
        int a = (w % 6 == 0) ? 0 : (w % 6 == 4 ? 1 : 2);
        return std::pair<int, int>{a, (w - 4 * a) / 6};
    };
    std::vector<ResidueSeries> mono(static_cast<std::size_t>(d));
    {
        auto [a, b] = split(k - 12 * (d - 1));
        ResidueSeries m = series_mul(series_pow(E4, static_cast<u64>(a), prec24),
                                     series_pow(E6, static_cast<u64>(b), prec24), prec24);
        mono[static_cast<std::size_t>(d - 1)] = m;
        for (int j = d - 2; j >= 0; --j)
            mono[static_cast<std::size_t>(j)] = series_mul(mono[static_cast<std::size_t>(j + 1)], E6sq, prec24);
    }
    std::vector<Vec> rows(static_cast<std::size_t>(d));
    ResidueSeries dpow = ResidueSeries::one(ring, prec24);
    for (int j = 0; j < d; ++j) {
        if (j > 0) dpow = series_mul(dpow, Delta, prec24);
        auto prod = series_mul(dpow, mono[static_cast<std::size_t>(j)], prec24);
        rows[static_cast<std::size_t>(j)] = Vec(prod.coeffs().begin(), prod.coeffs().end());
    }
    const std::size_t N = rows[0].size();
    for (std::size_t i = 1; i < rows.size() && i < N; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            const u64 t = rows[j][i];
            if (t) detail::axpy_sub(rows[j], rows[i], t, ring.modulus);
        }
    for (std::size_t j = cuspidal ? 1 : 0; j < rows.size(); ++j)
        B.rows.emplace_back(ring, 0, 24, prec24, std::move(rows[j]));
    return B;
}

class BasisCache {
public:
    std::shared_ptr<const FormBasis> get(int k, bool cuspidal, i64 prec24, const RingSpec& ring) {
        const Key key{k, cuspidal, ring.ell, ring.m};
        {
            std::shared_lock lock(mu_);
            auto it = map_.find(key);
            if (it != map_.end() && it->second->prec24 >= prec24) return it->second;
        }
        // Built outside the lock; concurrent builders of one key produce identical values.
        auto fresh = std::make_shared<const FormBasis>(build_basis(k, cuspidal, prec24, ring));
        std::unique_lock lock(mu_);
        auto& slot = map_[key];
        if (!slot || slot->prec24 < prec24) slot = fresh;
        return slot;
    }

    void clear() {
        std::unique_lock lock(mu_);
        map_.clear();
    }

private:
    using Key = std::tuple<int, bool, u32, u32>;
    std::shared_mutex mu_;
    std::map<Key, std::shared_ptr<const FormBasis>> map_;
};

inline BasisCache& basis_cache() {
    static BasisCache cache;
    return cache;
}

} // namespace detail

// Diagonal integral basis of M_k (or S_k) reduced mod ell^m; memoized.
inline std::shared_ptr<const FormBasis> basis_Mk(int k, bool cuspidal, i64 prec24, const RingSpec& ring) {
    require_even_weight(k);
    return detail::basis_cache().get(k, cuspidal, prec24, ring);
}

} // namespace ptower

#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "ptower/series/ring.hpp"

namespace ptower {

using Vec = std::vector<u64>;

struct Window {
    i64 start24 = 0;
    i64 length = 0;
    i64 step24 = 24;

    friend bool operator==(const Window&, const Window&) = default;
};

struct EchelonResult {
    std::vector<Vec> basis;
    std::vector<std::size_t> pivots;
    std::size_t rank = 0;
};

namespace detail {

inline bool is_zero_vec(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](u64 x) { return x == 0; });
}

// row -= t * pivot  (mod M)
inline void axpy_sub(Vec& row, const Vec& pivot, u64 t, u64 M) {
    if (t == 0) return;
    for (std::size_t k = 0; k < row.size(); ++k)
        if (pivot[k]) row[k] = (row[k] + M - (t * pivot[k]) % M) % M;
}

inline void scale(Vec& row, u64 t, u64 M) {
    for (auto& x : row) x = (x * t) % M;
}

} // namespace detail

// Reduced row echelon form over F_p.
inline EchelonResult echelon_fl(std::vector<Vec> vectors, u64 p) {
    EchelonResult res;
    if (vectors.empty()) return res;
    const RingSpec F(static_cast<u32>(p), 1);
    for (auto& v : vectors)
        for (auto& x : v) x %= p;
    const std::size_t n = vectors.front().size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < vectors.size(); ++c) {
        std::size_t piv = r;
        while (piv < vectors.size() && vectors[piv][c] == 0) ++piv;
        if (piv == vectors.size()) continue;
        std::swap(vectors[r], vectors[piv]);
        detail::scale(vectors[r], F.inv(vectors[r][c]), p);
        for (std::size_t i = 0; i < vectors.size(); ++i)
            if (i != r) detail::axpy_sub(vectors[i], vectors[r], vectors[i][c], p);
        res.pivots.push_back(c);
        ++r;
    }
    vectors.resize(r);
    res.basis = std::move(vectors);
    res.rank = r;
    return res;
}

// Submodule of (Z/ell^m)^n in Howell normal form: pivots normalized to ell^v,
// entries above each pivot reduced into [0, ell^v).
struct ModuleSpan {
    RingSpec ring;
    Window window;
    std::vector<Vec> rows;
    std::vector<std::size_t> pivots;

    std::size_t length() const { return static_cast<std::size_t>(window.length); }
    bool is_zero() const { return rows.empty(); }
    std::size_t rank() const;

    friend bool operator==(const ModuleSpan& a, const ModuleSpan& b) {
        return a.ring == b.ring && a.window.length == b.window.length && a.rows == b.rows;
    }
};

inline ModuleSpan howell(std::vector<Vec> vectors, const RingSpec& ring, Window window = {}) {
    const u64 M = ring.modulus;
    std::size_t n = window.length > 0 ? static_cast<std::size_t>(window.length) : 0;
    if (n == 0 && !vectors.empty()) n = vectors.front().size();
    window.length = static_cast<i64>(n);
    ModuleSpan out{ring, window, {}, {}};

    std::vector<Vec> pool;
    for (auto& v : vectors) {
        require(v.size() == n, Errc::InvalidArgument, "vector length does not match window");
        for (auto& x : v) x %= M;
        if (!detail::is_zero_vec(v)) pool.push_back(std::move(v));
    }

    for (std::size_t c = 0; c < n && !pool.empty(); ++c) {
        std::size_t best = pool.size();
        u32 bv = ring.m;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            u32 v = ring.valuation(pool[i][c]);
            if (v < bv) {
                bv = v;
                best = i;
            }
        }
        if (best == pool.size()) continue;
        Vec piv = std::move(pool[best]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(best));
        const u64 pv = static_cast<u64>(ipow(ring.ell, bv));
        detail::scale(piv, ring.inv(piv[c] / pv), M);
        for (auto& row : pool)
            if (row[c]) detail::axpy_sub(row, piv, row[c] / pv, M);
        if (bv > 0) {
            Vec ann = piv;
            detail::scale(ann, static_cast<u64>(ipow(ring.ell, ring.m - bv)), M);
            pool.push_back(std::move(ann));
        }
        std::erase_if(pool, detail::is_zero_vec);
        out.rows.push_back(std::move(piv));
        out.pivots.push_back(c);
    }

    for (std::size_t i = 0; i < out.rows.size(); ++i) {
        const std::size_t c = out.pivots[i];
        const u64 pv = out.rows[i][c];
        for (std::size_t j = 0; j < i; ++j) {
            u64 t = out.rows[j][c] / pv;
            detail::axpy_sub(out.rows[j], out.rows[i], t, M);
        }
    }
    return out;
}

// Minimal number of generators: count of nonzero Smith invariants.
inline std::size_t min_generators(std::vector<Vec> a, const RingSpec& ring) {
    const u64 M = ring.modulus;
    std::erase_if(a, detail::is_zero_vec);
    std::size_t count = 0;
    while (!a.empty()) {
        std::size_t bi = 0, bc = 0;
        u32 bv = ring.m;
        for (std::size_t i = 0; i < a.size() && bv > 0; ++i)
            for (std::size_t c = 0; c < a[i].size(); ++c) {
                u32 v = ring.valuation(a[i][c]);
                if (v < bv) {
                    bv = v;
                    bi = i;
                    bc = c;
                    if (v == 0) break;
                }
            }
        if (bv == ring.m) break;
        ++count;
        Vec piv = std::move(a[bi]);
        a.erase(a.begin() + static_cast<std::ptrdiff_t>(bi));
        const u64 pv = static_cast<u64>(ipow(ring.ell, bv));
        detail::scale(piv, ring.inv(piv[bc] / pv), M);
        // Every entry has valuation >= bv, so the pivot row is cleared by column operations
        // that leave the other rows (now zero in column bc) untouched.
        for (auto& row : a)
            if (row[bc]) detail::axpy_sub(row, piv, row[bc] / pv, M);
        std::erase_if(a, detail::is_zero_vec);
    }
    return count;
}

inline std::size_t ModuleSpan::rank() const { return min_generators(rows, ring); }

// Coordinates c with sum c_i rows_i == v, or nullopt.
inline std::optional<Vec> member(Vec v, const ModuleSpan& span) {
    const RingSpec& R = span.ring;
    const u64 M = R.modulus;
    require(span.window.length == 0 || v.size() == span.length(), Errc::InvalidArgument,
            "vector length does not match window");
    for (auto& x : v) x %= M;
    Vec coords(span.rows.size(), 0);
    std::size_t col = 0;
    for (std::size_t i = 0; i < span.rows.size(); ++i) {
        const std::size_t c = span.pivots[i];
        for (; col < c; ++col)
            if (v[col]) return std::nullopt;
        const u64 pv = span.rows[i][c];
        if (v[c] % pv != 0) return std::nullopt;
        coords[i] = v[c] / pv;
        detail::axpy_sub(v, span.rows[i], coords[i], M);
        col = c + 1;
    }
    if (!detail::is_zero_vec(v)) return std::nullopt;
    return coords;
}

inline bool contains(const ModuleSpan& big, const ModuleSpan& small) {
    return std::all_of(small.rows.begin(), small.rows.end(),
                       [&](const Vec& r) { return member(r, big).has_value(); });
}

// v * A with A given by rows (row convention).
inline Vec vec_mat(const Vec& v, const std::vector<Vec>& A, u64 M) {
    require(v.size() == A.size(), Errc::InvalidArgument, "dimension mismatch in vec_mat");
    const std::size_t n = A.empty() ? 0 : A.front().size();
    Vec out(n, 0);
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i]) continue;
        for (std::size_t k = 0; k < n; ++k) out[k] = (out[k] + v[i] * A[i][k]) % M;
    }
    return out;
}

struct StableSubspace {
    u64 p = 0;
    std::size_t ambient = 0;
    std::vector<Vec> basis;
    std::vector<std::size_t> pivots;

    std::size_t dim() const { return basis.size(); }
};

// Image of T^n in F_p^n (row vectors, v -> v T); T acts bijectively on it.
inline StableSubspace stable_image(const std::vector<Vec>& T, u64 p) {
    const std::size_t n = T.size();
    for (const auto& row : T) require(row.size() == n, Errc::InvalidArgument, "stable_image needs a square matrix");
    std::vector<Vec> cur;
    for (std::size_t i = 0; i < n; ++i) {
        Vec e(n, 0);
        e[i] = 1;
        cur.push_back(e);
    }
    EchelonResult ech = echelon_fl(cur, p);
    for (std::size_t it = 0; it <= n; ++it) {
        std::vector<Vec> img;
        for (const auto& v : ech.basis) img.push_back(vec_mat(v, T, p));
        EchelonResult next = echelon_fl(img, p);
        const bool same = next.rank == ech.rank;
        ech = std::move(next);
        if (same) break;
    }
    return StableSubspace{p, n, std::move(ech.basis), std::move(ech.pivots)};
}

inline bool in_subspace(const Vec& v, const StableSubspace& S) {
    Vec w = v;
    for (auto& x : w) x %= S.p;
    for (std::size_t i = 0; i < S.basis.size(); ++i)
        detail::axpy_sub(w, S.basis[i], w[S.pivots[i]], S.p);
    return detail::is_zero_vec(w);
}

} // namespace ptower

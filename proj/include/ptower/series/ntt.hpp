#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "ptower/series/ring.hpp"

namespace ptower {

namespace detail {

template <u32 P, u32 G>
struct NttPrime {
    static constexpr u32 mod = P;

    static constexpr u32 pw(u64 a, u64 e) {
        u64 r = 1;
        a %= P;
        while (e) {
            if (e & 1) r = r * a % P;
            a = a * a % P;
            e >>= 1;
        }
        return static_cast<u32>(r);
    }

    static unsigned max_log() {
        unsigned k = 0;
        while (((P - 1) >> k) % 2 == 0) ++k;
        return k;
    }

    static void transform(std::vector<u32>& a, bool inverse) {
        const std::size_t n = a.size();
        for (std::size_t i = 1, j = 0; i < n; ++i) {
            std::size_t bit = n >> 1;
            for (; j & bit; bit >>= 1) j ^= bit;
            j ^= bit;
            if (i < j) std::swap(a[i], a[j]);
        }
        std::vector<u32> tw(n / 2 + 1);
        for (std::size_t len = 2; len <= n; len <<= 1) {
            u32 w = pw(G, (P - 1) / len);
            if (inverse) w = pw(w, P - 2);
            const std::size_t half = len / 2;
            tw[0] = 1;
            for (std::size_t k = 1; k < half; ++k) tw[k] = static_cast<u32>(u64(tw[k - 1]) * w % P);
            for (std::size_t i = 0; i < n; i += len) {
                u32* x = a.data() + i;
                u32* y = x + half;
                for (std::size_t k = 0; k < half; ++k) {
                    u32 u = x[k];
                    u32 v = static_cast<u32>(u64(y[k]) * tw[k] % P);
                    u32 s = u + v;
                    x[k] = s >= P ? s - P : s;
                    y[k] = u >= v ? u - v : u + P - v;
                }
            }
        }
        if (inverse) {
            u64 ninv = pw(n, P - 2);
            for (auto& x : a) x = static_cast<u32>(x * ninv % P);
        }
    }

    static std::vector<u32> convolve(std::span<const u64> a, std::span<const u64> b, std::size_t out_len,
                                     std::size_t n) {
        std::vector<u32> fa(n, 0), fb(n, 0);
        for (std::size_t i = 0; i < a.size(); ++i) fa[i] = static_cast<u32>(a[i] % P);
        for (std::size_t i = 0; i < b.size(); ++i) fb[i] = static_cast<u32>(b[i] % P);
        transform(fa, false);
        transform(fb, false);
        for (std::size_t i = 0; i < n; ++i) fa[i] = static_cast<u32>(u64(fa[i]) * fb[i] % P);
        transform(fa, true);
        fa.resize(out_len);
        return fa;
    }
};

using P1 = NttPrime<754974721u, 11u>;
using P2 = NttPrime<167772161u, 3u>;
using P3 = NttPrime<469762049u, 3u>;

} // namespace detail

inline constexpr std::size_t kSchoolbookCrossover = 64;

// Truncated product of residue polynomials, quadratic reference implementation.
inline std::vector<u64> convolve_schoolbook(std::span<const u64> a, std::span<const u64> b, std::size_t out_len,
                                            u64 modulus) {
    std::vector<u64> out(out_len, 0);
    // Residues are below 2^30; accumulate up to 16 products before reducing.
    std::vector<u64> acc(out_len, 0);
    std::vector<unsigned> cnt(out_len, 0);
    for (std::size_t i = 0; i < a.size() && i < out_len; ++i) {
        if (a[i] == 0) continue;
        const std::size_t lim = std::min(b.size(), out_len - i);
        for (std::size_t j = 0; j < lim; ++j) {
            u64& s = acc[i + j];
            s += a[i] * b[j];
            if (++cnt[i + j] == 15) {
                s %= modulus;
                cnt[i + j] = 0;
            }
        }
    }
    for (std::size_t k = 0; k < out_len; ++k) out[k] = acc[k] % modulus;
    return out;
}

// Truncated product via three-prime NTT and Garner reconstruction.
inline std::vector<u64> convolve_ntt(std::span<const u64> a, std::span<const u64> b, std::size_t out_len,
                                     u64 modulus) {
    std::vector<u64> out(out_len, 0);
    if (a.empty() || b.empty() || out_len == 0) return out;
    const std::size_t la = std::min(a.size(), out_len), lb = std::min(b.size(), out_len);
    a = a.first(la);
    b = b.first(lb);
    const std::size_t need = std::min(la + lb - 1, out_len);
    std::size_t n = 1;
    while (n < la + lb - 1) n <<= 1;
    require(n <= (std::size_t(1) << 24), Errc::InvalidArgument, "NTT length exceeds 2^24");

    auto r1 = detail::P1::convolve(a, b, need, n);
    auto r2 = detail::P2::convolve(a, b, need, n);
    auto r3 = detail::P3::convolve(a, b, need, n);

    constexpr u64 p1 = detail::P1::mod, p2 = detail::P2::mod, p3 = detail::P3::mod;
    constexpr u64 inv_p1_mod_p2 = detail::P2::pw(p1, p2 - 2);
    constexpr u64 p1p2_mod_p3 = (p1 % p3) * (p2 % p3) % p3;
    constexpr u64 inv_p1p2_mod_p3 = detail::P3::pw(p1p2_mod_p3, p3 - 2);
    const u64 p1_mod = p1 % modulus;
    const u64 p1p2_mod = static_cast<u64>((u128(p1) * p2) % modulus);

    for (std::size_t k = 0; k < need; ++k) {
        u64 x1 = r1[k], x2 = r2[k], x3 = r3[k];
        u64 t2 = (x2 + p2 - x1 % p2) % p2 * inv_p1_mod_p2 % p2;
        u64 partial = (x1 % p3 + (t2 % p3) * (p1 % p3)) % p3;
        u64 t3 = (x3 + p3 - partial) % p3 * inv_p1p2_mod_p3 % p3;
        out[k] = (x1 % modulus + (t2 % modulus) * p1_mod % modulus + (t3 % modulus) * p1p2_mod % modulus) % modulus;
    }
    return out;
}

inline std::vector<u64> convolve(std::span<const u64> a, std::span<const u64> b, std::size_t out_len, u64 modulus) {
    if (std::min({a.size(), b.size(), out_len}) <= kSchoolbookCrossover)
        return convolve_schoolbook(a, b, out_len, modulus);
    return convolve_ntt(a, b, out_len, modulus);
}

} // namespace ptower

#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "ptower/error.hpp"

namespace ptower {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

constexpr bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

constexpr i64 floor_div(i64 a, i64 b) {
    i64 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

constexpr i64 ceil_div(i64 a, i64 b) { return -floor_div(-a, b); }

constexpr i64 mod_floor(i64 a, i64 b) { return a - floor_div(a, b) * b; }

// Exact integer power; throws on overflow past 2^62.
inline i64 ipow(i64 base, u32 e) {
    i128 r = 1;
    for (u32 i = 0; i < e; ++i) {
        r *= base;
        if (r > (i128(1) << 62) || r < -(i128(1) << 62))
            fail(Errc::InvalidArgument, "integer power overflow");
    }
    return static_cast<i64>(r);
}

// Largest modulus we accept: products of two residues plus accumulation stay in u64.
inline constexpr u64 kMaxModulus = u64(1) << 30;

struct RingSpec {
    u32 ell = 5;
    u32 m = 1;
    u64 modulus = 5;

    RingSpec() = default;

    RingSpec(u32 ell_, u32 m_) : ell(ell_), m(m_) {
        require(is_prime(ell_), Errc::InvalidArgument, "ell=" + std::to_string(ell_) + " is not prime");
        require(ell_ >= 5, Errc::PrimeTooSmall, "ell must be at least 5");
        require(m_ >= 1, Errc::InvalidArgument, "m must be positive");
        u64 mod = 1;
        for (u32 i = 0; i < m_; ++i) {
            mod *= ell_;
            require(mod < kMaxModulus, Errc::InvalidArgument, "ell^m exceeds 2^30");
        }
        modulus = mod;
    }

    friend bool operator==(const RingSpec&, const RingSpec&) = default;

    RingSpec with_m(u32 m2) const { return RingSpec(ell, m2); }

    u64 reduce(i64 x) const {
        i64 r = x % static_cast<i64>(modulus);
        return static_cast<u64>(r < 0 ? r + static_cast<i64>(modulus) : r);
    }
    u64 reduce_u(u64 x) const { return x % modulus; }

    u64 add(u64 a, u64 b) const {
        u64 s = a + b;
        return s >= modulus ? s - modulus : s;
    }
    u64 sub(u64 a, u64 b) const { return a >= b ? a - b : a + modulus - b; }
    u64 neg(u64 a) const { return a == 0 ? 0 : modulus - a; }
    u64 mul(u64 a, u64 b) const { return (a * b) % modulus; }

    u64 pow(u64 a, u64 e) const {
        u64 r = 1 % modulus, b = a % modulus;
        while (e) {
            if (e & 1) r = mul(r, b);
            b = mul(b, b);
            e >>= 1;
        }
        return r;
    }

    bool is_unit(u64 a) const { return a % ell != 0; }

    // ell-adic valuation of a residue, m for zero.
    u32 valuation(u64 a) const {
        if (a == 0) return m;
        u32 v = 0;
        while (a % ell == 0) {
            a /= ell;
            ++v;
        }
        return v;
    }

    u64 inv(u64 a) const {
        a %= modulus;
        if (!is_unit(a)) fail(Errc::NotAUnit, std::to_string(a) + " is not a unit mod " + std::to_string(modulus));
        i64 t = 0, nt = 1, r = static_cast<i64>(modulus), nr = static_cast<i64>(a);
        while (nr != 0) {
            i64 q = r / nr;
            i64 tmp = t - q * nt;
            t = nt;
            nt = tmp;
            tmp = r - q * nr;
            r = nr;
            nr = tmp;
        }
        return reduce(t);
    }

    // Centered representative in (-M/2, M/2].
    i64 signed_rep(u64 a) const {
        return a > modulus / 2 ? static_cast<i64>(a) - static_cast<i64>(modulus) : static_cast<i64>(a);
    }

    std::string to_string() const {
        return "Z/" + std::to_string(ell) + "^" + std::to_string(m);
    }
};

inline u64 res_inv(u64 a, const RingSpec& ring) { return ring.inv(a); }

// Kronecker symbol (a/n).
inline int kronecker(i64 a, i64 n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int result = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) result = -result;
    }
    int twos = 0;
    while (n % 2 == 0) {
        n /= 2;
        ++twos;
    }
    if (twos > 0) {
        if (a % 2 == 0) return 0;
        i64 a8 = mod_floor(a, 8);
        if ((twos & 1) && (a8 == 3 || a8 == 5)) result = -result;
    }
    // Jacobi symbol (a/n), n odd positive.
    a = mod_floor(a, n);
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            i64 n8 = n % 8;
            if (n8 == 3 || n8 == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

inline int chi12(i64 n) {
    switch (mod_floor(n, 12)) {
    case 1:
    case 11: return 1;
    case 5:
    case 7: return -1;
    default: return 0;
    }
}

} // namespace ptower

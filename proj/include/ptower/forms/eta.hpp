#pragma once

#include <string>
#include <vector>

#include "ptower/series/series.hpp"

namespace ptower {

struct EtaObject {
    ResidueSeries series;
    std::string provenance;
};

// E(q) = prod (1 - q^n) by the pentagonal number theorem.
inline ResidueSeries euler_series(i64 prec24, const RingSpec& ring) {
    ResidueSeries e(ring, 0, 24, prec24);
    const i64 N = static_cast<i64>(e.size());
    std::vector<u64> c(static_cast<std::size_t>(N), 0);
    for (i64 j = 0; j * (3 * j - 1) / 2 < N; ++j) {
        const u64 sign = j % 2 == 0 ? 1 : ring.modulus - 1;
        c[static_cast<std::size_t>(j * (3 * j - 1) / 2)] = sign;
        if (j > 0 && j * (3 * j + 1) / 2 < N) c[static_cast<std::size_t>(j * (3 * j + 1) / 2)] = sign;
    }
    return ResidueSeries(ring, 0, 24, prec24, std::move(c));
}

namespace detail {

// E(q)^r for any integer r, integer-q series to prec24.
inline ResidueSeries euler_power(i64 r, i64 prec24, const RingSpec& ring) {
    if (r == 0) return ResidueSeries::one(ring, prec24);
    const ResidueSeries e = euler_series(prec24, ring);
    if (r == 1) return e;
    const u64 a = static_cast<u64>(r < 0 ? -r : r);
    ResidueSeries p = a == 1 ? e : series_pow(e, a, prec24);
    return r > 0 ? p : series_inv(p, prec24);
}

} // namespace detail

// eta(t z)^r = q^(r t / 24) E(q^t)^r.
inline EtaObject eta_power(i64 t, i64 r, i64 prec24, const RingSpec& ring) {
    require(t > 0, Errc::InvalidArgument, "eta dilation must be positive");
    const i64 shift = r * t, rel = prec24 - shift;
    ResidueSeries s(ring, shift, 24 * t, prec24);
    if (rel > 0) s = dilate(detail::euler_power(r, ceil_div(rel, t), ring), t).truncated(rel).shifted(shift);
    return {std::move(s), "eta(" + std::to_string(t) + "z)^" + std::to_string(r)};
}

inline std::vector<u64> divisor_power_sums(u32 power, i64 N, const RingSpec& ring) {
    std::vector<u64> sigma(static_cast<std::size_t>(std::max<i64>(N, 0)), 0);
    for (i64 d = 1; d < N; ++d) {
        const u64 dp = ring.pow(static_cast<u64>(d) % ring.modulus, power);
        for (i64 n = d; n < N; n += d) sigma[static_cast<std::size_t>(n)] = ring.add(sigma[static_cast<std::size_t>(n)], dp);
    }
    return sigma;
}

inline EtaObject eisenstein(int k, i64 prec24, const RingSpec& ring) {
    require(k == 4 || k == 6, Errc::InvalidArgument, "only E4 and E6 are provided");
    ResidueSeries e(ring, 0, 24, prec24);
    const i64 N = static_cast<i64>(e.size());
    auto sigma = divisor_power_sums(static_cast<u32>(k - 1), N, ring);
    const u64 c = k == 4 ? 240 : ring.reduce(-504);
    std::vector<u64> a(sigma.size());
    for (std::size_t n = 0; n < a.size(); ++n) a[n] = ring.mul(c, sigma[n]);
    if (!a.empty()) a[0] = 1;
    return {ResidueSeries(ring, 0, 24, prec24, std::move(a)), "E" + std::to_string(k)};
}

// Delta = eta(z)^24.
inline ResidueSeries delta_series(i64 prec24, const RingSpec& ring) { return eta_power(1, 24, prec24, ring).series; }

// Phi_ell^r = (eta(ell^2 z)/eta(z))^r, integer-q with leading exponent r(ell^2-1)/24.
inline EtaObject phi_ell(const RingSpec& ring, u32 r, i64 prec24) {
    const i64 l2 = i64(ring.ell) * ring.ell;
    const i64 v24 = static_cast<i64>(r) * (l2 - 1);
    std::string prov = "(eta(" + std::to_string(l2) + "z)/eta(z))^" + std::to_string(r);
    if (r == 0) return {ResidueSeries::one(ring, prec24), prov};
    const i64 rel = std::max<i64>(prec24 - v24, 0);
    ResidueSeries num = dilate(detail::euler_power(r, ceil_div(rel, l2), ring), l2).truncated(rel);
    ResidueSeries den = detail::euler_power(-static_cast<i64>(r), rel, ring);
    ResidueSeries s = series_mul(num, den, rel).shifted(v24);
    if (prec24 < v24) s = ResidueSeries(ring, v24, 24, prec24);
    return {std::move(s), prov};
}

// A_ell = eta(z)^ell / eta(ell z), integer-q with constant term 1.
inline EtaObject a_ell(const RingSpec& ring, i64 prec24) {
    const i64 l = ring.ell;
    ResidueSeries num = detail::euler_power(l, prec24, ring);
    ResidueSeries den = dilate(detail::euler_power(-1, ceil_div(prec24, l), ring), l).truncated(prec24);
    return {series_mul(num, den, prec24), "eta(z)^" + std::to_string(l) + "/eta(" + std::to_string(l) + "z)"};
}

// theta = q d/dq on integer-q series.
inline ResidueSeries theta(const ResidueSeries& f) {
    require(f.integral(), Errc::FractionalSupport, "theta needs integer exponents");
    std::vector<u64> c(f.coeffs().begin(), f.coeffs().end());
    const RingSpec& R = f.ring();
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = R.mul(c[k], R.reduce(f.exponent24(k) / 24));
    return ResidueSeries(R, f.offset24(), f.step24(), f.prec24(), std::move(c));
}

} // namespace ptower

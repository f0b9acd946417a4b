#pragma once

#include <string>

#include "ptower/forms/eta.hpp"
#include "ptower/series/precision.hpp"

namespace ptower {

struct Character {
    enum class Kind { Trivial, Chi12, Kronecker };
    Kind kind = Kind::Trivial;
    i64 d = 1;

    static Character trivial() { return {}; }
    static Character chi_12() { return {Kind::Chi12, 12}; }
    static Character kronecker_of(i64 d) { return {Kind::Kronecker, d}; }

    int operator()(i64 n) const {
        switch (kind) {
        case Kind::Trivial: return 1;
        case Kind::Chi12: return chi12(n);
        case Kind::Kronecker: return kronecker(d, n);
        }
        return 0;
    }

    std::string name() const {
        switch (kind) {
        case Kind::Trivial: return "trivial";
        case Kind::Chi12: return "chi12";
        case Kind::Kronecker: return "(" + std::to_string(d) + "/.)";
        }
        return "?";
    }
};

inline void require_integral(const ResidueSeries& f, const char* op) {
    require(f.integral(), Errc::FractionalSupport,
            std::string(op) + " needs integer-q support, got " + f.describe());
}

// (sum a(n) q^n) | U(ell) = sum a(ell n) q^n.
inline ResidueSeries u_ell(const ResidueSeries& f, u32 ell, i64 target_prec24 = -1) {
    require_integral(f, "U");
    const i64 out = u_output_precision(ell, f.prec24());
    if (target_prec24 >= 0) {
        require(target_prec24 <= out, Errc::InsufficientPrecision,
                "U(" + std::to_string(ell) + ") output to " + std::to_string(target_prec24) + "/24 needs input " +
                    std::to_string(u_input_precision(ell, target_prec24)) + "/24, have " + std::to_string(f.prec24()));
    }
    const i64 prec = target_prec24 >= 0 ? target_prec24 : out;
    const i64 n0 = ceil_div(f.offset24() / 24, ell);
    ResidueSeries r(f.ring(), 24 * n0, 24, prec);
    std::vector<u64> c(r.size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = f.at(static_cast<i64>(ell) * (n0 + static_cast<i64>(k)));
    return ResidueSeries(f.ring(), 24 * n0, 24, prec, std::move(c));
}

// f | D_r(ell) = (f * phi) | U(ell), phi = Phi_ell^r supplied by the caller.
inline ResidueSeries d_r(const ResidueSeries& f, const ResidueSeries& phi, u32 ell) {
    require_integral(f, "D_r");
    return u_ell(series_mul(f, phi), ell);
}

inline ResidueSeries d_r(const ResidueSeries& f, u32 ell, u32 r) {
    require_integral(f, "D_r");
    const i64 v24 = static_cast<i64>(r) * (i64(ell) * ell - 1);
    const i64 prod = f.prec24() + v24;
    const ResidueSeries phi = phi_ell(f.ring(), r, std::max<i64>(prod - f.offset24(), v24)).series;
    return u_ell(series_mul(f, phi, prod), ell);
}

inline ResidueSeries x_r(const ResidueSeries& f, u32 ell, u32 r) { return d_r(u_ell(f, ell), ell, r); }
inline ResidueSeries y_r(const ResidueSeries& f, u32 ell, u32 r) { return u_ell(d_r(f, ell, r), ell); }

// Integral weight: a(nc) + c^(k-1) chi(c) a(n/c).
inline ResidueSeries hecke_integral(const ResidueSeries& f, u32 c, int k, const Character& chi) {
    require_integral(f, "T(c)");
    require(is_prime(c), Errc::InvalidArgument, "Hecke index must be prime");
    const RingSpec& R = f.ring();
    const i64 o = f.offset24() / 24;
    const i64 lo = std::min(ceil_div(o, c), o * static_cast<i64>(c));
    const i64 prec = u_output_precision(c, f.prec24());
    const u64 w = R.mul(R.pow(c % R.modulus, static_cast<u64>(k - 1)), R.reduce(chi(c)));
    ResidueSeries r(R, 24 * lo, 24, prec);
    std::vector<u64> out(r.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        const i64 n = lo + static_cast<i64>(j);
        u64 v = f.at(n * static_cast<i64>(c));
        if (n % static_cast<i64>(c) == 0) v = R.add(v, R.mul(w, f.at(n / static_cast<i64>(c))));
        out[j] = v;
    }
    return ResidueSeries(R, 24 * lo, 24, prec, std::move(out));
}

// Half-integral weight lambda + 1/2: a(c^2 n) + c^(lambda-1) ((-1)^lambda n / c) chi(c) a(n) + c^(2 lambda - 1) a(n/c^2).
inline ResidueSeries hecke_half(const ResidueSeries& f, u32 c, int lambda, const Character& chi) {
    require_integral(f, "T(c^2)");
    require(is_prime(c), Errc::InvalidArgument, "Hecke index must be prime");
    const RingSpec& R = f.ring();
    const i64 c2 = i64(c) * c;
    const i64 o = f.offset24() / 24;
    const i64 lo = std::min(ceil_div(o, c2), o * c2);
    const i64 prec = u_output_precision(static_cast<u32>(c2), f.prec24());
    const u64 mid = R.mul(R.pow(c % R.modulus, static_cast<u64>(lambda - 1)), R.reduce(chi(c)));
    const u64 back = R.pow(c % R.modulus, static_cast<u64>(2 * lambda - 1));
    const i64 sgn = lambda % 2 == 0 ? 1 : -1;
    ResidueSeries r(R, 24 * lo, 24, prec);
    std::vector<u64> out(r.size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        const i64 n = lo + static_cast<i64>(j);
        u64 v = f.at(c2 * n);
        const int kr = kronecker(sgn * n, c);
        if (kr != 0) v = R.add(v, R.mul(R.mul(mid, R.reduce(kr)), f.at(n)));
        if (n % c2 == 0) v = R.add(v, R.mul(back, f.at(n / c2)));
        out[j] = v;
    }
    return ResidueSeries(R, 24 * lo, 24, prec, std::move(out));
}

struct OperatorTag {
    enum class Kind { U, D, X, Y, T, T2 };
    Kind kind = Kind::U;
    u32 ell = 5;
    u32 r = 1;
    u32 c = 5;
    int weight = 0;
    Character chi;

    ResidueSeries apply(const ResidueSeries& f) const {
        switch (kind) {
        case Kind::U: return u_ell(f, ell);
        case Kind::D: return d_r(f, ell, r);
        case Kind::X: return x_r(f, ell, r);
        case Kind::Y: return y_r(f, ell, r);
        case Kind::T: return hecke_integral(f, c, weight, chi);
        case Kind::T2: return hecke_half(f, c, weight, chi);
        }
        fail(Errc::InvalidArgument, "unknown operator");
    }
};

} // namespace ptower

#pragma once

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ptower/series/ntt.hpp"
#include "ptower/series/ring.hpp"

namespace ptower {

// Truncated Laurent series over Z/ell^m. Exponents are in units of q^(1/24):
// slot k holds the coefficient of q^((offset24 + k*step24)/24), trusted below prec24.
class ResidueSeries {
public:
    ResidueSeries() = default;

    ResidueSeries(RingSpec ring, i64 offset24, i64 step24, i64 prec24, std::vector<u64> coeffs = {})
        : ring_(ring), offset_(offset24), step_(step24), prec_(prec24), c_(std::move(coeffs)) {
        require(step24 > 0, Errc::InvalidArgument, "step24 must be positive");
        c_.resize(slots_below(prec24), 0);
        for (auto& x : c_) x %= ring_.modulus;
    }

    static ResidueSeries from_ints(RingSpec ring, const std::vector<i64>& a, i64 prec_terms) {
        std::vector<u64> c(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) c[i] = ring.reduce(a[i]);
        return ResidueSeries(ring, 0, 24, 24 * prec_terms, std::move(c));
    }

    static ResidueSeries one(RingSpec ring, i64 prec24) {
        return ResidueSeries(ring, 0, 24, prec24, std::vector<u64>{1});
    }

    const RingSpec& ring() const { return ring_; }
    i64 offset24() const { return offset_; }
    i64 step24() const { return step_; }
    i64 prec24() const { return prec_; }
    std::span<const u64> coeffs() const { return c_; }
    std::size_t size() const { return c_.size(); }
    u64 slot(std::size_t k) const { return c_[k]; }
    i64 exponent24(std::size_t k) const { return offset_ + static_cast<i64>(k) * step_; }

    bool integral() const { return mod_floor(offset_, 24) == 0 && step_ % 24 == 0; }

    // Number of integer exponents n with 24n < prec24, starting at n = 0.
    i64 terms() const { return std::max<i64>(0, ceil_div(prec_, 24)); }

    u64 at24(i64 e24) const {
        require(e24 < prec_, Errc::InsufficientPrecision,
                "coefficient at " + std::to_string(e24) + "/24 requested, precision " + std::to_string(prec_) + "/24");
        if (e24 < offset_) return 0;
        i64 d = e24 - offset_;
        if (d % step_ != 0) return 0;
        return c_[static_cast<std::size_t>(d / step_)];
    }

    u64 at(i64 n) const { return at24(24 * n); }

    // Residues of q^n for n = 0..count-1.
    std::vector<u64> window(i64 start, i64 count) const {
        std::vector<u64> w(static_cast<std::size_t>(std::max<i64>(count, 0)));
        for (i64 i = 0; i < count; ++i) w[static_cast<std::size_t>(i)] = at(start + i);
        return w;
    }

    bool is_zero() const {
        return std::all_of(c_.begin(), c_.end(), [](u64 x) { return x == 0; });
    }

    std::optional<i64> valuation24() const {
        for (std::size_t k = 0; k < c_.size(); ++k)
            if (c_[k]) return exponent24(k);
        return std::nullopt;
    }

    ResidueSeries truncated(i64 prec24) const {
        require(prec24 <= prec_, Errc::InsufficientPrecision,
                "truncate to " + std::to_string(prec24) + " above precision " + std::to_string(prec_));
        ResidueSeries r = *this;
        r.prec_ = prec24;
        r.c_.resize(r.slots_below(prec24));
        return r;
    }

    // Same series written on a finer grid; step24 must be a multiple of new_step.
    ResidueSeries refined(i64 new_step) const {
        if (new_step == step_) return *this;
        require(new_step > 0 && step_ % new_step == 0, Errc::InvalidArgument, "refinement must divide step");
        const i64 f = step_ / new_step;
        ResidueSeries r(ring_, offset_, new_step, prec_);
        for (std::size_t k = 0; k < c_.size(); ++k) {
            std::size_t j = k * static_cast<std::size_t>(f);
            if (j < r.c_.size()) r.c_[j] = c_[k];
        }
        return r;
    }

    // Same series with the grid re-anchored at a lower offset.
    ResidueSeries rebased(i64 new_offset, i64 new_step) const {
        require(new_offset <= offset_ && (offset_ - new_offset) % new_step == 0 && step_ % new_step == 0,
                Errc::InvalidArgument, "incompatible rebase");
        ResidueSeries r(ring_, new_offset, new_step, prec_);
        const i64 shift = (offset_ - new_offset) / new_step, f = step_ / new_step;
        for (std::size_t k = 0; k < c_.size(); ++k) {
            std::size_t j = static_cast<std::size_t>(shift + static_cast<i64>(k) * f);
            if (j < r.c_.size()) r.c_[j] = c_[k];
        }
        return r;
    }

    // Drop leading zero slots and coarsen the grid to the gcd of the support.
    ResidueSeries normalized() const {
        auto v = valuation24();
        if (!v) return ResidueSeries(ring_, std::min(offset_, prec_), step_, prec_);
        i64 g = 0;
        for (std::size_t k = 0; k < c_.size(); ++k)
            if (c_[k]) g = std::gcd(g, exponent24(k) - *v);
        i64 ns = g == 0 ? step_ : std::gcd(g, i64(24) * step_);
        ResidueSeries r(ring_, *v, ns, prec_);
        for (std::size_t k = 0; k < c_.size(); ++k)
            if (c_[k]) r.c_[static_cast<std::size_t>((exponent24(k) - *v) / ns)] = c_[k];
        return r;
    }

    ResidueSeries reduced(const RingSpec& smaller) const {
        require(smaller.ell == ring_.ell && smaller.m <= ring_.m, Errc::RingMismatch, "cannot reduce to larger ring");
        std::vector<u64> c(c_);
        for (auto& x : c) x %= smaller.modulus;
        return ResidueSeries(smaller, offset_, step_, prec_, std::move(c));
    }

    // Multiply by q^(d24/24).
    ResidueSeries shifted(i64 d24) const {
        ResidueSeries r = *this;
        r.offset_ += d24;
        r.prec_ += d24;
        return r;
    }

    ResidueSeries scaled(u64 c) const {
        ResidueSeries r = *this;
        c %= ring_.modulus;
        for (auto& x : r.c_) x = ring_.mul(x, c);
        return r;
    }

    ResidueSeries negated() const { return scaled(ring_.modulus - 1); }

    friend bool operator==(const ResidueSeries& a, const ResidueSeries& b) {
        return a.ring_ == b.ring_ && a.offset_ == b.offset_ && a.step_ == b.step_ && a.prec_ == b.prec_ &&
               a.c_ == b.c_;
    }

    // Agreement of all coefficients below prec24 (both must carry that precision).
    bool agrees_with(const ResidueSeries& o, i64 prec24) const {
        require(prec24 <= prec_ && prec24 <= o.prec_, Errc::InsufficientPrecision, "comparison beyond precision");
        if (ring_ != o.ring_) return false;
        for (std::size_t k = 0; k < c_.size() && exponent24(k) < prec24; ++k)
            if (c_[k] != o.at24(exponent24(k))) return false;
        for (std::size_t k = 0; k < o.c_.size() && o.exponent24(k) < prec24; ++k)
            if (o.c_[k] != at24(o.exponent24(k))) return false;
        return true;
    }

    std::string describe() const {
        return "series{" + ring_.to_string() + ", offset24=" + std::to_string(offset_) +
               ", step24=" + std::to_string(step_) + ", prec24=" + std::to_string(prec_) + "}";
    }

private:
    std::size_t slots_below(i64 prec24) const {
        if (prec24 <= offset_) return 0;
        return static_cast<std::size_t>(ceil_div(prec24 - offset_, step_));
    }

    RingSpec ring_;
    i64 offset_ = 0;
    i64 step_ = 24;
    i64 prec_ = 0;
    std::vector<u64> c_;

    friend ResidueSeries series_add(const ResidueSeries&, const ResidueSeries&);
};

inline void require_same_ring(const ResidueSeries& a, const ResidueSeries& b) {
    require(a.ring() == b.ring(), Errc::RingMismatch, a.ring().to_string() + " vs " + b.ring().to_string());
}

inline ResidueSeries series_add(const ResidueSeries& a, const ResidueSeries& b) {
    require_same_ring(a, b);
    const i64 off = std::min(a.offset_, b.offset_);
    i64 step = std::gcd(a.step_, b.step_);
    step = std::gcd(step, std::max(a.offset_, b.offset_) - off);
    const i64 prec = std::min(a.prec_, b.prec_);
    ResidueSeries x = a.truncated(prec).rebased(off, step);
    ResidueSeries y = b.truncated(prec).rebased(off, step);
    const RingSpec& R = a.ring();
    for (std::size_t k = 0; k < x.c_.size(); ++k) x.c_[k] = R.add(x.c_[k], y.c_[k]);
    return x;
}

inline ResidueSeries series_sub(const ResidueSeries& a, const ResidueSeries& b) {
    return series_add(a, b.negated());
}

inline ResidueSeries operator+(const ResidueSeries& a, const ResidueSeries& b) { return series_add(a, b); }
inline ResidueSeries operator-(const ResidueSeries& a, const ResidueSeries& b) { return series_sub(a, b); }

// Largest prec24 at which a*b is determined by the stored data.
inline i64 product_precision(const ResidueSeries& a, const ResidueSeries& b) {
    return std::min(a.prec24() + b.offset24(), b.prec24() + a.offset24());
}

inline ResidueSeries series_mul(const ResidueSeries& a, const ResidueSeries& b, i64 prec24) {
    require_same_ring(a, b);
    const i64 avail = product_precision(a, b);
    require(prec24 <= avail, Errc::InsufficientPrecision,
            "product to " + std::to_string(prec24) + "/24 but factors support " + std::to_string(avail) + "/24");
    const i64 g = std::gcd(a.step24(), b.step24());
    const ResidueSeries x = a.refined(g), y = b.refined(g);
    const i64 off = a.offset24() + b.offset24();
    ResidueSeries r(a.ring(), off, g, prec24);
    if (r.size() == 0) return r;
    auto c = convolve(x.coeffs(), y.coeffs(), r.size(), a.ring().modulus);
    return ResidueSeries(a.ring(), off, g, prec24, std::move(c));
}

inline ResidueSeries series_mul(const ResidueSeries& a, const ResidueSeries& b) {
    return series_mul(a, b, product_precision(a, b));
}

namespace detail {

// Power-series inverse of a slot polynomial with unit constant term, to n slots.
inline std::vector<u64> poly_inv(std::span<const u64> a, std::size_t n, const RingSpec& R) {
    std::vector<u64> g{R.inv(a[0])};
    std::size_t have = 1;
    while (have < n) {
        std::size_t next = std::min(2 * have, n);
        auto ag = convolve(a.first(std::min(a.size(), next)), g, next, R.modulus);
        for (auto& x : ag) x = R.neg(x);
        ag[0] = R.add(ag[0], 2);
        g = convolve(g, ag, next, R.modulus);
        have = next;
    }
    g.resize(n);
    return g;
}

} // namespace detail

inline i64 inverse_precision(const ResidueSeries& a) {
    auto v = a.valuation24();
    require(v.has_value(), Errc::LeadingNotUnit, "inverse of zero series");
    return a.prec24() - 2 * *v;
}

inline ResidueSeries series_inv(const ResidueSeries& a, i64 prec24) {
    const ResidueSeries n = a.normalized();
    require(n.size() > 0 && a.ring().is_unit(n.slot(0)), Errc::LeadingNotUnit,
            "leading coefficient " + std::to_string(n.size() ? n.slot(0) : 0) + " is not a unit");
    const i64 avail = n.prec24() - 2 * n.offset24();
    require(prec24 <= avail, Errc::InsufficientPrecision,
            "inverse to " + std::to_string(prec24) + "/24 but input supports " + std::to_string(avail) + "/24");
    ResidueSeries r(a.ring(), -n.offset24(), n.step24(), prec24);
    if (r.size() == 0) return r;
    return ResidueSeries(a.ring(), -n.offset24(), n.step24(), prec24,
                         detail::poly_inv(n.coeffs(), r.size(), a.ring()));
}

inline ResidueSeries series_inv(const ResidueSeries& a) { return series_inv(a, inverse_precision(a)); }

// Precision of a^e given the relative precision of a.
inline i64 power_precision(const ResidueSeries& a, u64 e) {
    const i64 o = a.offset24();
    return static_cast<i64>(e) * o + (a.prec24() - o);
}

inline ResidueSeries series_pow(const ResidueSeries& a, u64 e, i64 prec24) {
    if (e == 0) return ResidueSeries(a.ring(), 0, a.step24(), prec24, std::vector<u64>{1});
    require(prec24 <= power_precision(a, e), Errc::InsufficientPrecision, "power beyond available precision");
    const i64 o = a.offset24();
    const i64 shift = static_cast<i64>(e) * o;
    // Work with the offset-free part q^(-o) a, relative precision prec24 - e*o.
    const i64 rel = prec24 - shift;
    ResidueSeries base = a.shifted(-o).truncated(std::min(rel, a.prec24() - o));
    ResidueSeries acc = ResidueSeries(a.ring(), 0, a.step24(), rel, std::vector<u64>{1});
    while (true) {
        if (e & 1) acc = series_mul(acc, base, rel);
        e >>= 1;
        if (!e) break;
        base = series_mul(base, base, rel);
    }
    return acc.shifted(shift);
}

inline ResidueSeries series_pow(const ResidueSeries& a, u64 e) { return series_pow(a, e, power_precision(a, e)); }

// q -> q^t.
inline ResidueSeries dilate(const ResidueSeries& a, i64 t) {
    require(t > 0, Errc::InvalidArgument, "dilation factor must be positive");
    std::vector<u64> c(a.coeffs().begin(), a.coeffs().end());
    return ResidueSeries(a.ring(), a.offset24() * t, a.step24() * t, a.prec24() * t, std::move(c));
}

} // namespace ptower

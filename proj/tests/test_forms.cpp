#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace ptower;

namespace {

// prod (1 - q^n)^24 over the integers, shifted by q.
std::vector<i64> delta_brute(int N) {
    std::vector<i64> c(N, 0);
    c[0] = 1;
    for (int rep = 0; rep < 24; ++rep)
        for (int n = 1; n < N; ++n)
            for (int j = N - 1; j >= n; --j) c[j] -= c[j - n];
    std::vector<i64> d(N, 0);
    for (int n = 1; n < N; ++n) d[n] = c[n - 1];
    return d;
}

int monomial_count(int k) {
    int c = 0;
    for (int a = 0; 4 * a <= k; ++a)
        if ((k - 4 * a) % 6 == 0) ++c;
    return c;
}

ResidueSeries random_cusp_form(std::mt19937_64& g, int k, i64 prec24, const RingSpec& R) {
    auto B = basis_Mk(k, true, prec24, R);
    Vec c(B->dim());
    for (auto& x : c) x = g() % R.modulus;
    return B->combine(c, prec24);
}

} // namespace

TEST(Eisenstein, Coefficients) {
    const RingSpec R(37, 2);
    EXPECT_EQ(eisenstein(4, 24 * 5, R).series.at(1), 240u);
    EXPECT_EQ(eisenstein(6, 24 * 5, R).series.at(2), R.reduce(-504 * 33));
    EXPECT_EQ(eisenstein(4, 24 * 5, R).series.at(2), R.reduce(240 * 9));
}

TEST(Delta, AgreesWithBruteProduct) {
    const RingSpec R(37, 4);
    const auto brute = delta_brute(60);
    const auto d = delta_series(24 * 60, R);
    for (int n = 0; n < 60; ++n) EXPECT_EQ(d.at(n), R.reduce(brute[n])) << n;
    EXPECT_EQ(brute[1], 1);
    EXPECT_EQ(brute[2], -24);
    EXPECT_EQ(brute[3], 252);
    EXPECT_EQ(brute[4], -1472);
}

TEST(Delta, EisensteinIdentity) {
    for (auto [l, m] : {std::pair<u32, u32>{5, 2}, {13, 2}, {7, 3}}) {
        const RingSpec R(l, m);
        const i64 P = 24 * 200;
        auto e4 = eisenstein(4, P, R).series, e6 = eisenstein(6, P, R).series;
        auto lhs = (series_pow(e4, 3, P) - series_mul(e6, e6, P)).scaled(R.inv(1728));
        EXPECT_SERIES_EQ(lhs, delta_series(P, R));
    }
}

TEST(Basis, DimensionsMatchMonomialCount) {
    for (int k = 0; k <= 120; k += 2) {
        EXPECT_EQ(dim_Mk(k), monomial_count(k)) << k;
        if (k >= 4) {
            EXPECT_EQ(dim_Sk(k), dim_Mk(k) - 1) << k;
        }
    }
    EXPECT_EQ(dim_Sk(66), 5);
    EXPECT_THROW(basis_Mk(7, false, 240, RingSpec(5, 1)), Error);
}

TEST(Basis, SmallSpaces) {
    const RingSpec R(13, 1);
    auto M0 = basis_Mk(0, false, 240, R);
    ASSERT_EQ(M0->dim(), 1u);
    EXPECT_SERIES_EQ(M0->rows[0], ResidueSeries::one(R, 240));
    auto M12 = basis_Mk(12, false, 240, R);
    EXPECT_EQ(M12->dim(), 2u);
    auto S12 = basis_Mk(12, true, 240, R);
    ASSERT_EQ(S12->dim(), 1u);
    EXPECT_SERIES_EQ(S12->rows[0], delta_series(240, R));
}

TEST(Basis, RowsAreDiagonal) {
    for (auto [l, m] : {std::pair<u32, u32>{5, 1}, {7, 2}, {13, 2}}) {
        const RingSpec R(l, m);
        for (int k : {4, 12, 24, 36, 66, 100}) {
            for (bool cusp : {false, true}) {
                auto B = basis_Mk(k, cusp, 24 * 30, R);
                for (std::size_t i = 0; i < B->dim(); ++i) {
                    for (std::size_t j = 0; j < B->dim(); ++j)
                        EXPECT_EQ(B->rows[i].at(B->pivot(j)), i == j ? 1u : 0u) << k << " " << i << " " << j;
                    for (i64 n = 0; n < B->pivot(i); ++n) EXPECT_EQ(B->rows[i].at(n), 0u);
                }
            }
        }
    }
}

TEST(Basis, RowsAreProductsOfGenerators) {
    // Every row of M_24 is an integral combination of E4^6, E4^3 E6^2, E6^4.
    const RingSpec R(11, 2);
    const i64 P = 24 * 40;
    auto e4 = eisenstein(4, P, R).series, e6 = eisenstein(6, P, R).series;
    std::vector<Vec> gens{series_pow(e4, 6, P).window(0, 40), series_mul(series_pow(e4, 3, P), series_pow(e6, 2, P), P).window(0, 40),
                          series_pow(e6, 4, P).window(0, 40)};
    const auto H = howell(gens, R);
    auto B = basis_Mk(24, false, P, R);
    for (const auto& r : B->rows) EXPECT_TRUE(member(r.window(0, 40), H).has_value());
}

TEST(Phi, LeadingExponents) {
    EXPECT_EQ(*phi_ell(RingSpec(5, 1), 1, 24 * 10).series.valuation24(), 24);
    EXPECT_EQ(phi_ell(RingSpec(13, 1), 2, 24 * 30).series.offset24(), 14 * 24);
    EXPECT_EQ(phi_ell(RingSpec(13, 1), 2, 24 * 30).series.at(14), 1u);
}

TEST(Phi, CongruentToDeltaPower) {
    for (u32 l : {5u, 7u, 11u, 13u}) {
        const RingSpec R(l, 1);
        const i64 P = 24 * 200;
        const u64 e = (u64(l) * l - 1) / 24;
        EXPECT_SERIES_EQ(phi_ell(R, 1, P).series, series_pow(delta_series(P, R), e, P)) << l;
    }
}

TEST(Phi, EtaQuotientIdentity) {
    // Phi * eta(z) = eta(ell^2 z), checked in 24ths.
    const RingSpec R(7, 2);
    const i64 P = 24 * 120;
    auto lhs = series_mul(phi_ell(R, 1, P).series, eta_power(1, 1, P, R).series, P);
    EXPECT_TRUE(lhs.agrees_with(eta_power(49, 1, P, R).series, P));
}

TEST(AEll, PowersAreOne) {
    const RingSpec F(5, 1);
    EXPECT_EQ(a_ell(F, 24).series.at(0), 1u);
    EXPECT_SERIES_EQ(series_pow(a_ell(F, 2400).series, 2, 2400), ResidueSeries::one(F, 2400));
    const RingSpec R(7, 2);
    EXPECT_SERIES_EQ(series_pow(a_ell(R, 24 * 60).series, 14, 24 * 60), ResidueSeries::one(R, 24 * 60));
    for (u32 l : {5u, 11u, 13u}) {
        const RingSpec S(l, 2);
        EXPECT_SERIES_EQ(series_pow(a_ell(S, 24 * 80).series, 2 * l, 24 * 80), ResidueSeries::one(S, 24 * 80)) << l;
    }
}

TEST(Filtration, Examples) {
    EXPECT_EQ(filtration(ResidueSeries(RingSpec(5, 1), 0, 24, 24 * 20), 12), std::nullopt);
    EXPECT_EQ(filtration(delta_series(24 * 40, RingSpec(13, 1)), 12), 12);
    EXPECT_EQ(filtration(theta(delta_series(24 * 40, RingSpec(5, 1))), 18), 18);
    const RingSpec F(5, 1);
    const auto d = delta_series(24 * 60, F);
    EXPECT_EQ(filtration(series_mul(d, d, 24 * 60), 24), 24);
    EXPECT_EQ(filtration(series_pow(d, 3, 24 * 60), 36), 36);
}

TEST(Filtration, NeedsCoefficients) {
    try {
        filtration(delta_series(24 * 3, RingSpec(13, 1)), 12);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::InsufficientPrecision);
    }
}

TEST(Filtration, DeltaUFiveVanishes) {
    // tau(5n) = 0 mod 5, so Delta|U(5) has filtration -infinity mod 5.
    const RingSpec F(5, 1);
    const auto du = u_ell(delta_series(24 * 5 * 40, F), 5);
    EXPECT_TRUE(du.is_zero());
    EXPECT_EQ(filtration(du, 12), std::nullopt);
}

TEST(Filtration, UOperatorContracts) {
    std::mt19937_64 g(77);
    for (u32 l : {5u, 7u, 13u}) {
        const RingSpec F(l, 1);
        for (int k = 12; k <= 60; k += 2) {
            if (dim_Sk(k) == 0) continue;
            const i64 W = sturm_bound(k) + 8;
            auto f = random_cusp_form(g, k, 24 * l * W, F);
            auto w = filtration(f, k);
            auto wu = filtration(u_ell(f, l), k);
            if (!w || !wu) continue;
            EXPECT_LE(*wu, static_cast<int>(l) + (*w - 1) / static_cast<int>(l)) << l << " " << k;
        }
    }
}

TEST(Filtration, UPowerIdentity) {
    // (f|U)^ell = f - theta^(ell-1) f mod ell for f = Delta.
    for (u32 l : {5u, 7u}) {
        const RingSpec F(l, 1);
        const i64 P = 24 * 100;
        auto d = delta_series(l * P, F);
        auto lhs = series_pow(u_ell(d, l), l, P);
        auto th = d.truncated(P);
        for (u32 i = 0; i + 1 < l; ++i) th = theta(th);
        EXPECT_SERIES_EQ(lhs, d.truncated(P) - th) << l;
    }
}

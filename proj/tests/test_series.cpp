#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace ptower;

namespace {

// Naive truncated product over the integers, reduced at the end.
std::vector<u64> naive_mul(const std::vector<u64>& a, const std::vector<u64>& b, std::size_t n, u64 M) {
    std::vector<u64> c(n, 0);
    for (std::size_t i = 0; i < a.size() && i < n; ++i)
        for (std::size_t j = 0; j < b.size() && i + j < n; ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % M;
    return c;
}

// prod_{n=1}^{N} (1 - q^n) by repeated multiplication.
std::vector<i64> euler_brute(int N) {
    std::vector<i64> c(N + 1, 0);
    c[0] = 1;
    for (int n = 1; n <= N; ++n)
        for (int j = N; j >= n; --j) c[j] -= c[j - n];
    return c;
}

ResidueSeries random_series(std::mt19937_64& g, const RingSpec& R, i64 terms) {
    std::vector<u64> c(static_cast<std::size_t>(terms));
    for (auto& x : c) x = g() % R.modulus;
    return ResidueSeries(R, 0, 24, 24 * terms, c);
}

} // namespace

TEST(Ring, ResInvExamples) {
    EXPECT_EQ(res_inv(1, RingSpec(5, 1)), 1u);
    EXPECT_EQ(res_inv(24, RingSpec(5, 1)), 4u);
    EXPECT_EQ(res_inv(24, RingSpec(13, 2)), 162u);
    EXPECT_EQ(24 * 162 % 169, 1);
}

TEST(Ring, ResInvRejectsNonUnit) {
    try {
        res_inv(10, RingSpec(5, 2));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NotAUnit);
    }
}

TEST(Ring, ValidatesParameters) {
    EXPECT_THROW(RingSpec(9, 1), Error);
    EXPECT_THROW(RingSpec(3, 1), Error);
    EXPECT_THROW(RingSpec(37, 6), Error);  // 37^6 exceeds the word budget
    EXPECT_EQ(RingSpec(37, 4).modulus, 1874161u);
}

TEST(Ring, Chi12Rule) {
    EXPECT_EQ(chi12(11), 1);
    EXPECT_EQ(chi12(5), -1);
    EXPECT_EQ(chi12(6), 0);
    for (int n = -50; n <= 50; ++n) {
        const int r = ((n % 12) + 12) % 12;
        const int want = (r == 1 || r == 11) ? 1 : (r == 5 || r == 7) ? -1 : 0;
        EXPECT_EQ(chi12(n), want) << n;
    }
}

TEST(Ring, KroneckerMatchesEulerCriterion) {
    for (i64 p : {5, 7, 11, 13, 17}) {
        for (i64 a = -30; a <= 30; ++a) {
            i64 r = ((a % p) + p) % p;
            int want = 0;
            if (r != 0) {
                want = -1;
                for (i64 x = 1; x < p; ++x)
                    if (x * x % p == r) want = 1;
            }
            EXPECT_EQ(kronecker(a, p), want) << a << " " << p;
        }
    }
}

TEST(Series, MulSmallExample) {
    const RingSpec R(7, 1);
    auto a = ResidueSeries::from_ints(R, {1, 1}, 10), b = ResidueSeries::from_ints(R, {1, -1}, 10);
    auto c = series_mul(a, b, 240);
    EXPECT_EQ(c, ResidueSeries::from_ints(R, {1, 0, -1}, 10));
}

TEST(Series, EulerAgreesWithBruteProduct) {
    const RingSpec R(13, 2);
    const auto brute = euler_brute(40);
    auto e = euler_series(24 * 40, R);
    for (int n = 0; n < 40; ++n) EXPECT_EQ(e.at(n), R.reduce(brute[n])) << n;
    EXPECT_EQ(e.at(1), R.reduce(-1));
    EXPECT_EQ(e.at(2), R.reduce(-1));
    EXPECT_EQ(e.at(5), 1u);
    EXPECT_EQ(e.at(7), 1u);
}

TEST(Series, InverseOfEulerIsPartitions) {
    const RingSpec R(37, 1);
    auto p = series_inv(euler_series(24 * 20, R), 24 * 20);
    EXPECT_EQ(p.at(4), 5u);
    auto e = euler_series(24 * 1000, RingSpec(13, 2));
    auto one = series_mul(e, series_inv(e, 24 * 1000), 24 * 1000);
    EXPECT_SERIES_EQ(one, ResidueSeries::one(RingSpec(13, 2), 24 * 1000));
}

TEST(Series, InverseOfGeometric) {
    const RingSpec R(5, 2);
    auto g = series_inv(ResidueSeries::from_ints(R, {1, -1}, 50), 24 * 50);
    for (int n = 0; n < 50; ++n) EXPECT_EQ(g.at(n), 1u);
}

TEST(Series, InverseInvolution) {
    const RingSpec R(7, 1);
    auto f = ResidueSeries::from_ints(R, {1, 3, 0, 1}, 30);
    EXPECT_SERIES_EQ(series_inv(series_inv(f, 24 * 30), 24 * 30), f);
}

TEST(Series, InverseNeedsUnitLead) {
    try {
        series_inv(ResidueSeries::from_ints(RingSpec(5, 2), {5, 1}, 10), 240);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::LeadingNotUnit);
    }
}

TEST(Series, PowExamples) {
    const RingSpec R(11, 1);
    auto e = euler_series(24 * 20, R);
    EXPECT_SERIES_EQ(series_pow(e, 0, 480), ResidueSeries::one(R, 480));
    EXPECT_EQ(series_pow(e, 2, 480).at(2), R.reduce(-1));
    // Lifted A_5^2 = 1 mod 5 on 50 terms.
    const RingSpec F(5, 1);
    EXPECT_SERIES_EQ(series_pow(a_ell(F, 24 * 50).series, 2, 24 * 50), ResidueSeries::one(F, 24 * 50));
}

TEST(Series, PowMatchesRepeatedMultiplication) {
    std::mt19937_64 g(3);
    const RingSpec R(7, 2);
    auto f = random_series(g, R, 60);
    auto acc = ResidueSeries::one(R, 24 * 60);
    for (int e = 1; e <= 9; ++e) {
        acc = series_mul(acc, f, 24 * 60);
        EXPECT_SERIES_EQ(series_pow(f, e, 24 * 60), acc) << e;
    }
}

TEST(Series, DilateExamples) {
    const RingSpec R(5, 1);
    auto d = dilate(ResidueSeries::from_ints(R, {1, 1}, 4), 3);
    EXPECT_EQ(d.at(0), 1u);
    EXPECT_EQ(d.at(3), 1u);
    EXPECT_EQ(d.at(1), 0u);
    auto e = euler_series(24 * 10, R);
    auto de = dilate(e, 25);
    for (int n = 0; n < 250; ++n) EXPECT_EQ(de.at(n), n % 25 == 0 ? e.at(n / 25) : 0u);
}

TEST(Series, DilateComposes) {
    std::mt19937_64 g(9);
    const RingSpec R(13, 1);
    auto f = random_series(g, R, 30);
    EXPECT_EQ(dilate(dilate(f, 2), 3), dilate(f, 6));
}

TEST(Series, EtaOffsetsInTwentyFourths) {
    const RingSpec R(5, 1);
    auto eta = eta_power(1, 1, 240, R);
    EXPECT_EQ(eta.series.offset24(), 1);
    EXPECT_EQ(eta_power(5, 2, 24 * 20, R).series.offset24(), 10);
}

TEST(Series, MulAgreesWithNaiveOracle) {
    std::mt19937_64 g(17);
    for (u64 M : {5ull, 49ull, 169ull}) {
        const RingSpec R(M == 5 ? 5 : M == 49 ? 7 : 13, M == 5 ? 1 : 2);
        for (int trial = 0; trial < 40; ++trial) {
            const std::size_t la = 1 + g() % 512, lb = 1 + g() % 512, n = 1 + g() % 512;
            std::vector<u64> a(la), b(lb);
            for (auto& x : a) x = g() % M;
            for (auto& x : b) x = g() % M;
            EXPECT_EQ(convolve(a, b, n, M), naive_mul(a, b, n, M)) << la << "x" << lb << "->" << n;
        }
    }
}

TEST(Series, NttPathAgreesWithSchoolbookOnLongInputs) {
    std::mt19937_64 g(1);
    const u64 M = RingSpec(37, 4).modulus;
    std::vector<u64> a(3000), b(2500);
    for (auto& x : a) x = g() % M;
    for (auto& x : b) x = g() % M;
    EXPECT_EQ(convolve_ntt(a, b, 4000, M), naive_mul(a, b, 4000, M));
}

class RingAxioms : public ::testing::TestWithParam<std::pair<u32, u32>> {};

TEST_P(RingAxioms, AssociativeAndDistributive) {
    const RingSpec R(GetParam().first, GetParam().second);
    std::mt19937_64 g(R.modulus);
    for (int trial = 0; trial < 5; ++trial) {
        auto a = random_series(g, R, 200), b = random_series(g, R, 200), c = random_series(g, R, 200);
        const i64 P = 24 * 200;
        EXPECT_SERIES_EQ(series_mul(series_mul(a, b, P), c, P), series_mul(a, series_mul(b, c, P), P));
        EXPECT_SERIES_EQ(series_mul(a, b + c, P), series_mul(a, b, P) + series_mul(a, c, P));
        EXPECT_SERIES_EQ(series_mul(a, b, P), series_mul(b, a, P));
    }
}

INSTANTIATE_TEST_SUITE_P(Rings, RingAxioms,
                         ::testing::Values(std::pair<u32, u32>{5, 1}, std::pair<u32, u32>{7, 2},
                                           std::pair<u32, u32>{13, 2}));

TEST(Series, TruncationMonotone) {
    std::mt19937_64 g(5);
    const RingSpec R(7, 2);
    auto a = random_series(g, R, 300), b = random_series(g, R, 300);
    for (i64 P : {24 * 17, 24 * 100, 24 * 299}) {
        EXPECT_SERIES_EQ(series_mul(a, b, 24 * 300).truncated(P), series_mul(a.truncated(P), b.truncated(P), P));
        auto ai = random_series(g, R, 300);
        ai = ai + ResidueSeries::one(R, 24 * 300);
        if (!R.is_unit(ai.at(0))) continue;
        EXPECT_SERIES_EQ(series_inv(ai, 24 * 300).truncated(P), series_inv(ai.truncated(P), P));
    }
}

TEST(Series, PrecisionIsNeverExceeded) {
    const RingSpec R(5, 1);
    auto a = ResidueSeries::from_ints(R, {1, 2, 3}, 3);
    try {
        a.at(3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::InsufficientPrecision);
    }
    EXPECT_THROW(a.truncated(24 * 4), Error);
    auto b = ResidueSeries::from_ints(R, {1, 1}, 10);
    EXPECT_EQ(series_mul(a, b).prec24(), 24 * 3);
}

TEST(Series, ShiftedSeriesProductOffsets) {
    const RingSpec R(7, 1);
    auto e1 = eta_power(1, 1, 24 * 20, R).series;   // q^(1/24) E(q)
    auto e7 = eta_power(7, 1, 24 * 20, R).series;   // q^(7/24) E(q^7)
    auto p = series_mul(e1, e7);
    EXPECT_EQ(p.offset24(), 8);
    EXPECT_EQ(p.at24(8), 1u);
    EXPECT_EQ(p.at24(32), R.reduce(-1));  // from -q in E(q)
}

// Runs the schedule forward exactly as build_tower does, from base precision p0.
static ResidueSeries run_schedule(const std::vector<ScheduleStep>& sched, const RingSpec& R, i64 p0, i64 target) {
    const PrecisionPlan plan = plan_precision(sched, target);
    ResidueSeries cur = ResidueSeries::one(R, p0);
    for (std::size_t i = 0; i < sched.size(); ++i) {
        const i64 out = plan.level[i + 1];
        if (sched[i].kind == StepKind::U) {
            cur = u_ell(cur, R.ell, out);
        } else {
            const i64 prod = u_input_precision(R.ell, out);
            auto phi = phi_ell(R, sched[i].r, prod).series;
            cur = u_ell(series_mul(cur, phi, prod), R.ell, out);
        }
    }
    return cur;
}

TEST(Precision, PlanBasics) {
    EXPECT_EQ(plan_precision({}, 100).base(), 100);
    std::vector<ScheduleStep> one{{StepKind::U, 5, 0}};
    EXPECT_GE(plan_precision(one, 100).base(), 500);
}

TEST(Precision, PlanForThirteenTower) {
    const auto sched = tower_schedule(TowerKind::pr(2), 13, 0, 4);
    const PrecisionPlan p = plan_precision(sched, 24 * 35);
    EXPECT_EQ(p.target(), 24 * 35);
    // Hand backward pass: U multiplies by 13, D multiplies by 13 and credits Phi^2's valuation.
    i64 v = 840;
    v = 13 * v;
    v = 13 * v - 2 * 168;
    v = 13 * v;
    v = 13 * v - 2 * 168;
    EXPECT_EQ(p.base(), v);
}

TEST(Precision, PlanIsMinimalAndSufficient) {
    const RingSpec R(7, 1);
    const auto sched = tower_schedule(TowerKind::pr(2), 7, 0, 4);
    const i64 target = 24 * 6;
    const PrecisionPlan plan = plan_precision(sched, target);
    const auto at_plan = run_schedule(sched, R, plan.base(), target);
    const auto doubled = run_schedule(sched, R, 2 * plan.base(), target);
    EXPECT_EQ(at_plan.prec24(), target);
    EXPECT_TRUE(at_plan.agrees_with(doubled, target));
    try {
        run_schedule(sched, R, plan.base() - 24, target);
        FAIL() << "a base below the plan must be rejected";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::InsufficientPrecision);
    }
}

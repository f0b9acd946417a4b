#pragma once

#include <gtest/gtest.h>

#include "ptower/ptower.hpp"

namespace ptower {

inline void PrintTo(const ResidueSeries& s, std::ostream* os) { *os << s.describe(); }

} // namespace ptower

// Value equality: same ring, same precision, same coefficients whatever the grid layout.
inline ::testing::AssertionResult SameSeries(const char* ea, const char* eb, const ptower::ResidueSeries& a,
                                             const ptower::ResidueSeries& b) {
    if (!(a.ring() == b.ring())) return ::testing::AssertionFailure() << ea << " and " << eb << " live in different rings";
    if (a.prec24() != b.prec24())
        return ::testing::AssertionFailure() << ea << " prec24 " << a.prec24() << " vs " << eb << " prec24 " << b.prec24();
    for (ptower::i64 e = std::min(a.offset24(), b.offset24()); e < a.prec24(); ++e)
        if (a.at24(e) != b.at24(e))
            return ::testing::AssertionFailure() << ea << " and " << eb << " differ at q^(" << e << "/24): " << a.at24(e)
                                                 << " vs " << b.at24(e);
    return ::testing::AssertionSuccess();
}

#define EXPECT_SERIES_EQ(a, b) EXPECT_PRED_FORMAT2(SameSeries, a, b)

#pragma once

#include <span>
#include <string>
#include <vector>

#include "ptower/series/ring.hpp"

namespace ptower {

enum class StepKind { U, D };

struct ScheduleStep {
    StepKind kind = StepKind::U;
    u32 ell = 5;
    u32 r = 0;

    // Leading exponent of Phi_ell^r, in 24ths.
    i64 phi_valuation24() const { return static_cast<i64>(r) * (i64(ell) * ell - 1); }
};

struct PrecisionPlan {
    // level[i] is the precision (24ths) the input of step i must carry; level.back() is the target.
    std::vector<i64> level;
    // factor[i] is the precision of Phi^r needed by step i (0 for a bare U step).
    std::vector<i64> factor;

    i64 base() const { return level.front(); }
    i64 target() const { return level.back(); }
};

// Input precision of U(ell) that leaves out24 trusted: ceil(in/ell) >= out iff in >= ell*out.
inline i64 u_input_precision(u32 ell, i64 out24) { return i64(ell) * out24; }

inline i64 u_output_precision(u32 ell, i64 in24) { return ceil_div(in24, ell); }

// Backward pass over the schedule; levels are integer-q series with nonnegative valuation.
inline PrecisionPlan plan_precision(std::span<const ScheduleStep> schedule, i64 target_prec24) {
    PrecisionPlan p;
    p.level.assign(schedule.size() + 1, 0);
    p.factor.assign(schedule.size(), 0);
    p.level.back() = target_prec24;
    for (std::size_t i = schedule.size(); i-- > 0;) {
        const ScheduleStep& s = schedule[i];
        const i64 prod = u_input_precision(s.ell, p.level[i + 1]);
        if (s.kind == StepKind::U) {
            p.level[i] = prod;
        } else {
            p.level[i] = std::max<i64>(prod - s.phi_valuation24(), 0);
            p.factor[i] = prod;
        }
    }
    return p;
}

inline std::string step_name(const ScheduleStep& s) {
    return s.kind == StepKind::U ? "U(" + std::to_string(s.ell) + ")"
                                 : "D_" + std::to_string(s.r) + "(" + std::to_string(s.ell) + ")";
}

} // namespace ptower

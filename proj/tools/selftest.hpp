#pragma once

#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "ptower/ptower.hpp"

namespace ptower::cli {

struct SelfCheck {
    std::string name;
    std::function<bool()> run;
};

inline std::vector<SelfCheck> selftest_checks() {
    using V = std::vector<u64>;
    std::vector<SelfCheck> c;
    c.push_back({"res_inv(24) mod 5 = 4", [] { return res_inv(24, RingSpec(5, 1)) == 4; }});
    c.push_back({"res_inv(24) mod 169 = 162", [] { return res_inv(24, RingSpec(13, 2)) == 162; }});
    c.push_back({"chi12 on 11, 5, 6", [] { return chi12(11) == 1 && chi12(5) == -1 && chi12(6) == 0; }});
    c.push_back({"(1+q)(1-q) = 1-q^2", [] {
                     const RingSpec R(7, 1);
                     auto a = ResidueSeries::from_ints(R, {1, 1}, 10), b = ResidueSeries::from_ints(R, {1, -1}, 10);
                     return series_mul(a, b, 240) == ResidueSeries::from_ints(R, {1, 0, -1}, 10);
                 }});
    c.push_back({"1/E(q) at q^4 is 5", [] {
                     const RingSpec R(13, 1);
                     return series_inv(euler_series(24 * 10, R), 240).at(4) == 5;
                 }});
    c.push_back({"E(q) signs at 1,2,5,7", [] {
                     const RingSpec R(13, 1);
                     auto e = euler_series(24 * 15, R);
                     return e.at(1) == 12 && e.at(2) == 12 && e.at(5) == 1 && e.at(7) == 1 && e.at(12) == 12;
                 }});
    c.push_back({"Delta = q - 24q^2 + 252q^3 - 1472q^4", [] {
                     const RingSpec R(37, 2);
                     auto d = delta_series(24 * 5, R);
                     return d.at(1) == 1 && d.at(2) == R.reduce(-24) && d.at(3) == 252 && d.at(4) == R.reduce(-1472);
                 }});
    c.push_back({"dim S66 = 5, dim M12 = 2", [] { return dim_Sk(66) == 5 && dim_Mk(12) == 2; }});
    c.push_back({"Phi_5 = Delta mod 5", [] {
                     const RingSpec R(5, 1);
                     return phi_ell(R, 1, 2400).series.agrees_with(delta_series(2400, R), 2400);
                 }});
    c.push_back({"A_5^2 = 1 mod 5", [] {
                     const RingSpec R(5, 1);
                     return series_pow(a_ell(R, 2400).series, 2, 2400) == ResidueSeries::one(R, 2400);
                 }});
    c.push_back({"p(4) = 5, p(5) = 7, p2(2) = 5", [] {
                     const RingSpec R(37, 1);
                     auto p = pr_series(1, 240, R), p2 = pr_series(2, 240, R);
                     return p.at(4) == 5 && p.at(5) == 7 && p2.at(2) == 5;
                 }});
    c.push_back({"s(3) = 5, s(4) = 10, s(5) = 14", [] {
                     auto s = spt_series(240, RingSpec(37, 1));
                     return s.at(3) == 5 && s.at(4) == 10 && s.at(5) == 14;
                 }});
    c.push_back({"delta_13(2) = 162", [] { return delta_ell(13, 2) == 162; }});
    c.push_back({"omega_13(Delta) = 12", [] { return filtration(delta_series(24 * 40, RingSpec(13, 1)), 12) == 12; }});
    c.push_back({"omega_5(theta Delta) = 18", [] {
                     return filtration(theta(delta_series(24 * 40, RingSpec(5, 1))), 18) == 18;
                 }});
    c.push_back({"T(2) Delta at q is tau(2) mod 13", [] {
                     const RingSpec R(13, 1);
                     return hecke_integral(delta_series(24 * 20, R), 2, 12, Character::trivial()).at(1) == 2;
                 }});
    c.push_back({"R_5 = R_13 = 0, R_11 = 1, R_13(2) = 1", [] {
                     return r_bound(TowerKind::spt_kind(), 5) == 0 && r_bound(TowerKind::spt_kind(), 13) == 0 &&
                            r_bound(TowerKind::spt_kind(), 11) == 1 && r_bound(TowerKind::pr(2), 13) == 1;
                 }});
    c.push_back({"d_11(spt) = d_17(spt) = d_13(2) = 0", [] {
                     return d_invariants(TowerKind::spt_kind(), 11).d == 0 &&
                            d_invariants(TowerKind::spt_kind(), 17).d == 0 && d_invariants(TowerKind::pr(2), 13).d == 0;
                 }});
    c.push_back({"ranks: spt 5 -> 0, spt 11 -> 1, p2 at 13 -> 1", [] {
                     return stabilize(TowerKind::spt_kind(), RingSpec(5, 1)).rank == 0 &&
                            stabilize(TowerKind::spt_kind(), RingSpec(11, 1)).rank == 1 &&
                            stabilize(TowerKind::pr(2), RingSpec(13, 1)).rank == 1;
                 }});
    c.push_back({"P_13(2,4) leading 1, 4, 1", [] {
                     LiftedTower T(TowerKind::pr(2), RingSpec(13, 1));
                     T.extend_to(4);
                     return leading_pattern(extract_P(T.series(4, 24 * 10), TowerKind::pr(2), 4), 3) == V{1, 4, 1};
                 }});
    for (const auto& p : preset_names())
        c.push_back({"preset " + p, [p] {
                         for (const auto& r : run_preset(p))
                             if (!r.holds()) return false;
                         return true;
                     }});
    return c;
}

// Runs every check; returns the number of failures.
inline int run_selftest(std::ostream& os) {
    int failures = 0;
    for (const auto& c : selftest_checks()) {
        bool ok = false;
        std::string why;
        try {
            ok = c.run();
        } catch (const std::exception& e) {
            why = e.what();
        }
        os << (ok ? "ok    " : "FAIL  ") << c.name << (why.empty() ? "" : "  (" + why + ")") << '\n';
        if (!ok) ++failures;
    }
    os << (failures ? std::to_string(failures) + " check(s) failed" : "all checks passed") << '\n';
    return failures;
}

} // namespace ptower::cli

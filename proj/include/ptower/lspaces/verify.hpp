#pragma once

#include <chrono>
#include <json.hpp>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ptower/lspaces/lifted.hpp"
#include "ptower/lspaces/relations.hpp"

namespace ptower {

enum class Verdict { Holds, Fails, Insufficient };

inline std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "holds";
        case Verdict::Fails: return "fails";
        default: return "insufficient";
    }
}

struct CongruenceReport {
    std::string family;
    RingSpec ring;
    i64 n_lo = 0, n_hi = 0;
    Verdict verdict = Verdict::Holds;
    nlohmann::json witnesses = nlohmann::json::array();
    nlohmann::json scalars = nlohmann::json::object();
    std::string note;
    double seconds = 0;

    bool holds() const { return verdict == Verdict::Holds; }

    nlohmann::json to_json(bool timing = true) const {
        nlohmann::json j;
        j["family"] = family;
        j["ring"] = {{"ell", ring.ell}, {"m", ring.m}, {"modulus", ring.modulus}};
        j["range"] = {{"n_min", n_lo}, {"n_max", n_hi}};
        j["verdict"] = verdict_name(verdict);
        j["witnesses"] = witnesses;
        j["scalars"] = scalars;
        if (!note.empty()) j["note"] = note;
        if (timing) j["timing"] = {{"seconds", seconds}};
        return j;
    }
};

namespace detail {

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    }

private:
    std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

} // namespace detail

// Arithmetic function evaluated from its direct generating series.
struct ArithFn {
    bool spt = false;
    u32 r = 1;

    static ArithFn p(u32 r = 1) { return {false, r}; }
    static ArithFn s() { return {true, 1}; }
    std::string name() const { return spt ? "s" : (r == 1 ? "p" : "p" + std::to_string(r)); }

    ResidueSeries table(i64 terms, const RingSpec& ring) const {
        return spt ? spt_series(24 * terms, ring) : pr_series(r, 24 * terms, ring);
    }
};

// f(A n + B) = C g(A2 n + B2) mod ell^m for each n listed; without g the right side is 0.
struct Progression {
    RingSpec ring;
    ArithFn f;
    i64 A = 1, B = 0;
    u64 C = 1;
    std::optional<ArithFn> g;
    i64 A2 = 1, B2 = 0;
    std::vector<i64> ns;

    std::string family() const {
        auto term = [](const std::string& fn, i64 a, i64 b) {
            return fn + "(" + std::to_string(a) + "n+" + std::to_string(b) + ")";
        };
        std::string lhs = term(f.name(), A, B);
        std::string rhs = g ? (C == 1 ? "" : std::to_string(C) + "*") + term(g->name(), A2, B2) : "0";
        return lhs + " = " + rhs + " mod " + std::to_string(ring.modulus);
    }
};

// Tables shared across checks in one run, keyed by (function, ring).
class DirectTables {
public:
    const ResidueSeries& get(const ArithFn& fn, const RingSpec& ring, i64 terms) {
        const auto key = std::make_tuple(fn.spt, fn.r, ring.ell, ring.m);
        auto it = map_.find(key);
        if (it == map_.end() || it->second.terms() < terms) {
            ResidueSeries t = fn.table(terms, ring);
            it = map_.insert_or_assign(key, std::move(t)).first;
        }
        return it->second;
    }

private:
    std::map<std::tuple<bool, u32, u32, u32>, ResidueSeries> map_;
};

inline CongruenceReport verify_progression(const Progression& pr, DirectTables& tables, i64 max_terms = 2'000'000) {
    detail::Stopwatch sw;
    CongruenceReport rep;
    rep.family = pr.family();
    rep.ring = pr.ring;
    require(!pr.ns.empty(), Errc::InvalidArgument, "empty n-range");
    rep.n_lo = *std::min_element(pr.ns.begin(), pr.ns.end());
    rep.n_hi = *std::max_element(pr.ns.begin(), pr.ns.end());
    i64 need = 0;
    for (i64 n : pr.ns) {
        need = std::max(need, pr.A * n + pr.B + 1);
        if (pr.g) need = std::max(need, pr.A2 * n + pr.B2 + 1);
    }
    if (need > max_terms) {
        rep.verdict = Verdict::Insufficient;
        rep.note = "needs " + std::to_string(need) + " terms, budget " + std::to_string(max_terms);
        rep.seconds = sw.seconds();
        return rep;
    }
    const ResidueSeries& F = tables.get(pr.f, pr.ring, need);
    const ResidueSeries* G = pr.g ? &tables.get(*pr.g, pr.ring, need) : nullptr;
    for (i64 n : pr.ns) {
        const i64 x = pr.A * n + pr.B;
        const u64 lhs = F.at(x);
        nlohmann::json w{{"n", n}, {"index", x}, {"lhs", lhs}};
        u64 rhs = 0;
        if (G) {
            const i64 y = pr.A2 * n + pr.B2;
            rhs = pr.ring.mul(pr.C, G->at(y));
            w["rhs_index"] = y;
        }
        w["rhs"] = rhs;
        w["ok"] = lhs == rhs;
        if (lhs != rhs) rep.verdict = Verdict::Fails;
        rep.witnesses.push_back(std::move(w));
    }
    if (pr.g) rep.scalars["C"] = pr.C;
    rep.seconds = sw.seconds();
    return rep;
}

inline CongruenceReport verify_progression(const Progression& pr) {
    DirectTables t;
    return verify_progression(pr, t);
}

inline std::vector<i64> n_range(i64 lo, i64 hi) {
    std::vector<i64> v;
    for (i64 n = lo; n <= hi; ++n) v.push_back(n);
    return v;
}

// First `count` coefficients of P at indices n >= 0.
inline std::vector<u64> leading_pattern(const PSeries& P, std::size_t count) {
    std::vector<u64> out;
    for (std::size_t k = 0; k < P.series.size() && out.size() < count; ++k)
        if (P.series.exponent24(k) >= 0) out.push_back(P.series.slot(k));
    return out;
}

// P(b1) = C P(b2) on `terms` integer steps, with P read off the lifted tower.
struct SeriesRelationSpec {
    TowerKind kind;
    RingSpec ring;
    u32 b1 = 2, b2 = 2;
    i64 terms = 40;
    std::optional<u64> expected_C;
    std::vector<u64> pattern;  // expected leading coefficients of P(b1)
    bool direct = false;       // build the q-series tower instead of the lifted one
};

inline CongruenceReport verify_series_relation(const SeriesRelationSpec& s) {
    detail::Stopwatch sw;
    CongruenceReport rep;
    rep.ring = s.ring;
    rep.family = "P_" + std::to_string(s.ring.ell) + "(" + s.kind.name() + "," + std::to_string(s.b1) + ") = C*P_" +
                 std::to_string(s.ring.ell) + "(" + s.kind.name() + "," + std::to_string(s.b2) + ") mod " +
                 std::to_string(s.ring.modulus);
    rep.n_lo = 0;
    rep.n_hi = s.terms - 1;
    const i64 prec = 24 * s.terms + 24;
    const u32 top = std::max(s.b1, s.b2);
    std::optional<PSeries> P1, P2;
    if (s.direct) {
        const Tower T = build_tower(s.kind, s.ring, top, prec + 24 * s.kind.phi_power() * s.ring.ell);
        P1 = extract_P(T.level(s.b1).truncated(std::min(T.level(s.b1).prec24(), prec + 24 * i64(s.ring.ell))), s.kind, s.b1);
        P2 = extract_P(T.level(s.b2).truncated(std::min(T.level(s.b2).prec24(), prec + 24 * i64(s.ring.ell))), s.kind, s.b2);
        rep.scalars["route"] = "direct";
    } else {
        LiftedTower T(s.kind, s.ring);
        T.extend_to(top);
        P1 = extract_P(T.series(s.b1, prec), s.kind, s.b1);
        P2 = extract_P(T.series(s.b2, prec), s.kind, s.b2);
        rep.scalars["route"] = "lifted";
    }
    const ScalarResult rel = scalar_relation(P1->series, P2->series);
    rep.scalars["checked"] = rel.checked;
    if (rel.C) rep.scalars["C"] = *rel.C;
    if (rel.degenerate) rep.scalars["degenerate"] = true;
    if (!rel.C || (s.expected_C && *rel.C != *s.expected_C)) rep.verdict = Verdict::Fails;
    if (s.expected_C) rep.scalars["expected_C"] = *s.expected_C;
    if (!s.pattern.empty()) {
        const auto a = leading_pattern(*P1, s.pattern.size());
        rep.witnesses.push_back({{"b", s.b1}, {"leading", a}, {"ok", a == s.pattern}});
        if (a != s.pattern) rep.verdict = Verdict::Fails;
        rep.scalars["pattern"] = s.pattern;
    }
    if (rel.first_mismatch) rep.note = "first mismatch at slot " + std::to_string(*rel.first_mismatch);
    rep.seconds = sw.seconds();
    return rep;
}

struct HeckeSpec {
    RingSpec ring;
    u32 b = 2;
    u32 c = 5;
    int lambda = 0;  // 0: k_spt(ell, m) - 1
    std::optional<Character> chi;  // default: p_character(ell, b)
    i64 terms = 600;
    std::optional<u64> expected;
    std::map<i64, u64> listed;  // coefficients of P(24z)|T(c^2) to match
};

inline CongruenceReport verify_hecke(const HeckeSpec& h) {
    detail::Stopwatch sw;
    CongruenceReport rep;
    rep.ring = h.ring;
    const int lambda = h.lambda ? h.lambda : k_spt(h.ring.ell, h.ring.m) - 1;
    rep.family = "P_" + std::to_string(h.ring.ell) + "(spt," + std::to_string(h.b) + ";24z)|T(" +
                 std::to_string(h.c) + "^2) = lambda*P mod " + std::to_string(h.ring.modulus);
    const Character chi = h.chi.value_or(p_character(h.ring.ell, h.b));
    LiftedTower T(TowerKind::spt_kind(), h.ring);
    T.extend_to(h.b);
    i64 terms = h.terms;
    std::optional<HeckeResult> res;
    for (int attempt = 0; attempt < 4 && !res; ++attempt, terms *= 2) {
        try {
            res = hecke_eigenvalue(extract_P(T.series(h.b, 24 * terms), TowerKind::spt_kind(), h.b), h.c, lambda, chi);
        } catch (const Error& e) {
            if (e.code() != Errc::InsufficientPrecision) throw;
        }
    }
    if (!res) {
        rep.verdict = Verdict::Insufficient;
        rep.seconds = sw.seconds();
        return rep;
    }
    rep.n_lo = 0;
    rep.n_hi = res->image.terms() - 1;
    rep.scalars["lambda_weight"] = lambda;
    rep.scalars["character"] = chi.name();
    rep.scalars["unit_indices"] = res->relation.unit_indices;
    rep.scalars["checked"] = res->relation.checked;
    if (res->relation.C) rep.scalars["eigenvalue"] = *res->relation.C;
    if (!res->relation.C || (h.expected && *res->relation.C != *h.expected)) rep.verdict = Verdict::Fails;
    for (const auto& [n, want] : h.listed) {
        const u64 got = res->image.at(n);
        rep.witnesses.push_back({{"n", n}, {"coefficient", got}, {"expected", want}, {"ok", got == want}});
        if (got != want) rep.verdict = Verdict::Fails;
    }
    rep.seconds = sw.seconds();
    return rep;
}

// Garvan-type family s(ell^b n + delta_ell(b)) = 0 mod ell^e.
inline Progression spt_vanishing(u32 ell, u32 b, u32 e, i64 n_max) {
    return Progression{RingSpec(ell, e), ArithFn::s(), ipow(ell, b), delta_ell(ell, b), 1, std::nullopt, 1, 0,
                       n_range(0, n_max)};
}

inline u32 garvan_exponent(u32 b) { return (b + 1) / 2; }
inline u32 dim0_exponent(u32 b) { return (b - 1) / 2; }

struct PresetOptions {
    i64 n_max = -1;               // -1: preset default
    std::optional<u32> ell;
    std::optional<u32> b;
};

inline const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"example1", "example2", "example3", "intro", "garvan", "dim0"};
    return names;
}

inline std::vector<CongruenceReport> run_preset(const std::string& name, const PresetOptions& opt, DirectTables& tables) {
    auto nmax = [&](i64 d) { return opt.n_max >= 0 ? opt.n_max : d; };
    std::vector<CongruenceReport> out;
    if (name == "example1") {
        const RingSpec R(13, 1);
        out.push_back(verify_series_relation({TowerKind::pr(2), R, 4, 2, 40, 10, {1, 4, 1}}));
        out.push_back(verify_progression(
            {R, ArithFn::p(2), 28561, 26181, 10, ArithFn::p(2), 169, 155, n_range(0, nmax(20))}, tables));
    } else if (name == "example2") {
        const RingSpec R(11, 1);
        out.push_back(verify_series_relation({TowerKind::spt_kind(), R, 2, 4, 30, 1, {4, 7, 7}}));
        out.push_back(verify_progression({R, ArithFn::s(), 121, 116, 1, ArithFn::s(), 14641, 14031, n_range(0, nmax(3))},
                                         tables));
    } else if (name == "example3") {
        const RingSpec R(17, 1);
        out.push_back(verify_hecke({R, 2, 5, 0, Character::chi_12(), 600, 2, {{23, 13}, {71, 13}, {119, 4}, {143, 8}}}));
        std::vector<i64> ns;
        for (i64 n = 1; n <= std::max<i64>(nmax(3), 1); ++n)
            if (n % 5 != 0) ns.push_back(n);
        out.push_back(verify_progression({R, ArithFn::s(), 36125, 28599, 2, ArithFn::s(), 1445, 1144, ns}, tables));
    } else if (name == "intro") {
        const RingSpec R(13, 2);
        out.push_back(verify_series_relation({TowerKind::pr(1), R, 4, 2, 12, 45, {}, true}));
        out.push_back(verify_progression(
            {R, ArithFn::p(), 28561, 27371, 45, ArithFn::p(), 169, 162, n_range(0, nmax(10))}, tables));
    } else if (name == "garvan") {
        std::vector<std::pair<u32, u32>> cases{{5, 2}, {5, 3}, {7, 2}, {13, 2}};
        if (opt.ell || opt.b) cases = {{opt.ell.value_or(5), opt.b.value_or(2)}};
        for (auto [l, b] : cases) out.push_back(verify_progression(spt_vanishing(l, b, garvan_exponent(b), nmax(10)), tables));
    } else if (name == "dim0") {
        std::vector<std::pair<u32, u32>> cases{{5, 3}, {5, 5}, {7, 3}, {13, 3}};
        if (opt.ell || opt.b) cases = {{opt.ell.value_or(5), opt.b.value_or(3)}};
        for (auto [l, b] : cases) {
            require(dim0_exponent(b) >= 1, Errc::InvalidArgument, "dim0 needs b >= 3");
            out.push_back(verify_progression(spt_vanishing(l, b, dim0_exponent(b), nmax(10)), tables));
        }
    } else if (name == "all") {
        for (const auto& n : preset_names()) {
            auto r = run_preset(n, {opt.n_max, std::nullopt, std::nullopt}, tables);
            out.insert(out.end(), r.begin(), r.end());
        }
    } else {
        fail(Errc::InvalidArgument, "unknown preset '" + name + "'");
    }
    return out;
}

inline std::vector<CongruenceReport> run_preset(const std::string& name, const PresetOptions& opt = {}) {
    DirectTables t;
    return run_preset(name, opt, t);
}

} // namespace ptower

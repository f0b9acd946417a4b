#include <CLI11.hpp>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "ptower/io/cache.hpp"
#include "ptower/ptower.hpp"
#include "selftest.hpp"

using namespace ptower;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kFails = 1, kUsage = 2, kPrecision = 3, kInternal = 4 };

int exit_for(Errc c) {
    switch (c) {
        case Errc::InvalidArgument:
        case Errc::PrimeTooSmall:
        case Errc::OddWeight:
        case Errc::FractionalSupport:
        case Errc::RingMismatch:
        case Errc::NotAUnit:
        case Errc::LeadingNotUnit: return kUsage;
        case Errc::InsufficientPrecision:
        case Errc::NotStabilized: return kPrecision;
        default: return kInternal;
    }
}

struct Common {
    u32 ell = 13;
    u32 m = 1;
    u32 r = 1;
    bool spt = false;
    u32 b = 2;
    u32 bmax = 0;
    i64 prec = 30;  // integer-q terms
    i64 nmax = -1;
    std::string out;
    std::string format = "json";
    std::string cache;
    unsigned jobs = 1;
    bool no_timing = false;

    TowerKind kind() const { return spt ? TowerKind::spt_kind() : TowerKind::pr(r); }
    RingSpec ring() const { return RingSpec(ell, m); }
};

void emit(const Common& o, const json& j, const std::string& csv) {
    std::ostringstream ss;
    if (o.format == "csv")
        ss << csv;
    else
        ss << j.dump(2) << '\n';
    if (o.out.empty()) {
        std::cout << ss.str();
    } else {
        std::ofstream f(o.out);
        if (!f) fail(Errc::InvalidArgument, "cannot write " + o.out);
        f << ss.str();
    }
}

json ring_json(const RingSpec& R) { return {{"ell", R.ell}, {"m", R.m}, {"modulus", R.modulus}}; }

json span_json(const ModuleSpan& s) {
    return {{"window", {{"start24", s.window.start24}, {"length", s.window.length}, {"step24", s.window.step24}}},
            {"rows", s.rows}};
}

int cmd_tower(const Common& o) {
    const RingSpec R = o.ring();
    std::optional<SeriesCache> cache;
    TowerOptions topt;
    if (!o.cache.empty() || std::getenv(kCacheEnv)) {
        cache.emplace(SeriesCache::resolve_dir(o.cache));
        topt = cache->tower_options(o.kind(), R);
    }
    const Tower T = build_tower(o.kind(), R, o.b, 24 * o.prec, topt);
    json j{{"kind", o.kind().name()}, {"ring", ring_json(R)}, {"levels", json::array()}};
    std::string csv = "b,exponent,coefficient\n";
    for (u32 b = T.materialized_from; b <= T.top(); ++b) {
        const ResidueSeries& L = T.level(b);
        const i64 show = std::min<i64>(o.prec, static_cast<i64>(L.size()));
        std::vector<u64> head(L.coeffs().begin(), L.coeffs().begin() + show);
        j["levels"].push_back({{"b", b},
                               {"offset24", L.offset24()},
                               {"step24", L.step24()},
                               {"prec24", L.prec24()},
                               {"planned_prec24", T.plan.level[b - T.first]},
                               {"coefficients", head}});
        for (i64 k = 0; k < show; ++k)
            csv += std::to_string(b) + "," + std::to_string(L.exponent24(k) / 24) + "," + std::to_string(head[k]) + "\n";
    }
    emit(o, j, csv);
    return kOk;
}

PSeries extract_for(const Common& o, bool direct) {
    const RingSpec R = o.ring();
    const i64 prec = 24 * o.prec + 24;
    if (direct || (!o.spt && o.r == 1 && o.m > 1)) {
        const Tower T = build_tower(o.kind(), R, o.b, prec + 24 * R.ell * o.kind().phi_power());
        return extract_P(T, o.b);
    }
    LiftedTower T(o.kind(), R);
    T.extend_to(o.b);
    return extract_P(T.series(o.b, prec), o.kind(), o.b);
}

int cmd_extract(const Common& o, bool direct) {
    const PSeries P = extract_for(o, direct);
    json vals = json::array();
    std::string csv = "n24,argument,coefficient\n";
    for (const auto& v : P.values()) {
        json e{{"n24", v.n24}, {"coefficient", v.coeff}};
        if (v.argument) e["argument"] = *v.argument;
        if (v.secondary) e["secondary_argument"] = *v.secondary;
        vals.push_back(e);
        csv += std::to_string(v.n24) + "," + (v.argument ? std::to_string(*v.argument) : "") + "," +
               std::to_string(v.coeff) + "\n";
    }
    json j{{"kind", o.kind().name()}, {"ring", ring_json(o.ring())}, {"b", o.b},
           {"negative_support", P.negative_support()}, {"values", vals}};
    emit(o, j, csv);
    return kOk;
}

json parity_json(const ParityStabilization& p) {
    return {{"parity", parity_name(p.parity)}, {"stable_from", p.stable_from}, {"certified_through", p.certified_through},
            {"rank", p.rank}, {"span_ranks", p.span_ranks}, {"nested", p.nested}, {"omega", span_json(p.omega)}};
}

int cmd_stabilize(const Common& o) {
    const StabilizationResult s = stabilize(o.kind(), o.ring(), o.bmax);
    json d{{"d", s.dinv.d}};
    if (s.dinv.d_prime) d["d_prime"] = *s.dinv.d_prime;
    json j{{"kind", o.kind().name()},
           {"ring", ring_json(o.ring())},
           {"b_max", s.b_max},
           {"observed_b", s.observed_b},
           {"rank", s.rank},
           {"bound_R", s.bound_R},
           {"bound_b", s.bound_b},
           {"d_invariants", d},
           {"odd", parity_json(s.odd)},
           {"even", parity_json(s.even)}};
    std::string csv = "kind,ell,m,rank,bound_R,observed_b,bound_b\n" + o.kind().name() + "," + std::to_string(o.ell) +
                      "," + std::to_string(o.m) + "," + std::to_string(s.rank) + "," + std::to_string(s.bound_R) + "," +
                      std::to_string(s.observed_b) + "," + std::to_string(s.bound_b) + "\n";
    emit(o, j, csv);
    return s.rank <= static_cast<std::size_t>(std::max(s.bound_R, 0)) ? kOk : kFails;
}

int cmd_dinv(const Common& o) {
    const DInvariants d = d_invariants(o.kind(), o.ell);
    json j{{"kind", o.kind().name()}, {"ell", o.ell}, {"d", d.d}};
    std::string csv = "kind,ell,d,d_prime\n" + o.kind().name() + "," + std::to_string(o.ell) + "," + std::to_string(d.d) + ",";
    if (d.d_prime) {
        j["d_prime"] = *d.d_prime;
        csv += std::to_string(*d.d_prime);
    }
    emit(o, j, csv + "\n");
    return kOk;
}

void emit_reports(const Common& o, const std::vector<CongruenceReport>& reps) {
    json arr = json::array();
    std::string csv = "family,verdict,n_min,n_max\n";
    for (const auto& r : reps) {
        arr.push_back(r.to_json(!o.no_timing));
        csv += "\"" + r.family + "\"," + verdict_name(r.verdict) + "," + std::to_string(r.n_lo) + "," +
               std::to_string(r.n_hi) + "\n";
    }
    emit(o, json{{"reports", arr}}, csv);
}

int verdict_exit(const std::vector<CongruenceReport>& reps) {
    int code = kOk;
    for (const auto& r : reps) {
        if (r.verdict == Verdict::Fails) return kFails;
        if (r.verdict == Verdict::Insufficient) code = kPrecision;
    }
    return code;
}

int cmd_hecke(const Common& o, u32 c, int lambda, const std::string& chi) {
    require(o.spt, Errc::InvalidArgument, "hecke is implemented for spt towers (pass --spt)");
    require(is_prime(c) && 576 % c != 0, Errc::InvalidArgument, "c must be a prime not dividing 576");
    std::optional<Character> ch;
    if (chi == "trivial") ch = Character::trivial();
    if (chi == "chi12") ch = Character::chi_12();
    const auto rep = verify_hecke({o.ring(), o.b, c, lambda, ch, std::max<i64>(o.prec, 600), std::nullopt, {}});
    emit_reports(o, {rep});
    return verdict_exit({rep});
}

int cmd_verify(const Common& o, const std::string& preset, bool ell_set, bool b_set) {
    PresetOptions po;
    po.n_max = o.nmax;
    if (ell_set) po.ell = o.ell;
    if (b_set) po.b = o.b;
    std::vector<CongruenceReport> reps;
    if (preset == "all" && o.jobs > 1) {
        std::vector<std::future<std::vector<CongruenceReport>>> fut;
        for (const auto& n : preset_names())
            fut.push_back(std::async(std::launch::async, [n, &po] { return run_preset(n, {po.n_max, {}, {}}); }));
        for (auto& f : fut) {
            auto r = f.get();
            reps.insert(reps.end(), r.begin(), r.end());
        }
    } else {
        reps = run_preset(preset, po);
    }
    emit_reports(o, reps);
    return verdict_exit(reps);
}

int cmd_cache(const Common& o, const std::string& action) {
    SeriesCache cache(SeriesCache::resolve_dir(o.cache));
    if (action == "gc") {
        const auto st = cache.gc();
        emit(o,
             {{"dir", cache.dir().string()},
              {"removed_corrupt", st.removed_corrupt},
              {"removed_superseded", st.removed_superseded},
              {"removed_temp", st.removed_temp},
              {"kept", st.kept}},
             "kept," + std::to_string(st.kept) + "\n");
        return kOk;
    }
    json arr = json::array();
    std::string csv = "file,kind,ell,m,b,prec24,bytes\n";
    for (const auto& e : cache.list()) {
        arr.push_back({{"file", e.path.filename().string()}, {"kind", e.key.kind}, {"ell", e.key.ell}, {"m", e.key.m},
                       {"b", e.key.b}, {"prec24", e.key.prec24}, {"bytes", e.bytes}});
        csv += e.path.filename().string() + "," + e.key.kind + "," + std::to_string(e.key.ell) + "," +
               std::to_string(e.key.m) + "," + std::to_string(e.key.b) + "," + std::to_string(e.key.prec24) + "," +
               std::to_string(e.bytes) + "\n";
    }
    emit(o, json{{"dir", cache.dir().string()}, {"entries", arr}}, csv);
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"l-adic partition towers and their congruence modules"};
    app.require_subcommand(1);
    Common o;

    auto add_common = [&](CLI::App* s) {
        s->add_option("--ell", o.ell, "prime ell")->check(CLI::PositiveNumber);
        s->add_option("--m", o.m, "work modulo ell^m")->check(CLI::PositiveNumber);
        s->add_option("--r", o.r, "power r of the partition function p_r")->check(CLI::PositiveNumber);
        s->add_flag("--spt", o.spt, "use the smallest-parts tower");
        s->add_option("--b", o.b, "tower level");
        s->add_option("--bmax", o.bmax, "deepest level for stabilization (0: automatic)");
        s->add_option("--prec", o.prec, "integer-q terms wanted at the top level")->check(CLI::PositiveNumber);
        s->add_option("--nmax", o.nmax, "largest n in verification ranges");
        s->add_option("--out", o.out, "write output to a file");
        s->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        s->add_option("--cache", o.cache, "series cache directory (else $PTOWER_CACHE)");
        s->add_option("--jobs", o.jobs, "parallel jobs for independent verifications")->check(CLI::PositiveNumber);
        s->add_flag("--no-timing", o.no_timing, "omit timing fields from reports");
    };

    auto* tower = app.add_subcommand("tower", "build L(b) for b up to --b by direct series arithmetic");
    add_common(tower);
    auto* extract = app.add_subcommand("extract", "extract P(b) and its argument map");
    add_common(extract);
    bool direct = false;
    extract->add_flag("--direct", direct, "use the direct series tower instead of the lifted one");
    auto* stab = app.add_subcommand("stabilize", "stabilized spans, rank and b_ell");
    add_common(stab);
    auto* dinv = app.add_subcommand("dinv", "d-invariants (mod ell)");
    add_common(dinv);
    auto* hecke = app.add_subcommand("hecke", "Hecke eigenvalue of P(spt,b;24z) under T(c^2)");
    add_common(hecke);
    u32 c = 5;
    int lambda = 0;
    std::string chi = "auto";
    hecke->add_option("--c", c, "prime c not dividing 576");
    hecke->add_option("--lambda", lambda, "half-integral weight lambda + 1/2 (0: k_spt - 1)");
    hecke->add_option("--chi", chi, "character: auto (chi12 for even b, (12 ell/.) for odd b), chi12 or trivial")
        ->check(CLI::IsMember({"auto", "chi12", "trivial"}));
    auto* verify = app.add_subcommand("verify", "check a preset congruence family");
    add_common(verify);
    std::string preset;
    verify->add_option("--preset", preset, "example1|example2|example3|intro|garvan|dim0|all")->required();
    auto* selftest = app.add_subcommand("selftest", "run the built-in example suite");
    auto* cache = app.add_subcommand("cache", "inspect or clean the series cache");
    cache->require_subcommand(1);
    auto* cache_ls = cache->add_subcommand("ls", "list cached levels");
    add_common(cache_ls);
    auto* cache_gc = cache->add_subcommand("gc", "drop corrupt, temporary and superseded files");
    add_common(cache_gc);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*tower || *extract || *stab || *dinv || *hecke) (void)o.ring();
        if (*tower) return cmd_tower(o);
        if (*extract) return cmd_extract(o, direct);
        if (*stab) return cmd_stabilize(o);
        if (*dinv) return cmd_dinv(o);
        if (*hecke) return cmd_hecke(o, c, lambda, chi);
        if (*verify) return cmd_verify(o, preset, verify->count("--ell") > 0, verify->count("--b") > 0);
        if (*selftest) return cli::run_selftest(std::cout) == 0 ? kOk : kFails;
        if (*cache_ls) return cmd_cache(o, "ls");
        if (*cache_gc) return cmd_cache(o, "gc");
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return kInternal;
    }
    return kUsage;
}

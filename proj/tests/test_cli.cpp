#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "nlohmann/json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(PTOWER_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = ::popen(cmd.c_str(), "r");
    if (!p) return r;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int st = ::pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

fs::path scratch(const std::string& tag) {
    std::random_device rd;
    auto p = fs::temp_directory_path() / ("ptower-cli-" + tag + "-" + std::to_string(rd()));
    fs::create_directories(p);
    return p;
}

} // namespace

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("bogus").code, 2);
    EXPECT_EQ(run("tower --ell 99").code, 2);
    EXPECT_EQ(run("tower --ell 7 --r 5").code, 2);
    EXPECT_EQ(run("verify").code, 2);
    EXPECT_EQ(run("verify --preset nope").code, 2);
    EXPECT_EQ(run("stabilize --format xml").code, 2);
    EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, VerifyExampleOne) {
    const auto r = run("verify --preset example1 --no-timing");
    ASSERT_EQ(r.code, 0) << r.out;
    const auto j = json::parse(r.out);
    ASSERT_EQ(j["reports"].size(), 2u);
    EXPECT_EQ(j["reports"][0]["scalars"]["C"], 10);
    for (const auto& rep : j["reports"]) {
        EXPECT_EQ(rep["verdict"], "holds");
        EXPECT_FALSE(rep.contains("timing"));
    }
}

TEST(Cli, VerifyCustomGarvanCase) {
    const auto r = run("verify --preset garvan --ell 5 --b 3 --no-timing");
    ASSERT_EQ(r.code, 0) << r.out;
    const auto j = json::parse(r.out);
    ASSERT_EQ(j["reports"].size(), 1u);
    EXPECT_EQ(j["reports"][0]["ring"]["modulus"], 25);
}

TEST(Cli, DeterministicReports) {
    const auto a = run("stabilize --ell 13 --r 2 --m 2 --no-timing");
    const auto b = run("stabilize --ell 13 --r 2 --m 2 --no-timing");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    const auto j = json::parse(a.out);
    EXPECT_EQ(j["rank"], 1);
    EXPECT_EQ(j["observed_b"], 2);
    const auto c = run("verify --preset garvan --no-timing");
    EXPECT_EQ(c.out, run("verify --preset garvan --no-timing --jobs 2").out);
}

TEST(Cli, InsufficientDepthExitsThree) {
    EXPECT_EQ(run("stabilize --spt --ell 11 --m 2 --bmax 2").code, 3);
}

TEST(Cli, FailedCongruenceExitsOne) {
    // With chi12 alone the odd level is not an eigenform of T(13^2).
    const auto r = run("hecke --spt --ell 11 --b 3 --c 13 --chi chi12 --no-timing");
    EXPECT_EQ(r.code, 1) << r.out;
    EXPECT_EQ(json::parse(r.out)["reports"][0]["verdict"], "fails");
    EXPECT_EQ(run("hecke --spt --ell 11 --b 3 --c 13 --no-timing").code, 0);
}

TEST(Cli, HeckeExampleThree) {
    const auto r = run("hecke --spt --ell 17 --b 2 --c 5 --no-timing");
    ASSERT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(json::parse(r.out)["reports"][0]["scalars"]["eigenvalue"], 2);
}

TEST(Cli, DinvAndCsv) {
    const auto r = run("dinv --ell 13 --r 2 --format csv");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "kind,ell,d,d_prime\np2,13,0,0\n");
    const auto s = run("stabilize --spt --ell 11 --format csv");
    EXPECT_EQ(s.out, "kind,ell,m,rank,bound_R,observed_b,bound_b\nspt,11,1,1,1,1,3\n");
}

TEST(Cli, ExtractShowsArgumentMap) {
    const auto r = run("extract --ell 13 --r 2 --b 2 --prec 5");
    ASSERT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    // P(2) at q^(22/24) carries p2((169 * 22 + 2) / 24) = p2(155).
    bool seen = false;
    for (const auto& v : j["values"])
        if (v["n24"] == 22) {
            seen = true;
            EXPECT_EQ(v["argument"], 155);
        }
    EXPECT_TRUE(seen);
    const auto& first = j["values"][0];
    EXPECT_TRUE(first.contains("coefficient"));
    EXPECT_TRUE(j["negative_support"].is_array());
}

TEST(Cli, TowerCacheAndOutFile) {
    const auto dir = scratch("cache");
    const auto out = dir / "tower.json";
    const auto r = run("tower --ell 13 --r 2 --b 3 --prec 10 --cache " + dir.string() + " --out " + out.string());
    ASSERT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream f(out);
    const auto j = json::parse(f);
    EXPECT_EQ(j["levels"].size(), 4u);
    const auto ls = run("cache ls --cache " + dir.string());
    ASSERT_EQ(ls.code, 0);
    EXPECT_EQ(json::parse(ls.out)["entries"].size(), 3u);
    const auto again = run("tower --ell 13 --r 2 --b 3 --prec 10 --cache " + dir.string());
    EXPECT_EQ(json::parse(again.out)["levels"].size(), 1u);  // resumed from the stored top level
    const auto gc = run("cache gc --cache " + dir.string());
    EXPECT_EQ(json::parse(gc.out)["kept"], 3);
    fs::remove_all(dir);
}

#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <regex>
#include <string>
#include <vector>

#include "ptower/io/record.hpp"
#include "ptower/partitions/tower.hpp"

namespace ptower {

inline constexpr const char* kCacheEnv = "PTOWER_CACHE";

struct CacheKey {
    std::string kind;  // "spt" or "p<r>"
    u32 ell = 5, m = 1, b = 0;
    i64 prec24 = 0;

    std::string filename() const {
        return kind + "_l" + std::to_string(ell) + "_m" + std::to_string(m) + "_b" + std::to_string(b) + "_p" +
               std::to_string(prec24) + ".ptsr";
    }

    static std::optional<CacheKey> parse(const std::string& name) {
        static const std::regex re(R"(^(spt|p\d+)_l(\d+)_m(\d+)_b(\d+)_p(\d+)\.ptsr$)");
        std::smatch mt;
        if (!std::regex_match(name, mt, re)) return std::nullopt;
        return CacheKey{mt[1], static_cast<u32>(std::stoul(mt[2])), static_cast<u32>(std::stoul(mt[3])),
                        static_cast<u32>(std::stoul(mt[4])), std::stoll(mt[5])};
    }
};

struct CacheEntry {
    CacheKey key;
    std::filesystem::path path;
    std::uintmax_t bytes = 0;
};

class SeriesCache {
public:
    explicit SeriesCache(std::filesystem::path dir) : dir_(std::move(dir)) { std::filesystem::create_directories(dir_); }

    // Explicit directory wins, then the environment, then ./.ptower-cache.
    static std::filesystem::path resolve_dir(const std::string& explicit_dir = {}) {
        if (!explicit_dir.empty()) return explicit_dir;
        if (const char* env = std::getenv(kCacheEnv); env && *env) return env;
        return ".ptower-cache";
    }

    const std::filesystem::path& dir() const { return dir_; }

    void store(const CacheKey& key, const ResidueSeries& s) const {
        const auto bytes = encode_record(s);
        std::random_device rd;
        const auto tmp = dir_ / (".tmp-" + key.filename() + "-" + std::to_string(rd()));
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
            if (!out) fail(Errc::CorruptCache, "write failed: " + tmp.string());
        }
        std::filesystem::rename(tmp, dir_ / key.filename());
    }

    static ResidueSeries read(const std::filesystem::path& p) {
        std::ifstream in(p, std::ios::binary);
        if (!in) fail(Errc::CorruptCache, "cannot open " + p.string());
        std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        return decode_record(bytes);
    }

    std::vector<CacheEntry> list() const {
        std::vector<CacheEntry> out;
        for (const auto& de : std::filesystem::directory_iterator(dir_)) {
            if (!de.is_regular_file()) continue;
            if (auto k = CacheKey::parse(de.path().filename().string()))
                out.push_back({*k, de.path(), de.file_size()});
        }
        std::sort(out.begin(), out.end(), [](const CacheEntry& a, const CacheEntry& b) {
            return a.path.filename() < b.path.filename();
        });
        return out;
    }

    // Stored level with at least min_prec24; the smallest such is read. Corrupt files are skipped.
    std::optional<ResidueSeries> lookup(const std::string& kind, const RingSpec& ring, u32 b, i64 min_prec24) const {
        std::optional<CacheEntry> best;
        for (const auto& e : list()) {
            const auto& k = e.key;
            if (k.kind != kind || k.ell != ring.ell || k.m != ring.m || k.b != b || k.prec24 < min_prec24) continue;
            if (!best || k.prec24 < best->key.prec24) best = e;
        }
        if (!best) return std::nullopt;
        try {
            return read(best->path);
        } catch (const Error&) {
            return std::nullopt;
        }
    }

    struct GcStats {
        std::size_t removed_corrupt = 0, removed_superseded = 0, removed_temp = 0, kept = 0;
    };

    // Drops temp files, corrupt records, and levels superseded by a higher-precision copy.
    GcStats gc() const {
        GcStats st;
        for (const auto& de : std::filesystem::directory_iterator(dir_))
            if (de.is_regular_file() && de.path().filename().string().rfind(".tmp-", 0) == 0) {
                std::filesystem::remove(de.path());
                ++st.removed_temp;
            }
        std::map<std::tuple<std::string, u32, u32, u32>, CacheEntry> best;
        for (const auto& e : list()) {
            try {
                read(e.path);
            } catch (const Error&) {
                std::filesystem::remove(e.path);
                ++st.removed_corrupt;
                continue;
            }
            const auto key = std::make_tuple(e.key.kind, e.key.ell, e.key.m, e.key.b);
            auto it = best.find(key);
            if (it == best.end()) {
                best.emplace(key, e);
            } else if (it->second.key.prec24 < e.key.prec24) {
                std::filesystem::remove(it->second.path);
                ++st.removed_superseded;
                it->second = e;
            } else {
                std::filesystem::remove(e.path);
                ++st.removed_superseded;
            }
        }
        st.kept = best.size();
        return st;
    }

    // Hooks that let build_tower resume from and persist to this cache.
    TowerOptions tower_options(const TowerKind& kind, const RingSpec& ring) const {
        TowerOptions o;
        const std::string name = kind.name();
        o.lookup = [this, name, ring](u32 b, i64 prec) { return lookup(name, ring, b, prec); };
        o.store = [this, name, ring](u32 b, const ResidueSeries& s) {
            store(CacheKey{name, ring.ell, ring.m, b, s.prec24()}, s);
        };
        return o;
    }

private:
    std::filesystem::path dir_;
};

} // namespace ptower

#pragma once

#include <array>
#include <cstring>
#include <string>
#include <vector>

#include <json.hpp>

#include "ptower/series/series.hpp"

namespace ptower {

inline constexpr u32 kRecordVersion = 1;
inline constexpr std::array<char, 4> kRecordMagic{'P', 'T', 'S', 'R'};

inline u64 fnv1a64(const unsigned char* p, std::size_t n) {
    u64 h = 0xcbf29ce484222325ull;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ull;
    }
    return h;
}

namespace detail {

inline void put_le(std::vector<unsigned char>& out, u64 v, int bytes) {
    for (int i = 0; i < bytes; ++i) out.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

inline u64 get_le(const std::vector<unsigned char>& in, std::size_t& pos, int bytes) {
    if (pos + bytes > in.size()) fail(Errc::CorruptCache, "record truncated");
    u64 v = 0;
    for (int i = 0; i < bytes; ++i) v |= u64(in[pos + i]) << (8 * i);
    pos += bytes;
    return v;
}

} // namespace detail

// Layout: magic, version u32, ell u32, m u32, offset24 i64, step24 i64, prec24 i64,
// count u64, count x u32 residues, FNV-1a-64 of everything before it. All little-endian.
inline std::vector<unsigned char> encode_record(const ResidueSeries& s) {
    std::vector<unsigned char> out(kRecordMagic.begin(), kRecordMagic.end());
    detail::put_le(out, kRecordVersion, 4);
    detail::put_le(out, s.ring().ell, 4);
    detail::put_le(out, s.ring().m, 4);
    detail::put_le(out, static_cast<u64>(s.offset24()), 8);
    detail::put_le(out, static_cast<u64>(s.step24()), 8);
    detail::put_le(out, static_cast<u64>(s.prec24()), 8);
    detail::put_le(out, s.size(), 8);
    for (u64 c : s.coeffs()) detail::put_le(out, c, 4);
    detail::put_le(out, fnv1a64(out.data(), out.size()), 8);
    return out;
}

inline ResidueSeries decode_record(const std::vector<unsigned char>& in) {
    if (in.size() < 4 + 4 + 4 + 4 + 8 * 4 + 8 || std::memcmp(in.data(), kRecordMagic.data(), 4) != 0)
        fail(Errc::CorruptCache, "bad magic or short record");
    std::size_t pos = 4;
    const u32 version = static_cast<u32>(detail::get_le(in, pos, 4));
    if (version != kRecordVersion)
        fail(Errc::CorruptCache, "record format version " + std::to_string(version) + " is not supported (expected " +
                                     std::to_string(kRecordVersion) + ")");
    const u32 ell = static_cast<u32>(detail::get_le(in, pos, 4));
    const u32 m = static_cast<u32>(detail::get_le(in, pos, 4));
    const i64 off = static_cast<i64>(detail::get_le(in, pos, 8));
    const i64 step = static_cast<i64>(detail::get_le(in, pos, 8));
    const i64 prec = static_cast<i64>(detail::get_le(in, pos, 8));
    const u64 count = detail::get_le(in, pos, 8);
    if (count > (in.size() - pos) / 4) fail(Errc::CorruptCache, "record truncated");
    std::vector<u64> c(count);
    for (auto& x : c) x = detail::get_le(in, pos, 4);
    const std::size_t body = pos;
    const u64 h = detail::get_le(in, pos, 8);
    if (pos != in.size()) fail(Errc::CorruptCache, "trailing bytes after record");
    if (h != fnv1a64(in.data(), body)) fail(Errc::CorruptCache, "integrity hash mismatch");
    if (step <= 0) fail(Errc::CorruptCache, "nonpositive step");
    RingSpec ring;
    try {
        ring = RingSpec(ell, m);
    } catch (const Error& e) {
        fail(Errc::CorruptCache, std::string("bad ring in record: ") + e.what());
    }
    for (u64 x : c)
        if (x >= ring.modulus) fail(Errc::CorruptCache, "unreduced residue in record");
    ResidueSeries s(ring, off, step, prec, c);
    if (s.size() != count) fail(Errc::CorruptCache, "slot count inconsistent with precision");
    return s;
}

inline nlohmann::json series_to_json(const ResidueSeries& s) {
    nlohmann::json j;
    j["format_version"] = kRecordVersion;
    j["ell"] = s.ring().ell;
    j["m"] = s.ring().m;
    j["offset24"] = s.offset24();
    j["step24"] = s.step24();
    j["prec24"] = s.prec24();
    j["coeffs"] = std::vector<u64>(s.coeffs().begin(), s.coeffs().end());
    return j;
}

inline ResidueSeries series_from_json(const nlohmann::json& j) {
    try {
        if (j.at("format_version").get<u32>() != kRecordVersion) fail(Errc::CorruptCache, "unsupported version");
        RingSpec ring(j.at("ell").get<u32>(), j.at("m").get<u32>());
        return ResidueSeries(ring, j.at("offset24").get<i64>(), j.at("step24").get<i64>(), j.at("prec24").get<i64>(),
                             j.at("coeffs").get<std::vector<u64>>());
    } catch (const nlohmann::json::exception& e) {
        fail(Errc::CorruptCache, e.what());
    }
}

} // namespace ptower

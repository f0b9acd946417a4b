#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ptower {

enum class Errc {
    NotAUnit,
    RingMismatch,
    LeadingNotUnit,
    InsufficientPrecision,
    FractionalSupport,
    OddWeight,
    NoCandidateWeight,
    PrimeTooSmall,
    NotStabilized,
    NonTermination,
    CorruptCache,
    InvariantViolation,
    InvalidArgument,
};

constexpr std::string_view errc_name(Errc c) {
    switch (c) {
    case Errc::NotAUnit: return "NotAUnit";
    case Errc::RingMismatch: return "RingMismatch";
    case Errc::LeadingNotUnit: return "LeadingNotUnit";
    case Errc::InsufficientPrecision: return "InsufficientPrecision";
    case Errc::FractionalSupport: return "FractionalSupport";
    case Errc::OddWeight: return "OddWeight";
    case Errc::NoCandidateWeight: return "NoCandidateWeight";
    case Errc::PrimeTooSmall: return "PrimeTooSmall";
    case Errc::NotStabilized: return "NotStabilized";
    case Errc::NonTermination: return "NonTermination";
    case Errc::CorruptCache: return "CorruptCache";
    case Errc::InvariantViolation: return "InvariantViolation";
    case Errc::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, Errc code, const std::string& what) {
    if (!ok) fail(code, what);
}

} // namespace ptower

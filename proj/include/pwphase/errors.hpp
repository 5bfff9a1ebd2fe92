#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pwphase {

/// Error vocabulary shared by all modules. The CLI prints name(kind) so that
/// scripted callers can match on the variant.
enum class ErrorKind {
    InvalidArgument,
    BadEpsilon,
    IndexTooLarge,
    BadProbe,
    VanishingAmbiguity,
    NotRealConsistent,
    TooManySegments,
    NoisyMagnitudes,
    WindowNotReal,
    SpectrumFloorExceeded,
    NoAnchor,
    UnstableChain,
    CUpsampleBound,
    StripNotFound,
    Io,
    Config,
};

constexpr std::string_view name(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::BadEpsilon: return "BadEpsilon";
    case ErrorKind::IndexTooLarge: return "IndexTooLarge";
    case ErrorKind::BadProbe: return "BadProbe";
    case ErrorKind::VanishingAmbiguity: return "VanishingAmbiguity";
    case ErrorKind::NotRealConsistent: return "NotRealConsistent";
    case ErrorKind::TooManySegments: return "TooManySegments";
    case ErrorKind::NoisyMagnitudes: return "NoisyMagnitudes";
    case ErrorKind::WindowNotReal: return "WindowNotReal";
    case ErrorKind::SpectrumFloorExceeded: return "SpectrumFloorExceeded";
    case ErrorKind::NoAnchor: return "NoAnchor";
    case ErrorKind::UnstableChain: return "UnstableChain";
    case ErrorKind::CUpsampleBound: return "CUpsampleBound";
    case ErrorKind::StripNotFound: return "StripNotFound";
    case ErrorKind::Io: return "Io";
    case ErrorKind::Config: return "Config";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(name(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace pwphase

#ifndef DOSAMC_ERROR_HPP
#define DOSAMC_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace dosamc {

enum class ErrorCode {
    NotStochastic,
    BadAbsorbingRow,
    NoAbsorptionPath,
    SingularSystem,
    NotTransient,
    OutOfRange,
    TooFewNodes,
    ForbiddenTransition,
    ConfigInvalid,
    Uncalibratable,
    DegenerateBaseline,
    WindowTooShort,
    Io,
};

constexpr std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::NotStochastic: return "NotStochastic";
    case ErrorCode::BadAbsorbingRow: return "BadAbsorbingRow";
    case ErrorCode::NoAbsorptionPath: return "NoAbsorptionPath";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::NotTransient: return "NotTransient";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::TooFewNodes: return "TooFewNodes";
    case ErrorCode::ForbiddenTransition: return "ForbiddenTransition";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::Uncalibratable: return "Uncalibratable";
    case ErrorCode::DegenerateBaseline: return "DegenerateBaseline";
    case ErrorCode::WindowTooShort: return "WindowTooShort";
    case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
/// what() is "<Code>: <message>" so the CLI can print it verbatim.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message)
        , code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace dosamc

#endif // DOSAMC_ERROR_HPP

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tsr {

enum class ErrorKind {
    NonPositivePrice,
    TooShort,
    WindowTooLarge,
    WindowTooSmall,
    OrderTooLarge,
    RankDeficient,
    InvalidDf,
    InvalidArgument,
    SingularJacobian,
    NonFiniteResidual,
    BreakOutOfRange,
    SeriesTooShort,
    NoFeasibleThreshold,
    ExplosivePath,
    DimensionMismatch,
    NonFiniteLoss,
    ZeroRss,
    AllZeroActuals,
    ParseError,
    EmptyFile,
    IoError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure in the library is reported as an Error carrying a kind tag,
/// so callers (and the CLI) can branch on the category without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), message_(message) {}

    ErrorKind kind() const noexcept { return kind_; }
    /// The message without the kind prefix.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorKind kind_;
    std::string message_;
};

}  // namespace tsr

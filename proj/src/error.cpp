#include "tsr/error.hpp"

namespace tsr {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::NonPositivePrice: return "NonPositivePrice";
        case ErrorKind::TooShort: return "TooShort";
        case ErrorKind::WindowTooLarge: return "WindowTooLarge";
        case ErrorKind::WindowTooSmall: return "WindowTooSmall";
        case ErrorKind::OrderTooLarge: return "OrderTooLarge";
        case ErrorKind::RankDeficient: return "RankDeficient";
        case ErrorKind::InvalidDf: return "InvalidDf";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::SingularJacobian: return "SingularJacobian";
        case ErrorKind::NonFiniteResidual: return "NonFiniteResidual";
        case ErrorKind::BreakOutOfRange: return "BreakOutOfRange";
        case ErrorKind::SeriesTooShort: return "SeriesTooShort";
        case ErrorKind::NoFeasibleThreshold: return "NoFeasibleThreshold";
        case ErrorKind::ExplosivePath: return "ExplosivePath";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::NonFiniteLoss: return "NonFiniteLoss";
        case ErrorKind::ZeroRss: return "ZeroRss";
        case ErrorKind::AllZeroActuals: return "AllZeroActuals";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::EmptyFile: return "EmptyFile";
        case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace tsr

#include "ima/error.hpp"

namespace ima {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidTimes: return "InvalidTimes";
        case ErrorKind::InvalidParameter: return "InvalidParameter";
        case ErrorKind::InvalidGap: return "InvalidGap";
        case ErrorKind::InvalidInput: return "InvalidInput";
        case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
        case ErrorKind::DegenerateData: return "DegenerateData";
        case ErrorKind::NumericalFailure: return "NumericalFailure";
        case ErrorKind::InsufficientData: return "InsufficientData";
        case ErrorKind::SeUnavailable: return "SeUnavailable";
        case ErrorKind::BootstrapUnstable: return "BootstrapUnstable";
        case ErrorKind::McUnstable: return "McUnstable";
        case ErrorKind::ConfigError: return "ConfigError";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace ima

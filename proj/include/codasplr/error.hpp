#pragma once

#include <stdexcept>
#include <string>

namespace codasplr {

enum class ErrorKind {
    NonPositiveEntry,
    DuplicatePartName,
    TooFewParts,
    InvalidSbp,
    DimensionMismatch,
    DegenerateSample,
    EmptySubset,
    NotCentered,
    NonPositiveAlphaMax,
    UnsupportedDimension,
    EmptyTruth,
    LengthMismatch,
    BadConfig,
    UnsupportedKind,
    ParseError,
    IoError,
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NonPositiveEntry:    return "NonPositiveEntry";
        case ErrorKind::DuplicatePartName:   return "DuplicatePartName";
        case ErrorKind::TooFewParts:         return "TooFewParts";
        case ErrorKind::InvalidSbp:          return "InvalidSbp";
        case ErrorKind::DimensionMismatch:   return "DimensionMismatch";
        case ErrorKind::DegenerateSample:    return "DegenerateSample";
        case ErrorKind::EmptySubset:         return "EmptySubset";
        case ErrorKind::NotCentered:         return "NotCentered";
        case ErrorKind::NonPositiveAlphaMax: return "NonPositiveAlphaMax";
        case ErrorKind::UnsupportedDimension: return "UnsupportedDimension";
        case ErrorKind::EmptyTruth:          return "EmptyTruth";
        case ErrorKind::LengthMismatch:      return "LengthMismatch";
        case ErrorKind::BadConfig:           return "BadConfig";
        case ErrorKind::UnsupportedKind:     return "UnsupportedKind";
        case ErrorKind::ParseError:          return "ParseError";
        case ErrorKind::IoError:             return "IoError";
    }
    return "UnknownError";
}

// Library-wide exception type. The kind drives the CLI exit-code mapping;
// the message carries human-readable context (row, column, part name, ...).
class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

}  // namespace codasplr

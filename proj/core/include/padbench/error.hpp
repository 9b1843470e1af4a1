#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace padbench {

enum class ErrorKind {
    invalid_metadata,
    invalid_annotation,
    missing_annotation,
    parse_error,
    split_error,
    crop_error,
    extraction_error,
    checksum_error,
    training_error,
    data_error,
    metric_error,
    not_applicable,
    config_error,
    io_error,
};

constexpr std::string_view to_string(ErrorKind k) noexcept {
    switch (k) {
        case ErrorKind::invalid_metadata:   return "invalid-metadata";
        case ErrorKind::invalid_annotation: return "invalid-annotation";
        case ErrorKind::missing_annotation: return "missing-annotation";
        case ErrorKind::parse_error:        return "parse-error";
        case ErrorKind::split_error:        return "split-error";
        case ErrorKind::crop_error:         return "crop-error";
        case ErrorKind::extraction_error:   return "extraction-error";
        case ErrorKind::checksum_error:     return "checksum-error";
        case ErrorKind::training_error:     return "training-error";
        case ErrorKind::data_error:         return "data-error";
        case ErrorKind::metric_error:       return "metric-error";
        case ErrorKind::not_applicable:     return "not-applicable";
        case ErrorKind::config_error:       return "config-error";
        case ErrorKind::io_error:           return "io-error";
    }
    return "unknown";
}

// Single exception type carrying a machine-checkable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace padbench

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ainf {

enum class ErrorKind {
    invalid_parameter,
    dimension_mismatch,
    truncation_too_short,
    not_a_cycle,
    not_a_boundary,
    not_periodic,
    psi_not_cycle,
    certificate_missing,
    commutation_failure,
    unresolvable_value,
    parse_error,
};

constexpr std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::invalid_parameter: return "InvalidParameter";
    case ErrorKind::dimension_mismatch: return "DimensionMismatch";
    case ErrorKind::truncation_too_short: return "TruncationTooShort";
    case ErrorKind::not_a_cycle: return "NotACycle";
    case ErrorKind::not_a_boundary: return "NotABoundary";
    case ErrorKind::not_periodic: return "NotPeriodic";
    case ErrorKind::psi_not_cycle: return "PsiNotCycle";
    case ErrorKind::certificate_missing: return "CertificateMissing";
    case ErrorKind::commutation_failure: return "CommutationFailure";
    case ErrorKind::unresolvable_value: return "UnresolvableValue";
    case ErrorKind::parse_error: return "ParseError";
    }
    return "Unknown";
}

/// Every failure raised by the engine carries a kind so callers (and the CLI
/// exit-status contract) can dispatch on it without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), message_(what)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }
    /// The message without the kind prefix.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorKind kind_;
    std::string message_;
};

} // namespace ainf

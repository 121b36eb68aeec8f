#pragma once

#include <stdexcept>
#include <string>

namespace bergman {

/// Argument outside the open unit disc, or another violated domain precondition.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A caller-side precondition that is not about the disc (sizes, ranges, shapes).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical routine could not deliver a trustworthy result.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Scenario/config validation failure. `field` names the offending key path.
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string field, const std::string& message)
        : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

}  // namespace bergman

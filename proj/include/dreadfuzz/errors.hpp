#pragma once

#include <stdexcept>
#include <string>

namespace dreadfuzz {

// Error categories map onto the CLI exit-code contract:
// Io -> exit 2, everything else -> exit 1.
enum class ErrorKind {
    Validation,    // a value or structure violates an invariant
    Range,         // a crisp input lies outside a variable's universe
    Reference,     // a name does not resolve (variable, term, threat id)
    NoActivation,  // aggregated output set is identically zero
    Parse,         // malformed input document
    Io,            // file system / stream failure
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace dreadfuzz

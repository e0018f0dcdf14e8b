#pragma once

#include <stdexcept>
#include <string>

namespace hexroute {

enum class ErrorKind {
    kInvalidInput,  // malformed files, invalid requests, constraint violations
    kInfeasible,    // no path / no tour exists
    kCapacity,      // grid or enumeration budget exceeded
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline Error invalid_input(const std::string& what) { return {ErrorKind::kInvalidInput, what}; }
inline Error infeasible(const std::string& what) { return {ErrorKind::kInfeasible, what}; }
inline Error capacity_exceeded(const std::string& what) { return {ErrorKind::kCapacity, what}; }

/// Process exit code for an error kind: 2 input, 3 infeasible, 4 capacity.
inline int exit_code(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::kInvalidInput: return 2;
    case ErrorKind::kInfeasible: return 3;
    case ErrorKind::kCapacity: return 4;
    }
    return 1;
}

}  // namespace hexroute

#pragma once

#include <stdexcept>
#include <string>

namespace modone {

// Failure taxonomy shared by the whole toolkit.  The CLI maps kinds to
// process exit codes, so every throw site picks the kind deliberately.
enum class ErrorKind {
    invalid_argument,        // bad user input, malformed spec string, range error
    insufficient_precision,  // certified enclosure cannot reach the tolerance
    budget_exceeded,         // enumeration space above the configured ceiling
    not_lacunary,            // sequence fails the strict growth requirement
    construction_failed,     // a search window produced no certified witness
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct InvalidArgumentError : Error {
    explicit InvalidArgumentError(const std::string& what)
        : Error(ErrorKind::invalid_argument, what) {}
};

struct InsufficientPrecisionError : Error {
    explicit InsufficientPrecisionError(const std::string& what)
        : Error(ErrorKind::insufficient_precision, what) {}
};

struct BudgetExceededError : Error {
    explicit BudgetExceededError(const std::string& what)
        : Error(ErrorKind::budget_exceeded, what) {}
};

struct NotLacunaryError : Error {
    explicit NotLacunaryError(const std::string& what)
        : Error(ErrorKind::not_lacunary, what) {}
};

// Carries the index of the window that failed so callers can report it.
struct ConstructionFailedError : Error {
    ConstructionFailedError(long index, const std::string& what)
        : Error(ErrorKind::construction_failed, what), index(index) {}

    long index;
};

}  // namespace modone

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pikn {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A computation needs more memory than the configured budget allows.
class BudgetError : public Error {
public:
    BudgetError(const std::string& what, std::uint64_t needed, std::uint64_t budget)
        : Error(what + " (needs " + std::to_string(needed) + " bytes, budget " +
                std::to_string(budget) + ")"),
          needed_(needed), budget_(budget) {}
    std::uint64_t needed() const noexcept { return needed_; }
    std::uint64_t budget() const noexcept { return budget_; }

private:
    std::uint64_t needed_;
    std::uint64_t budget_;
};

/// A result would not fit in 64 bits.
class OverflowError : public Error {
public:
    using Error::Error;
};

/// Checkpoint file is unreadable, malformed or from another schema.
class CheckpointError : public Error {
public:
    using Error::Error;
};

/// A growing search reached its cap before producing enough results.
/// This is a resource diagnostic, never a refutation.
class SearchCapError : public Error {
public:
    using Error::Error;
};

}  // namespace pikn

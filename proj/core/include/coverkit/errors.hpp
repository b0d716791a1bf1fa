#ifndef COVERKIT_ERRORS_HPP
#define COVERKIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace coverkit {

/// Raised on malformed fixture documents (syntax or semantic).
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a search exceeds its cooperative step budget.
struct StepBudgetExceeded : std::runtime_error {
    explicit StepBudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when an oracle's per-level run set exceeds the configured cap.
struct RunCapExceeded : std::runtime_error {
    explicit RunCapExceeded(const std::string& what) : std::runtime_error(what) {}
};

} // namespace coverkit

#endif

#pragma once

#include <stdexcept>
#include <string>

namespace lagflow {

// Bad arguments, malformed files, violated preconditions. The CLI maps this
// to exit code 1.
struct usage_error : std::runtime_error {
    explicit usage_error(const std::string& what) : std::runtime_error(what) {}
};

// A computation failed numerically (NaN/overflow in a field, iteration that
// did not converge). The CLI maps this to exit code 2.
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

// The run finished but a requested tolerance was not met (e.g. an expander
// residual still above residual_tol at the horizon). The CLI maps this to
// exit code 3.
struct tolerance_error : std::runtime_error {
    explicit tolerance_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace lagflow

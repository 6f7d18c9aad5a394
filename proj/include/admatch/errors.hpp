#pragma once

#include <stdexcept>
#include <string>

namespace admatch {

/// Input or schema problem: malformed rows, gaps, impossible configs.
/// The CLI maps this to exit code 2.
class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure: rank deficiency, non-finite values, fit breakdown.
/// The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
  public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace admatch

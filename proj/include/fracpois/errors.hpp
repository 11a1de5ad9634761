#pragma once

#include <stdexcept>
#include <string>

namespace fracpois {

/// Argument outside an operation's mathematical domain.
class DomainError : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

/// A series could not be summed to the requested tolerance.
class ConvergenceError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// ADM coefficients left the representable range.
class TruncationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class QuadratureError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Requested process variant has no implementation for this operation.
class UnsupportedVariantError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace fracpois

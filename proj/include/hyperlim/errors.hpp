#pragma once

#include <stdexcept>
#include <string>

namespace hyperlim {

/// Malformed input: bad labels, dimension mismatch, out-of-range parameters.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation does not hold (for example a
/// subset that should be δ-closed is not).
class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configured work limit was exhausted before the operation finished.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace hyperlim

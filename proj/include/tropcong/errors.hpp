#pragma once

#include <stdexcept>
#include <string>

namespace tropcong {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input (CLI exit code 2).
struct ParseError : Error {
    using Error::Error;
};

/// Input parsed but violates an operation's precondition (CLI exit code 3).
struct PreconditionError : Error {
    using Error::Error;
};

/// A cross-check inside the library disagreed with itself.
struct InternalError : Error {
    using Error::Error;
};

}  // namespace tropcong

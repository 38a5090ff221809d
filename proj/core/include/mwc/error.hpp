#pragma once

#include <stdexcept>
#include <string>

namespace mwc {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad graph, wrong dimensions, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A construction request cannot be met, e.g. an ear longer than the state
/// dimension when every kernel must be nonzero.
class Infeasible : public Error {
public:
    using Error::Error;
};

/// Exhaustive enumeration was refused because the input exceeds the cap.
class EnumerationInfeasible : public Error {
public:
    using Error::Error;
};

/// Malformed input file or document.
class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace mwc

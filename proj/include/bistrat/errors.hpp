#pragma once

#include <stdexcept>
#include <string>

namespace bistrat {

// Base for every recoverable failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class LinalgError : public Error {
public:
    using Error::Error;
};

class ComplexError : public Error {
public:
    using Error::Error;
};

class BisheafError : public Error {
public:
    using Error::Error;
};

class StratificationError : public Error {
public:
    using Error::Error;
};

class TransportError : public Error {
public:
    using Error::Error;
};

class OracleError : public Error {
public:
    using Error::Error;
};

// Raised when an internal invariant of the stratification sweep breaks.
// Never a user error: it signals a bug in the engine.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace bistrat

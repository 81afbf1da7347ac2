#pragma once

#include <stdexcept>
#include <string>

namespace forkrep {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input document or value (bad JSON shape, bad rational, unknown label).
class ParseError : public Error {
public:
    using Error::Error;
};

/// A value violates the invariants of the type it was meant to build.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class NotRegularForkness : public Error {
public:
    using Error::Error;
};

class ConditioningOnNull : public Error {
public:
    using Error::Error;
};

class TrivialEvent : public Error {
public:
    using Error::Error;
};

class TrivialConditioner : public Error {
public:
    using Error::Error;
};

class NotAQuotient : public Error {
public:
    using Error::Error;
};

class InconsistentParameters : public Error {
public:
    using Error::Error;
};

class MismatchedQuotient : public Error {
public:
    using Error::Error;
};

/// Ground set larger than the configured cap for power-set constructions.
class SizeGuardExceeded : public Error {
public:
    using Error::Error;
};

/// A post-condition the library checks on its own output failed.
class InternalError : public Error {
public:
    using Error::Error;
};

} // namespace forkrep

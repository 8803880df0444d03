#pragma once

#include <stdexcept>
#include <string>

namespace dynres {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid input: malformed diagram token, vertex out of range, ring
/// mismatch, non-skew Pfaffian input, unknown catalog id, ...
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& what) : Error(what) {}
};

/// A representation build would exceed the configured dimension cap.
class DimensionCapError : public Error {
public:
    DimensionCapError(const std::string& what, long needed, long cap)
        : Error(what), needed(needed), cap(cap) {}
    long needed;
    long cap;
};

/// A rational could not be reduced mod p (denominator divisible by p);
/// callers retry with a different prime.
class BadReductionError : public Error {
public:
    explicit BadReductionError(const std::string& what) : Error(what) {}
};

/// A weight line expected to be 1-dimensional has higher multiplicity.
class MultiplicityError : public Error {
public:
    explicit MultiplicityError(const std::string& what) : Error(what) {}
};

/// The top of a coset orbit graph branches before the requested number of
/// witness words could be collected.
class BranchError : public Error {
public:
    explicit BranchError(const std::string& what) : Error(what) {}
};

}  // namespace dynres

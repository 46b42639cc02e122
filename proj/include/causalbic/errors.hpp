#pragma once

#include <stdexcept>
#include <string>

namespace causalbic {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid argument or configuration value (bad degree, non-conservative family, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent input data.
class InputError : public Error {
public:
    using Error::Error;
};

/// A vertex whose parameters cannot be estimated from the data at hand.
class DegenerateFitError : public Error {
public:
    DegenerateFitError(int vertex, const std::string& what)
        : Error(what), vertex_(vertex) {}

    /// 0-based index of the offending vertex.
    int vertex() const noexcept { return vertex_; }

private:
    int vertex_;
};

/// A size guard was exceeded (enumeration, DP, vertex count).
class CapacityError : public Error {
public:
    using Error::Error;
};

}  // namespace causalbic

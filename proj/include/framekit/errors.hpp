#pragma once

#include <stdexcept>
#include <string>

namespace framekit {

// Base for every failure raised by the library. The CLI maps hypothesis
// failures to exit 1 and input problems to exit 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NotInvertible : public Error {
public:
    using Error::Error;
};

class NotAFrame : public Error {
public:
    using Error::Error;
};

class NotADual : public Error {
public:
    using Error::Error;
};

class HypothesisViolated : public Error {
public:
    using Error::Error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

class DependentInput : public Error {
public:
    using Error::Error;
};

// An iterative method stopped before meeting its tolerance.
class NotConverged : public Error {
public:
    using Error::Error;
};

class ShapeMismatch : public Error {
public:
    using Error::Error;
};

}  // namespace framekit

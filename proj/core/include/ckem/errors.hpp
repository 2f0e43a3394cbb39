#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ckem {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input (bad JSON, unparsable number, wrong vertex order).
class InputError : public Error {
public:
    using Error::Error;
};

// Parameter outside the admissible domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// f is not strictly positive on the polytope.
class PositivityError : public DomainError {
public:
    PositivityError(std::size_t vertex, double x, double y, double value);

    std::size_t vertex() const noexcept { return vertex_; }
    double x() const noexcept { return x_; }
    double y() const noexcept { return y_; }
    double value() const noexcept { return value_; }

private:
    std::size_t vertex_;
    double x_, y_, value_;
};

// A caller-side precondition that is not a domain question, e.g. a point off its slice.
class ContractError : public Error {
public:
    using Error::Error;
};

class ConvergenceError : public Error {
public:
    using Error::Error;
};

}  // namespace ckem

#pragma once

#include <sstream>
#include <stdexcept>
#include <string>

namespace qprop {

// Base of every library failure. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class RangeError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

class ParityError : public Error {
public:
    using Error::Error;
};

class DegenerateError : public Error {
public:
    using Error::Error;
};

class SingularError : public Error {
public:
    using Error::Error;
};

class TruncationError : public Error {
public:
    using Error::Error;
};

class GridMismatch : public Error {
public:
    using Error::Error;
};

class StiffnessError : public Error {
public:
    using Error::Error;
};

// mu vanishes somewhere in [lo, hi]
class CausticError : public Error {
public:
    CausticError(double lo, double hi, const std::string& what)
        : Error(describe(lo, hi, what)), lo_(lo), hi_(hi) {}

    double lo() const { return lo_; }
    double hi() const { return hi_; }

private:
    static std::string describe(double lo, double hi, const std::string& what) {
        std::ostringstream os;
        os.precision(17);
        os << what << ": mu vanishes in [" << lo << ", " << hi << "]";
        return os.str();
    }

    double lo_;
    double hi_;
};

}  // namespace qprop

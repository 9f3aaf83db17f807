// errors.hpp — Exception types thrown across the library.

#pragma once

#include <stdexcept>
#include <string>

namespace posmap {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Input-shaped failures (CLI exit code 2).
struct ParseError : Error {
    using Error::Error;
};
struct DimensionMismatch : Error {
    using Error::Error;
};

// Domain failures (CLI exit code 3).
struct BadParameter : Error {
    using Error::Error;
};
struct NotHermitianPreserving : Error {
    using Error::Error;
};
struct NotCompletelyPositive : Error {
    using Error::Error;
};
struct NotTracePreserving : Error {
    using Error::Error;
};
struct NotColumnStochastic : Error {
    using Error::Error;
};
struct NotInSimplex : Error {
    using Error::Error;
};
struct NegativeRate : Error {
    using Error::Error;
};
struct NotPure : Error {
    using Error::Error;
};
struct KindMismatch : Error {
    using Error::Error;
};
struct InvalidStepMap : Error {
    using Error::Error;
};

// Resource guard (CLI exit code 4).
struct ResourceLimit : Error {
    using Error::Error;
};

}  // namespace posmap

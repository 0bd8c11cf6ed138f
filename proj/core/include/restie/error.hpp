#ifndef RESTIE_ERROR_HPP
#define RESTIE_ERROR_HPP

#include <stdexcept>
#include <string>

namespace restie {

// Error taxonomy mirrors the CLI exit codes: usage = 1, data = 2, numeric = 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad invocation: missing/contradictory arguments, count mismatches.
class UsageError : public Error {
public:
    using Error::Error;
};

// Bad input data: parse failures, invalid geometry, broken invariants.
class DataError : public Error {
public:
    using Error::Error;
};

// Numerical failure: degenerate statistics, non-convergence.
class NumericError : public Error {
public:
    using Error::Error;
};

} // namespace restie

#endif

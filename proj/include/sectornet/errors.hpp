#ifndef SECTORNET_ERRORS_HPP_
#define SECTORNET_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace sectornet {

/// Bad input data: malformed CSV, invariant violations, degenerate panels.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: non-convergence, undefined formula (Q <= 1, zero variance).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid parameters or configuration supplied by the caller.
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace sectornet

#endif // SECTORNET_ERRORS_HPP_

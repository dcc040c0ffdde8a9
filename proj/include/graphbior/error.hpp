#pragma once

#include <stdexcept>
#include <string>

namespace graphbior {

// Bad input: malformed files, infeasible parameters, broken preconditions.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A numerical guarantee did not hold (conditioning, PR residual, sampling count).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace graphbior

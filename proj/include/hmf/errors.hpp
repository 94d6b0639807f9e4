#pragma once

#include <stdexcept>
#include <string>

namespace hmf {

// Bad inputs: configuration, preconditions, out-of-range arguments.
struct validation_error : std::invalid_argument {
    explicit validation_error(const std::string &msg) : std::invalid_argument(msg) {}
};

// Numerical failures: blow-up, non-convergence, unstable discretizations.
struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace hmf

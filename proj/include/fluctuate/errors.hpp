#pragma once

#include <stdexcept>
#include <string>

namespace fluctuate {

// Rejected inputs: parameter constraints, domain restrictions. CLI exit 2.
class validation_error : public std::invalid_argument {
public:
    explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

// Evaluation failed numerically: non-convergence, cancellation past budget. CLI exit 3.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace fluctuate

#pragma once

#include <stdexcept>
#include <string>

namespace phasesym {

// Invalid input: bad shapes, out-of-range parameters, malformed configs.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Shape mismatch between operands; a ValidationError naming both shapes.
class DimensionError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Requested work exceeds the configured dense-size budget.
class BudgetError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Integrator, eigensolver or conservation failure during a computation.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace phasesym

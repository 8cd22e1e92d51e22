#pragma once

#include <stdexcept>
#include <string>

namespace modop {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Violated precondition or malformed input (bad grid sizes, bad DSL text, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

// A weight or symbol evaluated to a value the operation cannot accept.
class EvaluationError : public Error {
public:
    using Error::Error;
};

// Input carries no usable information (all samples below the noise floor, zero tensor).
class DegenerateInput : public Error {
public:
    using Error::Error;
};

// Sampled data is not decayed at the grid or spectral boundary, so FFT
// periodization would corrupt the result.
class AliasingError : public Error {
public:
    using Error::Error;
};

// Grid cannot resolve the requested object (e.g. high Hermite index).
class ResolutionError : public Error {
public:
    using Error::Error;
};

// Requested allocation exceeds the configured memory budget.
class BudgetError : public Error {
public:
    using Error::Error;
};

// Bytes allowed for large tensors; MODOP_BUDGET_MB overrides the 2048 MB default.
std::size_t memory_budget_bytes();

// Throws BudgetError when `bytes` exceeds the budget.
void check_budget(std::size_t bytes, const std::string& what);

}  // namespace modop

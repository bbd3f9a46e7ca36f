#pragma once

#include <stdexcept>
#include <string>

namespace l1path {

/// Base for every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Shapes do not agree (non-square input, length mismatch, ...).
class DimensionError : public Error
{
public:
    using Error::Error;
};

/// Invalid argument value (empty index set, out-of-range index, lambda <= 0, ...).
class ArgumentError : public Error
{
public:
    using Error::Error;
};

/// A factorization hit a pivot below its threshold, or a matrix is rank deficient.
class SingularityError : public Error
{
public:
    using Error::Error;
};

/// An all-zero column where unit normalization is required.
class DegenerateColumnError : public Error
{
public:
    using Error::Error;
};

/// A required hypothesis is not met by the input (e.g. rows < cols).
class HypothesisError : public Error
{
public:
    using Error::Error;
};

/// Exponential-cost enumeration refused because the input is too large.
class CostGuardError : public Error
{
public:
    using Error::Error;
};

/// The homotopy exceeded its breakpoint budget.
class CycleGuardError : public Error
{
public:
    using Error::Error;
};

/// Evaluation requested outside the computed range of a path.
class RangeError : public Error
{
public:
    using Error::Error;
};

/// The sign-pattern oracle could not certify a unique minimizer.
class OracleFailure : public Error
{
public:
    using Error::Error;
};

/// Malformed text input.
class ParseError : public Error
{
public:
    using Error::Error;
};

} // namespace l1path

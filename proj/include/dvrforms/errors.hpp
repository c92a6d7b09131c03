#pragma once

#include <stdexcept>
#include <string>

namespace dvrforms {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Operands belong to different ring descriptors.
class DescriptorMismatch : public Error {
public:
    using Error::Error;
};

// Inversion of an element that is not a unit (valuation >= 1 or
// indistinguishable from zero at the working precision).
class NotAUnit : public Error {
public:
    using Error::Error;
};

// divide_by_uniformiser called with k larger than the certified valuation.
class InsufficientValuation : public Error {
public:
    using Error::Error;
};

class NotASquare : public Error {
public:
    using Error::Error;
};

class NotASquareResidue : public Error {
public:
    using Error::Error;
};

class NoResidueSolution : public Error {
public:
    using Error::Error;
};

class NoSolution : public Error {
public:
    using Error::Error;
};

class NotAUnitLength : public Error {
public:
    using Error::Error;
};

class NotAUnitPairing : public Error {
public:
    using Error::Error;
};

class NotEpsilonHermitian : public Error {
public:
    NotEpsilonHermitian(const std::string& what, std::size_t i, std::size_t j)
        : Error(what), row(i), col(j) {}
    std::size_t row, col;
};

class TypeMismatch : public Error {
public:
    using Error::Error;
};

class Degenerate : public Error {
public:
    using Error::Error;
};

class NotCongruent : public Error {
public:
    using Error::Error;
};

class ResidueWitnessInvalid : public Error {
public:
    using Error::Error;
};

class ShapeMismatch : public Error {
public:
    using Error::Error;
};

class WrongInstance : public Error {
public:
    using Error::Error;
};

// Raised when a decision cannot be certified at the working precision.
// `required` is a lower bound on the precision that would suffice, or 0
// when no finite bound is known.
class PrecisionExhausted : public Error {
public:
    explicit PrecisionExhausted(const std::string& what, int required_precision = 0)
        : Error(what), required(required_precision) {}
    int required;
};

// Input file syntax error, with 1-based position.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line_, int col_)
        : Error(what + " (line " + std::to_string(line_) + ", column " +
                std::to_string(col_) + ")"),
          line(line_), col(col_) {}
    int line, col;
};

} // namespace dvrforms

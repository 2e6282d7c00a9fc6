#pragma once

#include <stdexcept>
#include <string>

namespace maxlenqm {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameter set (tau <= 0, hbar <= 0, bad grid sizes, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// x_of_theta called outside the open chart interval.
class ChartBoundaryError : public Error {
public:
    using Error::Error;
};

/// Evaluation outside the domain of a deformation factor (factor <= 0).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A quadrature node produced a non-finite value.
class NonFiniteError : public Error {
public:
    using Error::Error;
};

/// normalize() called on a state with vanishing norm.
class ZeroNormError : public Error {
public:
    using Error::Error;
};

/// moments() called on a state whose norm is not 1 within tolerance.
class NotNormalizedError : public Error {
public:
    using Error::Error;
};

/// An integral disagrees between a grid and its refinement: the underlying
/// moment diverges and must be reported, not returned as a number.
class DivergentMomentError : public Error {
public:
    explicit DivergentMomentError(const std::string& which, double rel_disagreement)
        : Error("divergent moment: " + which + " (refinement relative disagreement "
                + std::to_string(rel_disagreement) + ")"),
          moment(which),
          disagreement(rel_disagreement) {}

    std::string moment;
    double disagreement;
};

/// Norm derivative requested where it is undefined (|x_i| below the axis guard).
class AxisSingularityError : public Error {
public:
    using Error::Error;
};

/// Component index outside [0, dim).
class IndexError : public Error {
public:
    using Error::Error;
};

/// Unrecognised state specification (CLI).
class UnknownStateError : public Error {
public:
    using Error::Error;
};

/// Output file could not be written (CLI).
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace maxlenqm

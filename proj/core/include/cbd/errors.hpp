#pragma once

#include <stdexcept>
#include <string>

namespace cbd {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file or JSON document (message carries the location).
class ParseError : public Error {
public:
  using Error::Error;
};

/// A system (or auxiliary pmf) violates a structural invariant.
class ValidationError : public Error {
public:
  using Error::Error;
};

/// An expectation triple (v, w, vw) is not realizable by any joint pmf.
class InfeasibleExpectations : public Error {
public:
  using Error::Error;
};

/// The supplied pairing permutation decomposes into more than one cycle.
class NotCircular : public Error {
public:
  using Error::Error;
};

class EmptyInput : public Error {
public:
  using Error::Error;
};

class TooLong : public Error {
public:
  using Error::Error;
};

class OutOfRange : public Error {
public:
  using Error::Error;
};

class TooManyVariables : public Error {
public:
  using Error::Error;
};

/// Connection coupling marginals do not match the system's marginals.
class MarginalMismatch : public Error {
public:
  using Error::Error;
};

class PreconditionFailed : public Error {
public:
  using Error::Error;
};

class DimensionMismatch : public Error {
public:
  using Error::Error;
};

/// Simplex stalled on sub-tolerance pivots; callers may retry with a
/// perturbed right-hand side.
class NumericalBreakdown : public Error {
public:
  using Error::Error;
};

/// Phase-2 objective unbounded below. Cannot happen for coupling programs
/// (their feasible set is contained in the probability simplex).
class UnboundedObjective : public Error {
public:
  using Error::Error;
};

} // namespace cbd

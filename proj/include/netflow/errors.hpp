#ifndef NETFLOW_ERRORS_HPP
#define NETFLOW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace netflow {

// Error taxonomy. Input-class errors (bad arguments, malformed files,
// violated preconditions on graph edits, unsatisfiable scenario constraints)
// are distinct from numeric failures so callers can map them to exit codes.

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad argument values: out-of-range probabilities, k > m, negative t, ...
struct InputError : Error {
  using Error::Error;
};

// Operands whose shapes do not line up (node counts, matrix sizes).
struct DimensionError : InputError {
  using InputError::InputError;
};

// Graph edits that conflict with current state (removing a missing edge,
// adding one that already exists somewhere in a bundle).
struct StateError : InputError {
  using InputError::InputError;
};

// Malformed file contents; carries human-readable coordinates in the message.
struct ParseError : InputError {
  using InputError::InputError;
};

// Well-formed input on which the requested statistic is undefined
// (e.g. zero spread in a distance matrix -> similarity scale collapses).
struct DegenerateInputError : InputError {
  using InputError::InputError;
};

// Filesystem problems: unreadable / unwritable paths.
struct IoError : InputError {
  using InputError::InputError;
};

// Rejection-sampling budget exhausted while building a scenario.
struct ScenarioError : InputError {
  using InputError::InputError;
};

// Eigensolver or series evaluation failed to converge.
struct NumericError : Error {
  using Error::Error;
};

}  // namespace netflow

#endif

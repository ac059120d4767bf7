#pragma once

#include <stdexcept>
#include <string>

namespace tia {

/// Base class for all library errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Block parameters violate an invariant (e.g. a >= h/2, n < 2).
struct InvalidParamsError : Error {
  using Error::Error;
};

/// Mesh resolution incompatible with the block geometry
/// (sine extrema off-grid, odd subdivision counts, ...).
struct InvalidResolutionError : Error {
  using Error::Error;
};

/// Contact pairing found two candidate partners for one face.
struct PairingError : Error {
  using Error::Error;
};

/// A load case referenced faces or tags the assembly does not provide.
struct TaggingError : Error {
  using Error::Error;
};

/// An LP/QP solver failed to converge or hit an internal limit.
struct SolverFailureError : Error {
  using Error::Error;
};

/// An operation was called outside its contract
/// (e.g. contact forces requested for an activated mechanism).
struct ContractViolationError : Error {
  using Error::Error;
};

/// File I/O failure; message carries the path.
struct IoError : Error {
  using Error::Error;
};

}  // namespace tia

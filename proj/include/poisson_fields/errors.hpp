#pragma once

#include <stdexcept>
#include <string>

namespace poisson_fields {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A series or contour integral could not reach the requested tolerance.
class NonConvergence : public Error {
 public:
  using Error::Error;
};

/// Parameters violate a precondition (pole of Γ, rate ≤ 0, bad window, ...).
class InvalidParams : public Error {
 public:
  using Error::Error;
};

/// An enumeration or lattice would exceed its configured size cap.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

/// Fewer than two bins survive the expected-count merge of a chi-square test.
class DegenerateBins : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidParams(what);
}

}  // namespace detail
}  // namespace poisson_fields

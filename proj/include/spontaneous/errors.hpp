#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace spont {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed caller input (dimension mismatch, non-finite entries, bad config).
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A covariance matrix failed its symmetric factorization or is too
/// ill-conditioned to invert. Optionally tagged with the iteration of the
/// fixed-point loop and the center being fitted.
class SingularCovariance : public Error {
 public:
  explicit SingularCovariance(const std::string& what,
                              std::optional<std::size_t> iteration = std::nullopt,
                              std::optional<std::size_t> center = std::nullopt)
      : Error(what), iteration_(iteration), center_(center) {}

  std::optional<std::size_t> iteration() const noexcept { return iteration_; }
  std::optional<std::size_t> center() const noexcept { return center_; }

 private:
  std::optional<std::size_t> iteration_;
  std::optional<std::size_t> center_;
};

class NonSphericalComponent : public Error {
 public:
  using Error::Error;
};

/// The data has zero range in every feature.
class ZeroRange : public Error {
 public:
  using Error::Error;
};

/// A mixture density evaluated to zero (e.g. a component with zero weight).
class ZeroDensity : public Error {
 public:
  using Error::Error;
};

class DegenerateK : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of a function.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A pipeline produced no usable result (e.g. every restart failed).
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace spont

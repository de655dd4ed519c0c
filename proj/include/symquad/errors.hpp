#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace symquad {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Orbit parameters collapse two symmetric images onto each other.
class DegenerateOrbit : public Error {
public:
  using Error::Error;
};

/// A residual evaluation produced NaN or Inf.
class NonFiniteResidual : public Error {
public:
  using Error::Error;
};

class EmptyEnsemble : public Error {
public:
  using Error::Error;
};

/// Refinement made the truncation error worse, so the input rule was not
/// close to a genuine root.
class RefinementDiverged : public Error {
public:
  using Error::Error;
};

/// Malformed rule file. `line()` is 1-based, 0 when the problem is not tied
/// to a particular line.
class RuleFormatError : public Error {
public:
  RuleFormatError(const std::string& what, std::size_t line)
      : Error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

} // namespace symquad

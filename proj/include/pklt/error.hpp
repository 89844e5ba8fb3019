#pragma once

#include <stdexcept>
#include <string>

namespace pklt {

/// Base of every error thrown by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  /// Stable machine-readable tag used in CLI error reports.
  virtual const char* kind() const noexcept { return "error"; }
};

class LatticeMismatch : public Error {
 public:
  LatticeMismatch(const std::string& lhs, const std::string& rhs)
      : Error("lattice mismatch: '" + lhs + "' vs '" + rhs + "'") {}
  const char* kind() const noexcept override { return "lattice_mismatch"; }
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "singular_matrix"; }
};

/// Invalid construction of a surface model (unknown curve, exhausted
/// intersection budget, bad base data, level out of range).
class ModelError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "model_error"; }
};

/// The Zariski iteration failed. The engine cannot tell a divisor that is
/// not pseudoeffective from a catalog that misses a negative curve.
class NotPseudoeffective : public Error {
 public:
  explicit NotPseudoeffective(const std::string& detail)
      : Error("not pseudoeffective against catalog, or catalog incomplete: " + detail) {}
  const char* kind() const noexcept override { return "not_pseudoeffective"; }
};

class PreconditionError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "precondition"; }
};

/// A proven identity failed on computed data. Always a bug.
class InvariantViolation : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "invariant_violation"; }
};

}  // namespace pklt

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mirec {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// --- exact arithmetic core --------------------------------------------------

/// Interpolation received two nodes with the same abscissa.
class DuplicateNode : public Error {
 public:
  using Error::Error;
};

/// Linear system has no unique solution; carries the rank found.
class SingularSystem : public Error {
 public:
  SingularSystem(const std::string& what, std::size_t rank)
      : Error(what + " (rank " + std::to_string(rank) + ")"), rank_(rank) {}
  std::size_t rank() const { return rank_; }

 private:
  std::size_t rank_;
};

/// A Laurent polynomial with negative exponents was evaluated at zero.
class DivisionByZeroPoly : public Error {
 public:
  using Error::Error;
};

// --- base families ----------------------------------------------------------

/// A function was evaluated at a point outside its domain
/// (e.g. a non-integer grid point in the q-family).
class UnsupportedPoint : public Error {
 public:
  using Error::Error;
};

/// A grid-point evaluation hit a vanishing denominator.
class PoleAtGridPoint : public Error {
 public:
  using Error::Error;
};

/// A recurrence coefficient has a vanishing denominator at the given index.
class PoleInCoefficient : public Error {
 public:
  using Error::Error;
};

/// A structural invariant that must hold for in-range parameters failed.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

// --- multi-indexed families -------------------------------------------------

/// Interpolation abscissae collide: parameters are degenerate for this grid.
class DegenerateGrid : public Error {
 public:
  using Error::Error;
};

/// A construction precondition (index set validity, parameter range) failed.
class AssumptionViolated : public Error {
 public:
  using Error::Error;
};

/// The deformed family could not be built (vanishing normalization or a
/// denominator polynomial with a zero on the needed grid).
class SingularDeformation : public Error {
 public:
  using Error::Error;
};

/// A machine check of an identity failed; carries a witness description.
class VerificationFailure : public Error {
 public:
  VerificationFailure(const std::string& what, std::string witness)
      : Error(what + "; witness: " + witness), witness_(std::move(witness)) {}
  const std::string& witness() const { return witness_; }

 private:
  std::string witness_;
};

// --- variable-coefficient recurrence ----------------------------------------

/// The generation step would divide by a vanishing top coefficient.
class CannotAdvance : public Error {
 public:
  using Error::Error;
};

// --- constant-coefficient recurrence ----------------------------------------

/// The primitive map is undefined (a leading connection coefficient is zero).
class MapUndefined : public Error {
 public:
  using Error::Error;
};

/// An expansion asserted by a theorem failed to terminate or balance.
class TheoremViolation : public Error {
 public:
  using Error::Error;
};

/// Coefficient extraction ran out of basis polynomials.
class InsufficientBasis : public Error {
 public:
  using Error::Error;
};

/// A conjectural identity failed at a concrete parameter point.
class ConjectureCounterexample : public Error {
 public:
  using Error::Error;
  ConjectureCounterexample(const std::string& what, std::string witness)
      : Error(what + "; witness: " + witness), witness_(std::move(witness)) {}
  const std::string& witness() const { return witness_; }

 private:
  std::string witness_;
};

// --- closure relations --------------------------------------------------

/// Two spectral shift factors collide, so the ladder denominators vanish.
class DegenerateSpectrum : public Error {
 public:
  using Error::Error;
};

// --- Askey-Wilson correspondence ----------------------------------------

/// The parameter map needs a square root that is not rational.
class IrrationalShift : public Error {
 public:
  using Error::Error;
};

/// The correspondence is not implemented for the requested index type.
class UnsupportedIndexType : public Error {
 public:
  using Error::Error;
};

// --- command line -------------------------------------------------------

/// Bad or inconsistent job configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace mirec

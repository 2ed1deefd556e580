#pragma once

#include <stdexcept>
#include <string>

namespace domlab {

// Bad input or configuration, rejected before any numerics ran.  CLI exit
// code 2.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Catalog lookup with an identifier that names no system.
struct UnknownIdentifier : ValidationError {
  explicit UnknownIdentifier(const std::string& what) : ValidationError(what) {}
};

// A numerical procedure could not meet its contract.  CLI exit code 3.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Power iteration failed to stabilize a bundle within tolerance.
struct NoConvergenceError : NumericalError {
  explicit NoConvergenceError(const std::string& what) : NumericalError(what) {}
};

// A restricted differential collapsed (rank loss along the orbit).
struct SingularRestriction : NumericalError {
  explicit SingularRestriction(const std::string& what) : NumericalError(what) {}
};

// Requested orbit longer than the configured cap.
struct OrbitLengthExceeded : NumericalError {
  explicit OrbitLengthExceeded(const std::string& what) : NumericalError(what) {}
};

// Disk refinement exceeded the vertex cap.
struct MeshBlowup : NumericalError {
  explicit MeshBlowup(const std::string& what) : NumericalError(what) {}
};

}  // namespace domlab

#pragma once

#include <stdexcept>
#include <string>

namespace hypbend {

// Every failure raised by the library carries a stable kind string so the
// CLI can map it to a diagnostic without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

#define HYPBEND_DEFINE_ERROR(Name, kind_str)                         \
  class Name : public Error {                                        \
   public:                                                           \
    explicit Name(const std::string& what) : Error(kind_str, what) {} \
  };

HYPBEND_DEFINE_ERROR(InvalidPointError, "invalid-point")
HYPBEND_DEFINE_ERROR(InvalidPlaneError, "invalid-plane")
HYPBEND_DEFINE_ERROR(InvalidMapError, "invalid-map")
HYPBEND_DEFINE_ERROR(DegenerateGeodesicError, "degenerate-geodesic")
HYPBEND_DEFINE_ERROR(TransversalityError, "transversality")
HYPBEND_DEFINE_ERROR(NotHomotopicError, "not-homotopic")
HYPBEND_DEFINE_ERROR(BoundaryError, "boundary")
HYPBEND_DEFINE_ERROR(ValidationError, "validation")
HYPBEND_DEFINE_ERROR(UnsupportedError, "unsupported")
HYPBEND_DEFINE_ERROR(OutOfRegimeError, "out-of-regime")
HYPBEND_DEFINE_ERROR(ParameterError, "parameter")
HYPBEND_DEFINE_ERROR(UnknownBranchError, "unknown-branch")
HYPBEND_DEFINE_ERROR(NotLoopCarrierError, "not-loop-carrier")
HYPBEND_DEFINE_ERROR(CannotDecideError, "cannot-decide")
HYPBEND_DEFINE_ERROR(ParseError, "parse")

#undef HYPBEND_DEFINE_ERROR

// Raised when two planes do not meet in H^3; keeps the inner product that
// decided it.
class DisjointPlanesError : public Error {
 public:
  DisjointPlanesError(const std::string& what, double inner)
      : Error("disjoint-or-tangent-planes", what), inner_(inner) {}
  double inner() const noexcept { return inner_; }

 private:
  double inner_;
};

// Raised by translation_length for maps without a translation axis.
class NotLoxodromicError : public Error {
 public:
  NotLoxodromicError(const std::string& detected_type, const std::string& what)
      : Error("not-loxodromic", what), type_(detected_type) {}
  const std::string& detected_type() const noexcept { return type_; }

 private:
  std::string type_;
};

}  // namespace hypbend

#pragma once
#include <stdexcept>
#include <string>

namespace acmc {

// Every failure mode gets its own type so callers can react to the specific
// condition instead of parsing message strings.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidGeometry : Error { using Error::Error; };       // domain parameters inconsistent
struct MeshFailure : Error { using Error::Error; };           // triangulation produced a bad element
struct EmptyRegion : Error { using Error::Error; };           // region indicator selects nothing
struct MassOutOfRange : Error { using Error::Error; };        // requested mass not reachable in [0, vol(M)]
struct VolumeTooLarge : Error { using Error::Error; };        // ball of that area cannot sit inside the domain
struct QuadratureFailure : Error { using Error::Error; };     // adaptive integration did not meet tolerance
struct NonTermination : Error { using Error::Error; };        // ODE march exceeded its step budget
struct MassUnreachable : Error { using Error::Error; };       // profile shift cannot hit the target mass
struct SupportTouchesBoundary : Error { using Error::Error; };// zero-trace construction would leak onto the boundary
struct ZeroMass : Error { using Error::Error; };              // barycenter of an identically-zero field
struct AmbiguousProjection : Error { using Error::Error; };   // nearest-point projection has competing minimizers
struct LinearSolveFailure : Error { using Error::Error; };    // sparse factorization broke down
struct StepCollapse : Error { using Error::Error; };          // flow time step shrank below its floor
struct DidNotConverge : Error { using Error::Error; };        // iteration budget exhausted before tolerance
struct ConfigError : Error { using Error::Error; };           // bad or missing configuration field
struct IoFailure : Error { using Error::Error; };             // file could not be read or written

}  // namespace acmc

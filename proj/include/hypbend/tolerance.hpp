#pragma once

// Numeric tolerances shared by every module. Values near +-1 in arccosh and
// arccos lose about half their digits, which is why invariant checks are
// looser than construction checks.
namespace hypbend::tol {

inline constexpr double kConstruction = 1e-10;
inline constexpr double kInvariant = 1e-9;
inline constexpr double kPredicate = 1e-6;

// side_of dead zone.
inline constexpr double kSide = 1e-9;
// hyp_dist: arguments below 1 - kDistReject are rejected, the rest clamp.
inline constexpr double kDistReject = 1e-6;
// plane_angle: |<u,v>| must be below 1 - kPlaneMeet for the planes to meet.
inline constexpr double kPlaneMeet = 1e-12;
// Lorentz condition G^T J G = J.
inline constexpr double kLorentz = 1e-9;
// Minimum crossing angle accepted as transverse.
inline constexpr double kTransverse = 1e-6;
// Support-plane checks on pleated surfaces.
inline constexpr double kSupport = 1e-8;

}  // namespace hypbend::tol

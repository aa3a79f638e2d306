#pragma once

// (delta, epsilon)-polygonal approximations of the bent image of an arc and
// the angle-sum report built on them.

#include <cstddef>
#include <string>
#include <vector>

#include "hypbend/hypgeom.hpp"
#include "hypbend/lamination.hpp"
#include "hypbend/pleated.hpp"

namespace hypbend {

inline constexpr std::size_t kNoCrossing = static_cast<std::size_t>(-1);

struct ApproxEntry {
  double parameter;      // arclength fraction along the arc
  MinkowskiPoint point;  // x_i in the slice
  HyperPlane plane;      // support plane at f(x_i)
  /// Index into the arc's crossing list when x_i is a crossing point, with
  /// the pencil parameter s in [0, weight]; kNoCrossing for flat samples.
  std::size_t crossing = kNoCrossing;
  double pencil = 0.0;
  /// Position in the chain of planes met along the arc: flats of the j-th
  /// component sit at j, the pencil of crossing j fills [j, j + 1].
  double chain = 0.0;
};

struct PolygonalApproximation {
  std::vector<ApproxEntry> entries;
  double delta = 0.0;
  double epsilon = 0.0;
  /// How many consecutive sample pairs fell into each configuration (kept,
  /// disjoint planes, missed projection), and how many needed the full pencil.
  std::size_t configuration_counts[3] = {0, 0, 0};
  std::size_t full_pencil_fallbacks = 0;

  std::size_t length() const { return entries.size(); }
  double angle_sum() const;
  double max_angle() const;
  /// Largest hyperbolic distance between consecutive distinct sample points.
  double max_spacing() const;
};

/// (4/eps)(pi/delta + 1) l + 4(pi/delta + 1).
double length_bound(double epsilon, double delta, double arc_length);

/// Requires 0 < epsilon < log(3)/2 and delta > 0.
PolygonalApproximation polygonal_approximation(const PleatedSurface& ps, const Arc2& k, double delta,
                                               double epsilon);

struct InvariantViolation {
  int invariant;  // 1..5 in the order: ordering, support, meeting, pencil order, projection
  std::size_t index;
  std::string detail;
};

/// Checks the five defining properties of a polygonal approximation using
/// geometry only (the bookkeeping fields of the entries are not trusted).
std::vector<InvariantViolation> check_polygonal_invariants(const PleatedSurface& ps, const Arc2& k,
                                                           const std::vector<ApproxEntry>& entries);

/// True when the projection of the intersection line of the two planes to
/// the surface meets the segment [a, b] of the slice.
bool projection_meets_segment(const PleatedSurface& ps, const HyperPlane& u, const HyperPlane& v,
                              const MinkowskiPoint& a, const MinkowskiPoint& b);

struct ApproxReport {
  double angle_sum;
  double exact_measure;
  double error;
  std::size_t length;
  double bound;
  double ratio;  // error / (alpha l(k))
  double alpha;
  double s;
  double arc_length;
};

/// Default s: min(0.5, log(3)/2 - 1e-3).
double default_sample_spacing();

/// Requires alpha < pi/2 and 0 < s < min(1, log(3)/2).
ApproxReport approx_report(const PleatedSurface& ps, const Arc2& k, double alpha, double s);

}  // namespace hypbend

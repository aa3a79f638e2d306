#pragma once

// Pleated surfaces obtained by bending the H^2 slice along a finite measured
// lamination, with support planes and the convex / even predicates.
//
// Every component P of H^2 - |L| is carried to H^3 by an isometry M_P. The
// base component maps by the identity; crossing a leaf l from P into Q gives
// M_Q = M_P R_l(side * w), where R_l rotates about l oriented with P on its
// left. The base plane z = 0 is co-oriented by u_0 = side * (0, 0, 0, 1), and
// the support plane of P is M_P u_0. With this convention the bent surface
// lies in { x : <x, M_P u_0> <= 0 } whenever it is convex.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "hypbend/hypgeom.hpp"
#include "hypbend/lamination.hpp"

namespace hypbend {

class BendingData {
 public:
  /// side must be +1 or -1; every weight must lie in (0, pi].
  BendingData(FiniteLamination2 lamination, int side = 1);

  const FiniteLamination2& lamination() const { return lamination_; }
  int side() const { return side_; }

 private:
  FiniteLamination2 lamination_;
  int side_;
};

/// Support planes at one point: a single plane, or the pencil of planes
/// through a leaf image swept by s in [0, weight].
class SupportPencil {
 public:
  SupportPencil(HyperPlane single);
  /// Planes near_map * R_axis(side * s) * base_normal; the axis is a leaf of
  /// the slice oriented with the near component on its left.
  SupportPencil(LorentzMap near_map, HyperGeodesic axis, int side, double weight, Vec4 base_normal);

  bool is_single() const { return weight_ == 0.0; }
  double weight() const { return weight_; }
  HyperPlane at(double s) const;
  HyperPlane front() const { return at(0.0); }
  HyperPlane back() const { return at(weight_); }

 private:
  std::optional<HyperPlane> single_;
  std::optional<LorentzMap> near_map_;
  std::optional<HyperGeodesic> axis_;
  int side_ = 1;
  double weight_ = 0.0;
  Vec4 base_normal_ = Vec4::Zero();
};

class PleatedSurface {
 public:
  /// Folding-cocycle construction over the complementary-region tree.
  static PleatedSurface build(const BendingData& data);

  const BendingData& data() const { return data_; }
  const FiniteLamination2& lamination() const { return data_.lamination(); }
  const ComponentTree& tree() const { return tree_; }
  std::size_t base_node() const { return base_; }
  int side() const { return data_.side(); }

  const LorentzMap& component_map(std::size_t node) const { return maps_[node]; }
  const LorentzMap& component_map_inverse(std::size_t node) const { return inverses_[node]; }
  /// Support plane of the flat of a component.
  const HyperPlane& flat_plane(std::size_t node) const { return planes_[node]; }
  /// Co-orientation of the base plane z = 0.
  HyperPlane base_normal() const;

  /// Pencil member at leaf `leaf` seen from the adjacent component `from`:
  /// s = 0 is the flat plane of `from`, s = weight the flat plane across.
  HyperPlane pencil_plane(std::size_t leaf, std::size_t from, double s) const;

  /// f(p) for p in the slice; leaf points are evaluated from both sides and
  /// the images must agree.
  MinkowskiPoint evaluate(const MinkowskiPoint& p) const;

  /// Deterministic sample of points of a component (near its boundary leaves
  /// and on a polar grid of radius 3).
  std::vector<MinkowskiPoint> sample_component(std::size_t node) const;

  /// max over the closure of the component of <x, v> with x ranging over its
  /// ideal boundary (null vectors with t = 1) mapped by M_node. Non-positive
  /// exactly when f(closure(node)) lies in { <x, v> <= 0 }.
  double closure_max(std::size_t node, const Vec4& v) const;

  /// Largest scaled violation of "the whole surface lies in H+ of u".
  double support_violation(const HyperPlane& u) const;

  /// Nearest point of the surface to z: the preimage in the slice and its
  /// component, and the distance.
  struct Projection {
    MinkowskiPoint preimage;
    std::size_t node;
    double distance;
  };
  Projection project(const MinkowskiPoint& z) const;

 private:
  PleatedSurface(BendingData data, ComponentTree tree) : data_(std::move(data)), tree_(std::move(tree)) {}

  struct IdealArc {
    double from;
    double to;  // counter-clockwise, to >= from
  };

  BendingData data_;
  ComponentTree tree_;
  std::size_t base_ = 0;
  std::vector<LorentzMap> maps_;
  std::vector<LorentzMap> inverses_;
  std::vector<HyperPlane> planes_;
  std::vector<std::vector<IdealArc>> ideal_arcs_;
  std::vector<std::vector<Vec4>> ideal_vertices_;
};

inline PleatedSurface build_pleated(const BendingData& data) { return PleatedSurface::build(data); }

inline MinkowskiPoint evaluate(const PleatedSurface& ps, const MinkowskiPoint& p) { return ps.evaluate(p); }

/// Support planes at f(p). Throws UnsupportedError when the surface does not
/// lie on one side of its flats.
SupportPencil support_planes_at(const PleatedSurface& ps, const MinkowskiPoint& p);

struct ConvexityReport {
  bool convex = false;
  bool condition1 = false;  // every flat lies in H+ of every other flat
  bool condition2 = false;  // the intersection of the half-spaces has interior
  double worst_violation = 0.0;
  std::optional<std::pair<std::size_t, std::size_t>> violated_pair;  // (plane of P, flat of Q)
  std::optional<MinkowskiPoint> witness;
  double witness_margin = 0.0;  // min over flats of -<witness, u_P>
};

inline constexpr double kWitnessMargin = 1e-4;

/// Condition 1 only (cheap, exact on the ideal boundary).
bool satisfies_support_condition(const PleatedSurface& ps, double tolerance = tol::kSupport);

ConvexityReport is_convex(const PleatedSurface& ps);

/// Margin of a candidate interior point: min over flats of -<q, u_P>.
double witness_margin(const PleatedSurface& ps, const MinkowskiPoint& q);

/// Condition 1 holds and every flat image lies in the base plane. The empty
/// lamination is convex-degenerate and not even.
bool is_even(const PleatedSurface& ps);

/// Max |<f(sample), (0,0,0,1)>| over the component samples.
double coplanarity_residual(const PleatedSurface& ps);

/// Bending measure of an arc: the crossed-weight sum.
double bending_measure(const PleatedSurface& ps, const Arc2& k);

struct ChordComparison {
  double intrinsic_length;
  double chord_length;
  /// Angles that the bent path and the chord make at their common endpoints.
  double exterior_angle_sum;
  /// Turning of the bent path at its interior vertices.
  double turning_sum;
  double bending;
};

/// Compares the bent image of the segment [a, b] with the chord of H^3.
/// Throws OutOfRegimeError when the bending of [a, b] is at least pi/2.
ChordComparison chord_comparison(const PleatedSurface& ps, const MinkowskiPoint& a, const MinkowskiPoint& b);

}  // namespace hypbend

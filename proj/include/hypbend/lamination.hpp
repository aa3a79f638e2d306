#pragma once

// Finite measured geodesic laminations of the H^2 slice, transverse arcs and
// the complementary-region tree.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hypbend/hypgeom.hpp"

namespace hypbend {

class Leaf2 {
 public:
  /// Leaf with ideal endpoints at angles theta1, theta2 of the boundary circle.
  static Leaf2 make(std::string id, double theta1, double theta2, double weight);

  const std::string& id() const { return id_; }
  double theta1() const { return theta1_; }
  double theta2() const { return theta2_; }
  double weight() const { return weight_; }
  const HyperGeodesic& geodesic() const { return geodesic_; }
  /// Slice normal of geodesic(); the left side is <p,n> > 0.
  const Vec4& normal() const { return normal_; }
  double signed_value(const MinkowskiPoint& p) const { return mink_inner(p.coords(), normal_); }

  Leaf2 with_weight(double w) const { return make(id_, theta1_, theta2_, w); }

 private:
  Leaf2(std::string id, double t1, double t2, double w, HyperGeodesic g);
  std::string id_;
  double theta1_;
  double theta2_;
  double weight_;
  HyperGeodesic geodesic_;
  Vec4 normal_;
};

/// True when the chords interleave on the circle (the leaves cross in H^2).
bool leaves_cross(const Leaf2& a, const Leaf2& b);

class FiniteLamination2 {
 public:
  FiniteLamination2() = default;
  /// Validates unique ids and pairwise disjointness.
  explicit FiniteLamination2(std::vector<Leaf2> leaves);

  const std::vector<Leaf2>& leaves() const { return leaves_; }
  std::size_t size() const { return leaves_.size(); }
  bool empty() const { return leaves_.empty(); }
  std::optional<std::size_t> index_of(const std::string& id) const;

  /// Same geometry, new weights by id (ids absent from the map keep theirs).
  FiniteLamination2 with_weights(const std::map<std::string, double>& weights) const;

 private:
  std::vector<Leaf2> leaves_;
};

class Arc2 {
 public:
  /// Validates both endpoints lie in the slice and are distinct.
  Arc2(const MinkowskiPoint& from, const MinkowskiPoint& to);

  const MinkowskiPoint& from() const { return from_; }
  const MinkowskiPoint& to() const { return to_; }
  double length() const { return length_; }
  /// Point at arclength fraction t in [0, 1].
  MinkowskiPoint point_at(double t) const;
  /// Unit tangent at arclength fraction t.
  Vec4 tangent_at(double t) const;
  /// Sub-arc between two fractions.
  Arc2 sub(double t0, double t1) const { return Arc2(point_at(t0), point_at(t1)); }

 private:
  MinkowskiPoint from_;
  MinkowskiPoint to_;
  Vec4 tangent_;
  double length_;
};

struct Crossing {
  std::size_t leaf_index;
  std::string leaf_id;
  double parameter;  // arclength fraction in (0, 1)
  double angle;      // crossing angle in (0, pi/2]
};

/// Crossings ordered along the arc. Throws TransversalityError when an
/// endpoint lies on a leaf or a crossing is nearly tangential.
std::vector<Crossing> crossings(const Arc2& k, const FiniteLamination2& lam);

/// Total weight of the leaves crossed by k.
double arc_measure(const Arc2& k, const FiniteLamination2& lam);

/// Arcs crossing the same leaves carry the same measure. Throws
/// NotHomotopicError when the crossed-leaf sets differ.
bool homotopic_measure_invariance_check(const Arc2& k, const Arc2& k2, const FiniteLamination2& lam);

/// Components of H^2 minus the leaves, glued along the leaves into a tree.
class ComponentTree {
 public:
  explicit ComponentTree(const FiniteLamination2& lam);

  std::size_t node_count() const { return signatures_.size(); }
  std::size_t edge_count() const { return left_.size(); }
  /// Node on the left (<p,n> > 0) / right side of leaf i.
  std::size_t left_of(std::size_t leaf) const { return left_[leaf]; }
  std::size_t right_of(std::size_t leaf) const { return right_[leaf]; }
  /// Leaves bounding a node.
  const std::vector<std::size_t>& boundary(std::size_t node) const { return boundary_[node]; }
  /// Sign (+1 left, -1 right) of every leaf for points of the node.
  const std::vector<std::int8_t>& signature(std::size_t node) const { return signatures_[node]; }
  /// Neighbour of node across leaf.
  std::size_t across(std::size_t node, std::size_t leaf) const;

  /// Node containing p. Throws BoundaryError for points on a leaf.
  std::size_t locate(const MinkowskiPoint& p) const;
  /// Like locate, but returns nullopt instead of throwing.
  std::optional<std::size_t> try_locate(const MinkowskiPoint& p) const;
  /// Node whose closure contains the ideal point at angle phi.
  std::size_t locate_ideal(double phi) const;

 private:
  std::optional<std::size_t> find(const std::vector<std::int8_t>& sig) const;

  std::vector<Leaf2> leaves_;
  std::vector<std::vector<std::int8_t>> signatures_;
  std::vector<std::vector<std::size_t>> boundary_;
  std::vector<std::size_t> left_;
  std::vector<std::size_t> right_;
};

inline ComponentTree complement_components(const FiniteLamination2& lam) { return ComponentTree(lam); }

/// Sentinel returned when exactly one windowed support is empty.
inline constexpr double kInfiniteDistance = std::numeric_limits<double>::infinity();

/// Hausdorff distance between the supports intersected with the ball of
/// radius R about the basepoint. Samples every windowed leaf segment at
/// spacing <= 1e-3 R and measures exact point-to-segment distances.
double windowed_hausdorff(const FiniteLamination2& a, const FiniteLamination2& b, double radius = 5.0);

/// Samples of |lam| inside the ball of radius R, at spacing <= spacing.
std::vector<MinkowskiPoint> sample_support(const FiniteLamination2& lam, double radius, double spacing);

/// Distance from p to |lam| inside the ball of radius R (infinity if empty).
double distance_to_support(const MinkowskiPoint& p, const FiniteLamination2& lam, double radius);

}  // namespace hypbend

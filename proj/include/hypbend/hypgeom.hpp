#pragma once

// Hyperboloid-model primitives for H^2 (the slice z = 0) inside H^3.
//
// Coordinates are (t, x, y, z) with the Minkowski form -t t' + x x' + y y' + z z'.
// Points live on the upper sheet <p,p> = -1, planes are described by unit
// spacelike normals u and own the half-space H+ = { x : <x,u> <= 0 }.

#include <Eigen/Dense>

#include <array>
#include <optional>

#include "hypbend/errors.hpp"
#include "hypbend/tolerance.hpp"

namespace hypbend {

using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

/// Minkowski bilinear form of signature (-,+,+,+).
double mink_inner(const Vec4& a, const Vec4& b);

/// diag(-1, 1, 1, 1).
const Mat4& minkowski_metric();

class MinkowskiPoint {
 public:
  /// Validates <p,p> = -1 within kConstruction and t > 0.
  static MinkowskiPoint from_coords(const Vec4& v);
  /// Rescales a future timelike vector onto the sheet.
  static MinkowskiPoint normalized(const Vec4& v);
  /// The point of the sheet above the spatial part (x, y, z).
  static MinkowskiPoint lift(const Eigen::Vector3d& spatial);
  /// (1, 0, 0, 0).
  static MinkowskiPoint basepoint();
  /// Point of the H^2 slice at distance r from the basepoint in direction phi.
  static MinkowskiPoint from_polar(double r, double phi);

  const Vec4& coords() const { return v_; }
  double t() const { return v_[0]; }
  double x() const { return v_[1]; }
  double y() const { return v_[2]; }
  double z() const { return v_[3]; }

  /// Coordinates in the Klein (projective) model of the slice: (x/t, y/t).
  Eigen::Vector2d klein() const { return {v_[1] / v_[0], v_[2] / v_[0]}; }

  bool in_h2_slice(double tolerance = tol::kConstruction) const;

 private:
  explicit MinkowskiPoint(const Vec4& v) : v_(v) {}
  Vec4 v_;
};

class HyperPlane {
 public:
  /// Validates <u,u> = 1 within kConstruction.
  static HyperPlane from_normal(const Vec4& u);
  /// Rescales a spacelike vector to unit length.
  static HyperPlane normalized(const Vec4& u);
  /// Image of a unit normal under a (possibly large) Lorentz map: keeps the
  /// time component and rescales the spatial part back to unit length.
  static HyperPlane lift(const Vec4& u);

  const Vec4& normal() const { return u_; }
  HyperPlane flipped() const { return HyperPlane(-u_); }

  /// <p,u>; negative inside H+.
  double signed_value(const MinkowskiPoint& p) const { return mink_inner(p.coords(), u_); }

 private:
  explicit HyperPlane(const Vec4& u) : u_(u) {}
  Vec4 u_;
};

/// A complete geodesic of H^3, oriented from the first ideal endpoint to the
/// second. Ideal endpoints are null vectors scaled to t = 1.
class HyperGeodesic {
 public:
  static HyperGeodesic from_ideal(const Vec4& from, const Vec4& to);
  /// Geodesic of the H^2 slice with ideal endpoints at the given angles.
  static HyperGeodesic from_angles(double theta_from, double theta_to);
  /// Complete geodesic through two distinct points, oriented p -> q.
  static HyperGeodesic through(const MinkowskiPoint& p, const MinkowskiPoint& q);

  const Vec4& from() const { return e_from_; }
  const Vec4& to() const { return e_to_; }
  HyperGeodesic reversed() const { return HyperGeodesic(e_to_, e_from_); }

  /// Point of the geodesic closest to the basepoint.
  MinkowskiPoint anchor() const;
  /// Unit tangent at anchor(), pointing towards to().
  Vec4 direction() const;
  /// Point at signed arclength s from anchor().
  MinkowskiPoint point_at(double s) const;
  /// Orthogonal projection of p onto the geodesic.
  MinkowskiPoint foot_of(const MinkowskiPoint& p) const;
  /// Arclength parameter of the foot of p.
  double parameter_of(const MinkowskiPoint& p) const;
  double distance_to(const MinkowskiPoint& p) const;

  /// Orthonormal basis (n1, n2) of the spacelike complement of the geodesic,
  /// oriented so that (anchor, direction, n1, n2) is a positive frame.
  std::array<Vec4, 2> normal_frame() const;

  /// For geodesics of the H^2 slice: unit normal inside the slice pointing to
  /// the left of the direction of travel. Points on the left have <p,n> > 0.
  Vec4 slice_normal() const;

  bool in_h2_slice(double tolerance = tol::kConstruction) const;

 private:
  HyperGeodesic(const Vec4& a, const Vec4& b) : e_from_(a), e_to_(b) {}
  Vec4 e_from_;
  Vec4 e_to_;
};

class LorentzMap {
 public:
  static LorentzMap identity();
  /// Validates G^T J G = J within kLorentz, t-preservation and det = +1.
  static LorentzMap from_matrix(const Mat4& m);
  /// Wraps a matrix known to be Lorentz by construction (no validation).
  static LorentzMap trusted(const Mat4& m) { return LorentzMap(m); }
  /// Hyperbolic translation by distance d along the geodesic (towards to()).
  static LorentzMap translation(const HyperGeodesic& axis, double d);

  const Mat4& matrix() const { return m_; }

  LorentzMap operator*(const LorentzMap& other) const { return LorentzMap(m_ * other.m_); }
  LorentzMap inverse() const;

  /// Re-orthonormalizes the columns with respect to the Minkowski form.
  LorentzMap renormalized() const;

  /// Applies the map and renormalizes the result onto the sheet.
  MinkowskiPoint apply(const MinkowskiPoint& p) const;
  HyperPlane apply(const HyperPlane& u) const;
  HyperGeodesic apply(const HyperGeodesic& g) const;
  Vec4 apply(const Vec4& v) const { return m_ * v; }

  /// max |G^T J G - J| entrywise.
  double lorentz_defect() const;

 private:
  explicit LorentzMap(const Mat4& m) : m_(m) {}
  Mat4 m_;
};

enum class Side { Negative = -1, On = 0, Positive = 1 };

double hyp_dist(const MinkowskiPoint& p, const MinkowskiPoint& q);

/// arccos(<u,v>): the exterior bending angle between two co-oriented planes.
/// Coincident planes return 0 (same co-orientation) or pi (opposite).
double plane_angle(const HyperPlane& u, const HyperPlane& v);

/// True when the planes meet in H^3 (including coincident planes).
bool planes_meet(const HyperPlane& u, const HyperPlane& v);

/// True when the planes coincide as sets (co-orientation ignored).
bool planes_coincide(const HyperPlane& u, const HyperPlane& v, double tolerance = tol::kInvariant);

/// Line of intersection of two planes that meet transversally.
std::optional<HyperGeodesic> plane_intersection(const HyperPlane& u, const HyperPlane& v);

/// Rotation by theta about the oriented geodesic g (right-hand rule with the
/// frame of HyperGeodesic::normal_frame).
LorentzMap rotation_about_geodesic(const HyperGeodesic& g, double theta);

Side side_of(const MinkowskiPoint& p, const HyperPlane& u);

/// Unit tangent at p of the geodesic from p to q.
Vec4 tangent_towards(const MinkowskiPoint& p, const MinkowskiPoint& q);

/// Exponential map at p along the unit tangent v.
MinkowskiPoint exp_map(const MinkowskiPoint& p, const Vec4& v, double s);

/// Plane containing the geodesic g whose normal is the slice normal; for
/// geodesics of the slice this is the vertical plane over g.
HyperPlane vertical_plane(const HyperGeodesic& g);

}  // namespace hypbend

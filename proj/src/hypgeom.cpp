#include "hypbend/hypgeom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace hypbend {

namespace {

// Orthogonal projection onto the Lorentzian 2-plane spanned by two null
// vectors with <a,b> < 0.
Vec4 project_onto_null_span(const Vec4& v, const Vec4& a, const Vec4& b) {
  const double g = mink_inner(a, b);
  return (mink_inner(v, b) / g) * a + (mink_inner(v, a) / g) * b;
}

Vec4 scale_null(const Vec4& e) {
  if (!(e[0] > 0.0)) {
    throw DegenerateGeodesicError("ideal endpoint must have t > 0");
  }
  Vec4 out = e / e[0];
  if (std::abs(mink_inner(out, out)) > 1e-8) {
    throw DegenerateGeodesicError("ideal endpoint is not a null vector");
  }
  return out;
}

double det3(const Vec4& a, const Vec4& b, const Vec4& c) {
  Eigen::Matrix3d m;
  m << a[0], b[0], c[0], a[1], b[1], c[1], a[2], b[2], c[2];
  return m.determinant();
}

}  // namespace

double mink_inner(const Vec4& a, const Vec4& b) {
  return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

const Mat4& minkowski_metric() {
  static const Mat4 j = Eigen::Vector4d(-1.0, 1.0, 1.0, 1.0).asDiagonal();
  return j;
}

// ---------------------------------------------------------------------------
// MinkowskiPoint

MinkowskiPoint MinkowskiPoint::from_coords(const Vec4& v) {
  if (!v.allFinite()) throw InvalidPointError("non-finite coordinates");
  const double n = mink_inner(v, v);
  if (std::abs(n + 1.0) > tol::kConstruction || !(v[0] > 0.0)) {
    std::ostringstream os;
    os << "point is not on the upper hyperboloid sheet (<p,p> = " << n << ", t = " << v[0] << ")";
    throw InvalidPointError(os.str());
  }
  return MinkowskiPoint(v);
}

MinkowskiPoint MinkowskiPoint::normalized(const Vec4& v) {
  const double n = mink_inner(v, v);
  if (!(n < 0.0) || !v.allFinite()) throw InvalidPointError("vector is not timelike");
  Vec4 out = v / std::sqrt(-n);
  if (out[0] < 0.0) out = -out;
  return MinkowskiPoint(out);
}

MinkowskiPoint MinkowskiPoint::lift(const Eigen::Vector3d& spatial) {
  if (!spatial.allFinite()) throw InvalidPointError("non-finite coordinates");
  Vec4 v;
  v << std::sqrt(1.0 + spatial.squaredNorm()), spatial;
  return MinkowskiPoint(v);
}

MinkowskiPoint MinkowskiPoint::basepoint() { return MinkowskiPoint(Vec4(1.0, 0.0, 0.0, 0.0)); }

MinkowskiPoint MinkowskiPoint::from_polar(double r, double phi) {
  const double sh = std::sinh(r);
  return MinkowskiPoint(Vec4(std::cosh(r), sh * std::cos(phi), sh * std::sin(phi), 0.0));
}

bool MinkowskiPoint::in_h2_slice(double tolerance) const {
  return std::abs(v_[3]) <= tolerance * std::max(1.0, v_[0]);
}

// ---------------------------------------------------------------------------
// HyperPlane

HyperPlane HyperPlane::from_normal(const Vec4& u) {
  if (!u.allFinite() || std::abs(mink_inner(u, u) - 1.0) > tol::kConstruction) {
    throw InvalidPlaneError("plane normal must be unit spacelike");
  }
  return HyperPlane(u);
}

HyperPlane HyperPlane::normalized(const Vec4& u) {
  const double n = mink_inner(u, u);
  if (!(n > 0.0) || !u.allFinite()) throw InvalidPlaneError("plane normal must be spacelike");
  return HyperPlane(u / std::sqrt(n));
}

HyperPlane HyperPlane::lift(const Vec4& u) {
  const double spatial = u.tail<3>().norm();
  if (!u.allFinite() || !(spatial > 0.0)) throw InvalidPlaneError("plane normal must be spacelike");
  Vec4 out = u;
  out.tail<3>() *= std::sqrt(1.0 + u[0] * u[0]) / spatial;
  return HyperPlane(out);
}

// ---------------------------------------------------------------------------
// HyperGeodesic

HyperGeodesic HyperGeodesic::from_ideal(const Vec4& from, const Vec4& to) {
  Vec4 a = scale_null(from);
  Vec4 b = scale_null(to);
  if (mink_inner(a, b) > -1e-12) {
    throw DegenerateGeodesicError("ideal endpoints coincide");
  }
  return HyperGeodesic(a, b);
}

HyperGeodesic HyperGeodesic::from_angles(double theta_from, double theta_to) {
  return from_ideal(Vec4(1.0, std::cos(theta_from), std::sin(theta_from), 0.0),
                    Vec4(1.0, std::cos(theta_to), std::sin(theta_to), 0.0));
}

HyperGeodesic HyperGeodesic::through(const MinkowskiPoint& p, const MinkowskiPoint& q) {
  if (hyp_dist(p, q) < tol::kConstruction) {
    throw DegenerateGeodesicError("points coincide");
  }
  const Vec4 v = tangent_towards(p, q);
  return from_ideal(p.coords() - v, p.coords() + v);
}

MinkowskiPoint HyperGeodesic::anchor() const {
  return foot_of(MinkowskiPoint::basepoint());
}

Vec4 HyperGeodesic::direction() const {
  const MinkowskiPoint c = anchor();
  const Vec4 to_scaled = e_to_ / (-mink_inner(e_to_, c.coords()));
  return to_scaled - c.coords();
}

MinkowskiPoint HyperGeodesic::point_at(double s) const {
  const MinkowskiPoint c = anchor();
  return MinkowskiPoint::normalized(std::cosh(s) * c.coords() + std::sinh(s) * direction());
}

MinkowskiPoint HyperGeodesic::foot_of(const MinkowskiPoint& p) const {
  return MinkowskiPoint::normalized(project_onto_null_span(p.coords(), e_from_, e_to_));
}

double HyperGeodesic::parameter_of(const MinkowskiPoint& p) const {
  return std::asinh(mink_inner(foot_of(p).coords(), direction()));
}

double HyperGeodesic::distance_to(const MinkowskiPoint& p) const { return hyp_dist(p, foot_of(p)); }

std::array<Vec4, 2> HyperGeodesic::normal_frame() const {
  std::array<Vec4, 4> candidates;
  for (int i = 0; i < 4; ++i) {
    Vec4 e = Vec4::Zero();
    e[i] = 1.0;
    candidates[i] = e - project_onto_null_span(e, e_from_, e_to_);
  }
  auto norm_of = [](const Vec4& v) { return mink_inner(v, v); };
  auto best = std::max_element(candidates.begin(), candidates.end(),
                               [&](const Vec4& a, const Vec4& b) { return norm_of(a) < norm_of(b); });
  Vec4 n1 = *best / std::sqrt(norm_of(*best));
  for (auto& c : candidates) c -= mink_inner(c, n1) * n1;
  best = std::max_element(candidates.begin(), candidates.end(),
                          [&](const Vec4& a, const Vec4& b) { return norm_of(a) < norm_of(b); });
  Vec4 n2 = *best / std::sqrt(norm_of(*best));

  Mat4 frame;
  frame.col(0) = anchor().coords();
  frame.col(1) = direction();
  frame.col(2) = n1;
  frame.col(3) = n2;
  if (frame.determinant() < 0.0) n2 = -n2;
  return {n1, n2};
}

Vec4 HyperGeodesic::slice_normal() const {
  const Eigen::Vector3d a(e_from_[0], e_from_[1], e_from_[2]);
  const Eigen::Vector3d b(e_to_[0], e_to_[1], e_to_[2]);
  const Eigen::Vector3d c = a.cross(b);
  Vec4 n(-c[0], c[1], c[2], 0.0);
  n /= std::sqrt(mink_inner(n, n));
  if (det3(anchor().coords(), direction(), n) < 0.0) n = -n;
  return n;
}

bool HyperGeodesic::in_h2_slice(double tolerance) const {
  return std::abs(e_from_[3]) <= tolerance && std::abs(e_to_[3]) <= tolerance;
}

// ---------------------------------------------------------------------------
// LorentzMap

LorentzMap LorentzMap::identity() { return LorentzMap(Mat4::Identity()); }

LorentzMap LorentzMap::from_matrix(const Mat4& m) {
  LorentzMap g(m);
  if (!m.allFinite()) throw InvalidMapError("non-finite matrix");
  const double defect = g.lorentz_defect();
  if (defect > tol::kLorentz) {
    std::ostringstream os;
    os << "matrix violates G^T J G = J (defect " << defect << ")";
    throw InvalidMapError(os.str());
  }
  if (!(m(0, 0) > 0.0)) throw InvalidMapError("map exchanges the hyperboloid sheets");
  if (!(m.determinant() > 0.0)) throw InvalidMapError("map reverses orientation");
  return g;
}

LorentzMap LorentzMap::translation(const HyperGeodesic& axis, double d) {
  const Mat4& j = minkowski_metric();
  const Vec4 c = axis.anchor().coords();
  const Vec4 v = axis.direction();
  const Mat4 pc = -c * (j * c).transpose();
  const Mat4 pv = v * (j * v).transpose();
  const Mat4 cross = -v * (j * c).transpose() + c * (j * v).transpose();
  return LorentzMap(Mat4::Identity() + (std::cosh(d) - 1.0) * (pc + pv) + std::sinh(d) * cross);
}

LorentzMap LorentzMap::inverse() const {
  const Mat4& j = minkowski_metric();
  return LorentzMap(j * m_.transpose() * j);
}

LorentzMap LorentzMap::renormalized() const {
  // Newton step towards O(3,1). The defect of a product of large matrices is
  // dominated by rounding of size eps |M|^2; correcting below that level only
  // injects noise, so such matrices are left alone.
  const Mat4& j = minkowski_metric();
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * m_.squaredNorm();
  Mat4 out = m_;
  for (int it = 0; it < 2; ++it) {
    const Mat4 defect = j * out.transpose() * j * out - Mat4::Identity();
    if (defect.norm() <= floor) break;
    out -= 0.5 * out * defect;
  }
  return LorentzMap(out);
}

MinkowskiPoint LorentzMap::apply(const MinkowskiPoint& p) const {
  Vec4 v = m_ * p.coords();
  if (!v.allFinite() || !(v[0] > 0.0)) throw InvalidPointError("image is not on the upper sheet");
  // Far from the basepoint -t^2 + |x|^2 cancels badly; lifting the spatial
  // part back onto the sheet keeps the relative error at rounding level.
  return MinkowskiPoint::lift(v.tail<3>());
}

HyperPlane LorentzMap::apply(const HyperPlane& u) const { return HyperPlane::lift(m_ * u.normal()); }

HyperGeodesic LorentzMap::apply(const HyperGeodesic& g) const {
  return HyperGeodesic::from_ideal(m_ * g.from(), m_ * g.to());
}

double LorentzMap::lorentz_defect() const {
  const Mat4& j = minkowski_metric();
  return (m_.transpose() * j * m_ - j).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Free functions

double hyp_dist(const MinkowskiPoint& p, const MinkowskiPoint& q) {
  const double arg = -mink_inner(p.coords(), q.coords());
  if (arg < 1.0 - tol::kDistReject) {
    std::ostringstream os;
    os << "-<p,q> = " << arg << " is below 1; points are not on the hyperboloid";
    throw InvalidPointError(os.str());
  }
  // 2 asinh(|p - q| / 2) is accurate for nearby points where arccosh is not.
  const Vec4 diff = p.coords() - q.coords();
  const double chord2 = mink_inner(diff, diff);
  if (chord2 <= 0.0) return 0.0;
  return 2.0 * std::asinh(std::sqrt(chord2) / 2.0);
}

namespace {

enum class Coincidence { None, Same, Opposite };

Coincidence coincidence(const Vec4& u, const Vec4& v, double tolerance) {
  const double scale = std::max({1.0, u.cwiseAbs().maxCoeff(), v.cwiseAbs().maxCoeff()});
  if ((u - v).cwiseAbs().maxCoeff() <= tolerance * scale) return Coincidence::Same;
  if ((u + v).cwiseAbs().maxCoeff() <= tolerance * scale) return Coincidence::Opposite;
  return Coincidence::None;
}

}  // namespace

double plane_angle(const HyperPlane& u, const HyperPlane& v) {
  const double c = mink_inner(u.normal(), v.normal());
  if (std::abs(c) < 1.0 - tol::kPlaneMeet) return std::acos(c);
  // Near-coincident planes: recover the small angle from |u -+ v|.
  switch (coincidence(u.normal(), v.normal(), tol::kPredicate)) {
    case Coincidence::Same: {
      const Vec4 w = u.normal() - v.normal();
      return 2.0 * std::asin(std::min(1.0, std::sqrt(std::max(0.0, mink_inner(w, w))) / 2.0));
    }
    case Coincidence::Opposite: {
      const Vec4 w = u.normal() + v.normal();
      return std::numbers::pi -
             2.0 * std::asin(std::min(1.0, std::sqrt(std::max(0.0, mink_inner(w, w))) / 2.0));
    }
    case Coincidence::None:
      break;
  }
  std::ostringstream os;
  os << "planes do not meet in H^3 (<u,v> = " << c << ")";
  throw DisjointPlanesError(os.str(), c);
}

bool planes_meet(const HyperPlane& u, const HyperPlane& v) {
  const double c = mink_inner(u.normal(), v.normal());
  if (std::abs(c) < 1.0 - tol::kPlaneMeet) return true;
  return coincidence(u.normal(), v.normal(), tol::kPredicate) != Coincidence::None;
}

bool planes_coincide(const HyperPlane& u, const HyperPlane& v, double tolerance) {
  return coincidence(u.normal(), v.normal(), tolerance) != Coincidence::None;
}

std::optional<HyperGeodesic> plane_intersection(const HyperPlane& u, const HyperPlane& v) {
  const double c = mink_inner(u.normal(), v.normal());
  if (std::abs(c) >= 1.0 - tol::kPlaneMeet) return std::nullopt;
  // Orthonormal basis (a, b) of span(u, v); it is positive definite.
  const Vec4 a = u.normal();
  Vec4 b = v.normal() - c * a;
  b /= std::sqrt(mink_inner(b, b));
  auto remove_span = [&](const Vec4& w) { return Vec4(w - mink_inner(w, a) * a - mink_inner(w, b) * b); };
  // The complement is Lorentzian; find a future timelike unit vector and a
  // spacelike unit vector in it.
  Vec4 time = remove_span(Vec4(1.0, 0.0, 0.0, 0.0));
  if (!(mink_inner(time, time) < 0.0)) return std::nullopt;
  time /= std::sqrt(-mink_inner(time, time));
  if (time[0] < 0.0) time = -time;
  Vec4 space = Vec4::Zero();
  double best = -1.0;
  for (int i = 1; i < 4; ++i) {
    Vec4 e = Vec4::Zero();
    e[i] = 1.0;
    Vec4 w = remove_span(e);
    w += mink_inner(w, time) * time;
    const double n = mink_inner(w, w);
    if (n > best) {
      best = n;
      space = w;
    }
  }
  space /= std::sqrt(best);
  return HyperGeodesic::from_ideal(time - space, time + space);
}

LorentzMap rotation_about_geodesic(const HyperGeodesic& g, double theta) {
  const Mat4& j = minkowski_metric();
  const auto [n1, n2] = g.normal_frame();
  const Mat4 proj = n1 * (j * n1).transpose() + n2 * (j * n2).transpose();
  const Mat4 turn = n2 * (j * n1).transpose() - n1 * (j * n2).transpose();
  return LorentzMap::trusted(Mat4::Identity() + (std::cos(theta) - 1.0) * proj + std::sin(theta) * turn);
}

Side side_of(const MinkowskiPoint& p, const HyperPlane& u) {
  const double v = u.signed_value(p);
  if (std::abs(v) <= tol::kSide) return Side::On;
  return v < 0.0 ? Side::Negative : Side::Positive;
}

Vec4 tangent_towards(const MinkowskiPoint& p, const MinkowskiPoint& q) {
  Vec4 v = q.coords() + mink_inner(q.coords(), p.coords()) * p.coords();
  const double n = mink_inner(v, v);
  if (!(n > 0.0)) throw DegenerateGeodesicError("points coincide");
  return v / std::sqrt(n);
}

MinkowskiPoint exp_map(const MinkowskiPoint& p, const Vec4& v, double s) {
  return MinkowskiPoint::normalized(std::cosh(s) * p.coords() + std::sinh(s) * v);
}

HyperPlane vertical_plane(const HyperGeodesic& g) { return HyperPlane::from_normal(g.slice_normal()); }

}  // namespace hypbend

#include "hypbend/lamination.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace hypbend {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}

// Strictly inside the counter-clockwise open arc from a to b.
bool strictly_inside_arc(double x, double a, double b, double eps) {
  const double span = wrap_angle(b - a);
  const double off = wrap_angle(x - a);
  return off > eps && off < span - eps;
}

Vec4 ideal_point(double phi) { return Vec4(1.0, std::cos(phi), std::sin(phi), 0.0); }

}  // namespace

// ---------------------------------------------------------------------------
// Leaf2

Leaf2::Leaf2(std::string id, double t1, double t2, double w, HyperGeodesic g)
    : id_(std::move(id)), theta1_(t1), theta2_(t2), weight_(w), geodesic_(std::move(g)),
      normal_(geodesic_.slice_normal()) {}

Leaf2 Leaf2::make(std::string id, double theta1, double theta2, double weight) {
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw ValidationError("leaf '" + id + "' must have a positive weight");
  }
  if (std::abs(std::remainder(theta1 - theta2, kTwoPi)) < 1e-12) {
    throw DegenerateGeodesicError("leaf '" + id + "' has coincident ideal endpoints");
  }
  auto g = HyperGeodesic::from_angles(theta1, theta2);
  return Leaf2(std::move(id), theta1, theta2, weight, std::move(g));
}

bool leaves_cross(const Leaf2& a, const Leaf2& b) {
  constexpr double eps = 1e-12;
  const double a1 = wrap_angle(a.theta1());
  const double a2 = wrap_angle(a.theta2());
  const double b1 = wrap_angle(b.theta1());
  const double b2 = wrap_angle(b.theta2());
  auto same = [&](double x, double y) { return std::abs(std::remainder(x - y, kTwoPi)) <= eps; };
  if ((same(a1, b1) && same(a2, b2)) || (same(a1, b2) && same(a2, b1))) return true;
  if (same(a1, b1) || same(a1, b2) || same(a2, b1) || same(a2, b2)) return false;
  return strictly_inside_arc(b1, a1, a2, eps) != strictly_inside_arc(b2, a1, a2, eps);
}

// ---------------------------------------------------------------------------
// FiniteLamination2

FiniteLamination2::FiniteLamination2(std::vector<Leaf2> leaves) : leaves_(std::move(leaves)) {
  std::set<std::string> ids;
  for (const auto& l : leaves_) {
    if (!ids.insert(l.id()).second) throw ValidationError("duplicate leaf id '" + l.id() + "'");
  }
  for (std::size_t i = 0; i < leaves_.size(); ++i) {
    for (std::size_t j = i + 1; j < leaves_.size(); ++j) {
      if (leaves_cross(leaves_[i], leaves_[j])) {
        throw ValidationError("leaves '" + leaves_[i].id() + "' and '" + leaves_[j].id() +
                              "' intersect");
      }
    }
  }
}

std::optional<std::size_t> FiniteLamination2::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < leaves_.size(); ++i) {
    if (leaves_[i].id() == id) return i;
  }
  return std::nullopt;
}

FiniteLamination2 FiniteLamination2::with_weights(const std::map<std::string, double>& weights) const {
  std::vector<Leaf2> out;
  out.reserve(leaves_.size());
  for (const auto& l : leaves_) {
    auto it = weights.find(l.id());
    out.push_back(it == weights.end() ? l : l.with_weight(it->second));
  }
  return FiniteLamination2(std::move(out));
}

// ---------------------------------------------------------------------------
// Arc2

Arc2::Arc2(const MinkowskiPoint& from, const MinkowskiPoint& to)
    : from_(from), to_(to), tangent_(Vec4::Zero()), length_(0.0) {
  if (!from.in_h2_slice(tol::kInvariant) || !to.in_h2_slice(tol::kInvariant)) {
    throw ValidationError("arc endpoints must lie in the H^2 slice");
  }
  length_ = hyp_dist(from, to);
  if (length_ <= tol::kConstruction) throw ValidationError("arc endpoints coincide");
  tangent_ = tangent_towards(from, to);
}

MinkowskiPoint Arc2::point_at(double t) const {
  if (t <= 0.0) return from_;
  if (t >= 1.0) return to_;
  return exp_map(from_, tangent_, t * length_);
}

Vec4 Arc2::tangent_at(double t) const {
  const double s = t * length_;
  return std::sinh(s) * from_.coords() + std::cosh(s) * tangent_;
}

// ---------------------------------------------------------------------------
// Crossings

std::vector<Crossing> crossings(const Arc2& k, const FiniteLamination2& lam) {
  std::vector<Crossing> out;
  const Vec4 v = k.tangent_at(0.0);
  for (std::size_t i = 0; i < lam.size(); ++i) {
    const Leaf2& leaf = lam.leaves()[i];
    const double a = leaf.signed_value(k.from());
    const double b = leaf.signed_value(k.to());
    if (std::abs(a) <= tol::kSide || std::abs(b) <= tol::kSide) {
      throw TransversalityError("arc endpoint lies on leaf '" + leaf.id() + "'");
    }
    if ((a > 0.0) == (b > 0.0)) continue;
    // <cosh(s) p + sinh(s) v, n> = 0 along the arc.
    const double vn = mink_inner(v, leaf.normal());
    const double s = std::atanh(-a / vn);
    const double sin_angle = std::abs(a * std::sinh(s) + vn * std::cosh(s));
    const double angle = std::asin(std::min(1.0, sin_angle));
    if (angle < tol::kTransverse) {
      std::ostringstream os;
      os << "arc meets leaf '" << leaf.id() << "' at angle " << angle;
      throw TransversalityError(os.str());
    }
    out.push_back({i, leaf.id(), s / k.length(), angle});
  }
  std::sort(out.begin(), out.end(),
            [](const Crossing& x, const Crossing& y) { return x.parameter < y.parameter; });
  return out;
}

double arc_measure(const Arc2& k, const FiniteLamination2& lam) {
  double total = 0.0;
  for (const auto& c : crossings(k, lam)) total += lam.leaves()[c.leaf_index].weight();
  return total;
}

bool homotopic_measure_invariance_check(const Arc2& k, const Arc2& k2, const FiniteLamination2& lam) {
  auto crossed = [&](const Arc2& arc) {
    std::set<std::size_t> ids;
    for (const auto& c : crossings(arc, lam)) ids.insert(c.leaf_index);
    return ids;
  };
  const auto a = crossed(k);
  const auto b = crossed(k2);
  if (a != b) throw NotHomotopicError("arcs cross different leaf sets");
  // Same atoms summed in the same order.
  auto sum = [&](const std::set<std::size_t>& s) {
    double t = 0.0;
    for (auto i : s) t += lam.leaves()[i].weight();
    return t;
  };
  return sum(a) == sum(b);
}

// ---------------------------------------------------------------------------
// ComponentTree

ComponentTree::ComponentTree(const FiniteLamination2& lam) : leaves_(lam.leaves()) {
  const std::size_t m = leaves_.size();
  left_.resize(m);
  right_.resize(m);
  if (m == 0) {
    signatures_.push_back({});
    boundary_.push_back({});
    return;
  }
  // Leaf i lies entirely on one side of leaf j; the side of either ideal
  // endpoint decides it (a shared endpoint contributes zero).
  auto side_of_leaf = [&](std::size_t i, std::size_t j) -> std::int8_t {
    const auto& g = leaves_[i].geodesic();
    const double s = mink_inner(g.from(), leaves_[j].normal()) + mink_inner(g.to(), leaves_[j].normal());
    return s > 0.0 ? 1 : -1;
  };
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<std::int8_t> sig(m);
    for (std::size_t j = 0; j < m; ++j) sig[j] = (j == i) ? 0 : side_of_leaf(i, j);
    for (std::int8_t side : {std::int8_t{1}, std::int8_t{-1}}) {
      sig[i] = side;
      std::size_t node;
      if (auto found = find(sig)) {
        node = *found;
      } else {
        node = signatures_.size();
        signatures_.push_back(sig);
        boundary_.emplace_back();
      }
      boundary_[node].push_back(i);
      (side > 0 ? left_ : right_)[i] = node;
    }
  }
  if (signatures_.size() != m + 1) {
    std::ostringstream os;
    os << "complement of " << m << " disjoint leaves produced " << signatures_.size() << " regions";
    throw ValidationError(os.str());
  }
}

std::optional<std::size_t> ComponentTree::find(const std::vector<std::int8_t>& sig) const {
  for (std::size_t n = 0; n < signatures_.size(); ++n) {
    if (signatures_[n] == sig) return n;
  }
  return std::nullopt;
}

std::size_t ComponentTree::across(std::size_t node, std::size_t leaf) const {
  if (left_[leaf] == node) return right_[leaf];
  if (right_[leaf] == node) return left_[leaf];
  throw ValidationError("leaf does not bound the node");
}

std::optional<std::size_t> ComponentTree::try_locate(const MinkowskiPoint& p) const {
  std::vector<std::int8_t> sig(leaves_.size());
  for (std::size_t i = 0; i < leaves_.size(); ++i) {
    const double v = leaves_[i].signed_value(p);
    if (std::abs(v) <= tol::kSide) return std::nullopt;
    sig[i] = v > 0.0 ? 1 : -1;
  }
  return find(sig);
}

std::size_t ComponentTree::locate(const MinkowskiPoint& p) const {
  std::vector<std::int8_t> sig(leaves_.size());
  for (std::size_t i = 0; i < leaves_.size(); ++i) {
    const double v = leaves_[i].signed_value(p);
    if (std::abs(v) <= tol::kSide) throw BoundaryError("point lies on leaf '" + leaves_[i].id() + "'");
    sig[i] = v > 0.0 ? 1 : -1;
  }
  auto node = find(sig);
  if (!node) throw ValidationError("point has an unrealizable side signature");
  return *node;
}

std::size_t ComponentTree::locate_ideal(double phi) const {
  const Vec4 e = ideal_point(phi);
  std::vector<std::int8_t> sig(leaves_.size());
  for (std::size_t i = 0; i < leaves_.size(); ++i) {
    sig[i] = mink_inner(e, leaves_[i].normal()) > 0.0 ? 1 : -1;
  }
  auto node = find(sig);
  if (!node) throw BoundaryError("ideal point is a leaf endpoint");
  return *node;
}

// ---------------------------------------------------------------------------
// Windowed Hausdorff distance

namespace {

struct WindowedSegment {
  MinkowskiPoint anchor;
  Vec4 direction;
  HyperGeodesic geodesic;
  double half_length;
};

std::vector<WindowedSegment> windowed_segments(const FiniteLamination2& lam, double radius) {
  std::vector<WindowedSegment> out;
  const double ch = std::cosh(radius);
  for (const auto& leaf : lam.leaves()) {
    const auto& g = leaf.geodesic();
    const MinkowskiPoint c = g.anchor();
    const double d0 = hyp_dist(MinkowskiPoint::basepoint(), c);
    if (d0 >= radius) continue;
    out.push_back({c, g.direction(), g, std::acosh(ch / std::cosh(d0))});
  }
  return out;
}

double distance_to_segments(const MinkowskiPoint& p, const std::vector<WindowedSegment>& segs) {
  double best = kInfiniteDistance;
  for (const auto& s : segs) {
    const double param = std::clamp(s.geodesic.parameter_of(p), -s.half_length, s.half_length);
    const MinkowskiPoint q =
        MinkowskiPoint::normalized(std::cosh(param) * s.anchor.coords() + std::sinh(param) * s.direction);
    best = std::min(best, hyp_dist(p, q));
  }
  return best;
}

std::vector<MinkowskiPoint> sample_segments(const std::vector<WindowedSegment>& segs, double spacing) {
  std::vector<MinkowskiPoint> out;
  for (const auto& s : segs) {
    const int n = static_cast<int>(std::ceil(2.0 * s.half_length / spacing)) + 1;
    for (int i = 0; i < n; ++i) {
      const double param = -s.half_length + 2.0 * s.half_length * i / (n - 1);
      out.push_back(
          MinkowskiPoint::normalized(std::cosh(param) * s.anchor.coords() + std::sinh(param) * s.direction));
    }
  }
  return out;
}

double directed(const std::vector<WindowedSegment>& from, const std::vector<WindowedSegment>& to,
                double spacing) {
  double worst = 0.0;
  for (const auto& p : sample_segments(from, spacing)) worst = std::max(worst, distance_to_segments(p, to));
  return worst;
}

}  // namespace

std::vector<MinkowskiPoint> sample_support(const FiniteLamination2& lam, double radius, double spacing) {
  return sample_segments(windowed_segments(lam, radius), spacing);
}

double distance_to_support(const MinkowskiPoint& p, const FiniteLamination2& lam, double radius) {
  return distance_to_segments(p, windowed_segments(lam, radius));
}

double windowed_hausdorff(const FiniteLamination2& a, const FiniteLamination2& b, double radius) {
  if (!(radius > 0.0)) throw ParameterError("window radius must be positive");
  const auto sa = windowed_segments(a, radius);
  const auto sb = windowed_segments(b, radius);
  if (sa.empty() && sb.empty()) return 0.0;
  if (sa.empty() || sb.empty()) return kInfiniteDistance;
  const double spacing = 1e-3 * radius;
  return std::max(directed(sa, sb, spacing), directed(sb, sa, spacing));
}

}  // namespace hypbend

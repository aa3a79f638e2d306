#include "hypbend/pleated.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <sstream>

namespace hypbend {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  return r;
}


// Component of w tangent to the sheet at p.
Vec4 tangent_part(const MinkowskiPoint& p, const Vec4& w) { return w + mink_inner(w, p.coords()) * p.coords(); }

}  // namespace

// ---------------------------------------------------------------------------
// BendingData

BendingData::BendingData(FiniteLamination2 lamination, int side) : lamination_(std::move(lamination)), side_(side) {
  if (side != 1 && side != -1) throw ValidationError("bending side must be +1 or -1");
  for (const auto& leaf : lamination_.leaves()) {
    if (!(leaf.weight() > 0.0) || leaf.weight() > kPi + 1e-12) {
      std::ostringstream os;
      os << "bending weight of leaf '" << leaf.id() << "' is " << leaf.weight() << ", outside (0, pi]";
      throw ValidationError(os.str());
    }
  }
}

// ---------------------------------------------------------------------------
// SupportPencil

SupportPencil::SupportPencil(HyperPlane single) : single_(single) {}

SupportPencil::SupportPencil(LorentzMap near_map, HyperGeodesic axis, int side, double weight, Vec4 base_normal)
    : near_map_(near_map), axis_(axis), side_(side), weight_(weight), base_normal_(base_normal) {}

HyperPlane SupportPencil::at(double s) const {
  if (single_) return *single_;
  if (s < -1e-12 || s > weight_ + 1e-12) throw ParameterError("pencil parameter outside [0, weight]");
  const LorentzMap r = rotation_about_geodesic(*axis_, side_ * s);
  return HyperPlane::lift(near_map_->matrix() * (r.matrix() * base_normal_));
}

// ---------------------------------------------------------------------------
// PleatedSurface

HyperPlane PleatedSurface::base_normal() const {
  return HyperPlane::from_normal(Vec4(0.0, 0.0, 0.0, static_cast<double>(side())));
}

PleatedSurface PleatedSurface::build(const BendingData& data) {
  PleatedSurface ps(data, ComponentTree(data.lamination()));
  const auto& lam = data.lamination();
  const auto& tree = ps.tree_;
  const std::size_t n = tree.node_count();

  if (auto base = tree.try_locate(MinkowskiPoint::basepoint())) {
    ps.base_ = *base;
  } else {
    // The basepoint lies on a leaf; take the component on its left.
    for (std::size_t i = 0; i < lam.size(); ++i) {
      if (std::abs(lam.leaves()[i].signed_value(MinkowskiPoint::basepoint())) <= tol::kSide) {
        ps.base_ = tree.left_of(i);
        break;
      }
    }
  }

  ps.maps_.assign(n, LorentzMap::identity());
  std::vector<bool> seen(n, false);
  seen[ps.base_] = true;
  std::deque<std::size_t> queue{ps.base_};
  while (!queue.empty()) {
    const std::size_t p = queue.front();
    queue.pop_front();
    for (std::size_t leaf : tree.boundary(p)) {
      const std::size_t q = tree.across(p, leaf);
      if (seen[q]) continue;
      const Leaf2& l = lam.leaves()[leaf];
      const HyperGeodesic axis = tree.left_of(leaf) == p ? l.geodesic() : l.geodesic().reversed();
      const LorentzMap r = rotation_about_geodesic(axis, data.side() * l.weight());
      ps.maps_[q] = (ps.maps_[p] * r).renormalized();
      seen[q] = true;
      queue.push_back(q);
    }
  }

  const Vec4 u0(0.0, 0.0, 0.0, static_cast<double>(data.side()));
  ps.inverses_.reserve(n);
  ps.planes_.reserve(n);
  for (std::size_t node = 0; node < n; ++node) {
    ps.inverses_.push_back(ps.maps_[node].inverse());
    ps.planes_.push_back(HyperPlane::lift(ps.maps_[node].matrix() * u0));
  }

  // Ideal boundary of every component: arcs of the circle between
  // consecutive leaf endpoints, plus the endpoints of its boundary leaves.
  ps.ideal_arcs_.assign(n, {});
  ps.ideal_vertices_.assign(n, {});
  if (lam.empty()) {
    ps.ideal_arcs_[0].push_back({0.0, kTwoPi});
  } else {
    std::vector<double> ends;
    for (const auto& l : lam.leaves()) {
      ends.push_back(wrap_angle(l.theta1()));
      ends.push_back(wrap_angle(l.theta2()));
    }
    std::sort(ends.begin(), ends.end());
    ends.erase(std::unique(ends.begin(), ends.end(), [](double a, double b) { return std::abs(a - b) < 1e-13; }),
               ends.end());
    for (std::size_t k = 0; k < ends.size(); ++k) {
      const double a = ends[k];
      const double b = (k + 1 < ends.size()) ? ends[k + 1] : ends[0] + kTwoPi;
      if (b - a < 1e-13) continue;
      const std::size_t node = tree.locate_ideal(0.5 * (a + b));
      ps.ideal_arcs_[node].push_back({a, b});
    }
    for (std::size_t node = 0; node < n; ++node) {
      for (std::size_t leaf : tree.boundary(node)) {
        ps.ideal_vertices_[node].push_back(lam.leaves()[leaf].geodesic().from());
        ps.ideal_vertices_[node].push_back(lam.leaves()[leaf].geodesic().to());
      }
    }
  }
  return ps;
}

HyperPlane PleatedSurface::pencil_plane(std::size_t leaf, std::size_t from, double s) const {
  const Leaf2& l = lamination().leaves()[leaf];
  if (tree_.left_of(leaf) != from && tree_.right_of(leaf) != from) {
    throw ValidationError("leaf '" + l.id() + "' does not bound the component");
  }
  const HyperGeodesic axis = tree_.left_of(leaf) == from ? l.geodesic() : l.geodesic().reversed();
  const LorentzMap r = rotation_about_geodesic(axis, side() * s);
  const Vec4 u0(0.0, 0.0, 0.0, static_cast<double>(side()));
  return HyperPlane::lift(maps_[from].matrix() * (r.matrix() * u0));
}

MinkowskiPoint PleatedSurface::evaluate(const MinkowskiPoint& p) const {
  if (auto node = tree_.try_locate(p)) return maps_[*node].apply(p);
  std::optional<MinkowskiPoint> image;
  for (std::size_t i = 0; i < lamination().size(); ++i) {
    if (std::abs(lamination().leaves()[i].signed_value(p)) > tol::kSide) continue;
    const MinkowskiPoint a = maps_[tree_.left_of(i)].apply(p);
    const MinkowskiPoint b = maps_[tree_.right_of(i)].apply(p);
    const double gap = (a.coords() - b.coords()).cwiseAbs().maxCoeff() / std::max(1.0, a.t());
    if (gap > tol::kInvariant) {
      std::ostringstream os;
      os << "images of a leaf point disagree by " << gap;
      throw ValidationError(os.str());
    }
    if (!image) image = a;
  }
  if (!image) throw ValidationError("point is neither on a leaf nor in a component");
  return *image;
}

std::vector<MinkowskiPoint> PleatedSurface::sample_component(std::size_t node) const {
  std::vector<MinkowskiPoint> out;
  const auto& lam = lamination();
  for (std::size_t leaf : tree_.boundary(node)) {
    const Leaf2& l = lam.leaves()[leaf];
    const double sigma = tree_.signature(node)[leaf];
    for (double s : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
      const MinkowskiPoint g = l.geodesic().point_at(s);
      for (double d : {0.05, 0.5, 1.5}) {
        const Vec4 x = std::cosh(d) * g.coords() + std::sinh(d) * sigma * l.normal();
        const MinkowskiPoint p = MinkowskiPoint::normalized(x);
        if (tree_.try_locate(p) == node) out.push_back(p);
      }
    }
  }
  for (double r : {0.0, 0.5, 1.0, 2.0, 3.0}) {
    const int count = r == 0.0 ? 1 : 12;
    for (int k = 0; k < count; ++k) {
      const MinkowskiPoint p = MinkowskiPoint::from_polar(r, kTwoPi * k / count + 0.1);
      if (tree_.try_locate(p) == node) out.push_back(p);
    }
  }
  return out;
}

double PleatedSurface::closure_max(std::size_t node, const Vec4& v) const {
  const Vec4 w = inverses_[node].matrix() * v;
  double best = -std::numeric_limits<double>::infinity();
  auto value = [&](double phi) { return -w[0] + w[1] * std::cos(phi) + w[2] * std::sin(phi); };
  const double crit = std::atan2(w[2], w[1]);
  for (const auto& arc : ideal_arcs_[node]) {
    best = std::max({best, value(arc.from), value(arc.to)});
    const double off = wrap_angle(crit - arc.from);
    if (off <= arc.to - arc.from) best = std::max(best, -w[0] + std::hypot(w[1], w[2]));
  }
  for (const auto& e : ideal_vertices_[node]) best = std::max(best, mink_inner(e, w));
  return best / std::max(1.0, w.cwiseAbs().maxCoeff());
}

double PleatedSurface::support_violation(const HyperPlane& u) const {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t node = 0; node < tree_.node_count(); ++node) {
    worst = std::max(worst, closure_max(node, u.normal()));
  }
  return worst;
}

PleatedSurface::Projection PleatedSurface::project(const MinkowskiPoint& z) const {
  const auto& lam = lamination();
  std::optional<Projection> best;
  auto consider = [&](const MinkowskiPoint& pre, std::size_t node, double d) {
    if (!best || d < best->distance) best = Projection{pre, node, d};
  };
  for (std::size_t node = 0; node < tree_.node_count(); ++node) {
    const MinkowskiPoint wp = inverses_[node].apply(z);
    const Vec4& w = wp.coords();
    const MinkowskiPoint foot =
        MinkowskiPoint::lift(Eigen::Vector3d(w[1], w[2], 0.0) / std::sqrt(1.0 + w[3] * w[3]));
    bool inside = true;
    for (std::size_t leaf : tree_.boundary(node)) {
      if (lam.leaves()[leaf].signed_value(foot) * tree_.signature(node)[leaf] < 0.0) {
        inside = false;
        break;
      }
    }
    if (inside) {
      consider(foot, node, std::asinh(std::abs(w[3])));
      continue;
    }
    for (std::size_t leaf : tree_.boundary(node)) {
      const HyperGeodesic& g = lam.leaves()[leaf].geodesic();
      const MinkowskiPoint f = g.foot_of(wp);
      consider(f, node, hyp_dist(wp, f));
    }
  }
  return *best;
}

// ---------------------------------------------------------------------------
// Support planes and predicates

bool satisfies_support_condition(const PleatedSurface& ps, double tolerance) {
  for (std::size_t p = 0; p < ps.tree().node_count(); ++p) {
    for (std::size_t q = 0; q < ps.tree().node_count(); ++q) {
      if (p != q && ps.closure_max(q, ps.flat_plane(p).normal()) > tolerance) return false;
    }
  }
  return true;
}

SupportPencil support_planes_at(const PleatedSurface& ps, const MinkowskiPoint& p) {
  if (!satisfies_support_condition(ps)) {
    throw UnsupportedError("surface is not convex: some flat crosses the plane of another");
  }
  if (auto node = ps.tree().try_locate(p)) return SupportPencil(ps.flat_plane(*node));
  const auto& lam = ps.lamination();
  for (std::size_t i = 0; i < lam.size(); ++i) {
    const Leaf2& l = lam.leaves()[i];
    if (std::abs(l.signed_value(p)) > tol::kSide) continue;
    const std::size_t near = ps.tree().left_of(i);
    return SupportPencil(ps.component_map(near), l.geodesic(), ps.side(), l.weight(),
                         Vec4(0.0, 0.0, 0.0, static_cast<double>(ps.side())));
  }
  throw ValidationError("point is neither on a leaf nor in a component");
}

double witness_margin(const PleatedSurface& ps, const MinkowskiPoint& q) {
  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t node = 0; node < ps.tree().node_count(); ++node) {
    margin = std::min(margin, -ps.flat_plane(node).signed_value(q));
  }
  return margin;
}

namespace {

// Ascent of the min-margin function from a start point: move along the
// summed inward normals of the nearly active planes.
MinkowskiPoint ascend(const PleatedSurface& ps, MinkowskiPoint q) {
  const std::size_t n = ps.tree().node_count();
  double h = 0.5;
  double current = witness_margin(ps, q);
  for (int iter = 0; iter < 200 && h > 1e-6; ++iter) {
    Vec4 dir = Vec4::Zero();
    for (std::size_t node = 0; node < n; ++node) {
      const double m = -ps.flat_plane(node).signed_value(q);
      if (m <= current + 1e-3 * std::max(1.0, std::abs(current))) dir -= ps.flat_plane(node).normal();
    }
    Vec4 t = tangent_part(q, dir);
    const double len2 = mink_inner(t, t);
    if (!(len2 > 1e-24)) break;
    t /= std::sqrt(len2);
    if (q.t() * std::exp(h) > 1e7) {
      h *= 0.5;
      continue;
    }
    const MinkowskiPoint next = exp_map(q, t, h);
    const double m = witness_margin(ps, next);
    if (m > current) {
      q = next;
      current = m;
      h = std::min(h * 1.5, 4.0);
    } else {
      h *= 0.5;
    }
  }
  return q;
}

}  // namespace

ConvexityReport is_convex(const PleatedSurface& ps) {
  ConvexityReport report;
  const std::size_t n = ps.tree().node_count();

  report.condition1 = true;
  report.worst_violation = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      if (p == q) continue;
      const double v = ps.closure_max(q, ps.flat_plane(p).normal());
      if (v > report.worst_violation) {
        report.worst_violation = v;
        if (v > tol::kSupport) report.violated_pair = std::make_pair(p, q);
      }
    }
  }
  if (n == 1) report.worst_violation = 0.0;
  report.condition1 = !report.violated_pair.has_value();

  // Witness search: from sampled flat points, march along the averaged
  // inward normal, then polish with a max-min ascent.
  Vec4 inward = Vec4::Zero();
  for (std::size_t node = 0; node < n; ++node) inward -= ps.flat_plane(node).normal();

  std::optional<MinkowskiPoint> best;
  double best_margin = -std::numeric_limits<double>::infinity();
  auto offer = [&](const MinkowskiPoint& q) {
    const double m = witness_margin(ps, q);
    if (m > best_margin) {
      best_margin = m;
      best = q;
    }
  };
  std::vector<std::size_t> order{ps.base_node()};
  for (std::size_t node = 0; node < n; ++node) {
    if (node != ps.base_node()) order.push_back(node);
  }
  for (std::size_t node : order) {
    auto samples = ps.sample_component(node);
    if (samples.size() > 6) samples.erase(samples.begin() + 6, samples.end());
    for (const auto& x : samples) {
      const MinkowskiPoint fx = ps.component_map(node).apply(x);
      for (const Vec4& w : {inward, Vec4(-ps.flat_plane(node).normal())}) {
        Vec4 t = tangent_part(fx, w);
        const double len2 = mink_inner(t, t);
        if (!(len2 > 1e-24)) continue;
        t /= std::sqrt(len2);
        for (double s = 1e-3; s < 16.0; s *= 2.0) offer(exp_map(fx, t, s));
      }
    }
    if (best_margin >= kWitnessMargin) break;
  }
  if (best && best_margin < kWitnessMargin) offer(ascend(ps, *best));

  report.witness = best;
  report.witness_margin = best_margin;
  report.condition2 = best_margin >= kWitnessMargin;
  report.convex = report.condition1 && report.condition2;
  return report;
}

double coplanarity_residual(const PleatedSurface& ps) {
  double worst = 0.0;
  for (std::size_t node = 0; node < ps.tree().node_count(); ++node) {
    for (const auto& x : ps.sample_component(node)) {
      worst = std::max(worst, std::abs(ps.component_map(node).apply(x).z()));
    }
  }
  return worst;
}

bool is_even(const PleatedSurface& ps) {
  if (ps.lamination().empty()) return false;
  if (!satisfies_support_condition(ps)) return false;
  return coplanarity_residual(ps) <= tol::kSupport;
}

double bending_measure(const PleatedSurface& ps, const Arc2& k) { return arc_measure(k, ps.lamination()); }

ChordComparison chord_comparison(const PleatedSurface& ps, const MinkowskiPoint& a, const MinkowskiPoint& b) {
  const Arc2 k(a, b);
  const auto cs = crossings(k, ps.lamination());
  double bending = 0.0;
  for (const auto& c : cs) bending += ps.lamination().leaves()[c.leaf_index].weight();
  if (bending >= kPi / 2.0) {
    std::ostringstream os;
    os << "bending " << bending << " of the segment is not below pi/2";
    throw OutOfRegimeError(os.str());
  }
  if (!satisfies_support_condition(ps)) throw UnsupportedError("surface is not convex");

  std::vector<MinkowskiPoint> path{ps.evaluate(a)};
  for (const auto& c : cs) path.push_back(ps.evaluate(k.point_at(c.parameter)));
  path.push_back(ps.evaluate(b));

  ChordComparison out{};
  out.intrinsic_length = k.length();
  out.chord_length = hyp_dist(path.front(), path.back());
  out.bending = bending;
  auto angle = [](const Vec4& u, const Vec4& v) {
    const double c = mink_inner(u, v);
    const Vec4 w = u - c * v;
    return std::atan2(std::sqrt(std::max(0.0, mink_inner(w, w))), c);
  };
  out.turning_sum = 0.0;
  for (std::size_t i = 1; i + 1 < path.size(); ++i) {
    const Vec4 in = -tangent_towards(path[i], path[i - 1]);
    const Vec4 next = tangent_towards(path[i], path[i + 1]);
    out.turning_sum += angle(in, next);
  }
  out.exterior_angle_sum = 0.0;
  if (out.chord_length > tol::kConstruction) {
    const MinkowskiPoint& p0 = path.front();
    const MinkowskiPoint& p1 = path.back();
    out.exterior_angle_sum += angle(tangent_towards(p0, path[1]), tangent_towards(p0, p1));
    out.exterior_angle_sum += angle(tangent_towards(p1, path[path.size() - 2]), tangent_towards(p1, p0));
  }
  return out;
}

}  // namespace hypbend

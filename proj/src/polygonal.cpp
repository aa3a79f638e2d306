#include "hypbend/polygonal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

namespace hypbend {

namespace {

constexpr double kPi = std::numbers::pi;
const double kMaxEpsilon = std::log(3.0) / 2.0;

// Crossings of the arc with the components they separate.
struct ArcPath {
  std::vector<Crossing> cs;
  std::vector<std::size_t> nodes;  // nodes[j] lies between crossing j-1 and j
  std::vector<MinkowskiPoint> ys;
  std::vector<double> weights;
};

ArcPath arc_path(const PleatedSurface& ps, const Arc2& k) {
  ArcPath path;
  path.cs = crossings(k, ps.lamination());
  path.nodes.push_back(ps.tree().locate(k.from()));
  for (const auto& c : path.cs) {
    path.nodes.push_back(ps.tree().across(path.nodes.back(), c.leaf_index));
    path.ys.push_back(k.point_at(c.parameter));
    path.weights.push_back(ps.lamination().leaves()[c.leaf_index].weight());
  }
  return path;
}

bool segments_meet(const Eigen::Vector2d& p, const Eigen::Vector2d& q, const Eigen::Vector2d& a,
                   const Eigen::Vector2d& b, double eps) {
  auto cross = [](const Eigen::Vector2d& u, const Eigen::Vector2d& v) { return u.x() * v.y() - u.y() * v.x(); };
  auto point_segment = [](const Eigen::Vector2d& x, const Eigen::Vector2d& s0, const Eigen::Vector2d& s1) {
    const Eigen::Vector2d d = s1 - s0;
    const double len2 = d.squaredNorm();
    double t = len2 > 0.0 ? (x - s0).dot(d) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return (s0 + t * d - x).norm();
  };
  const double d1 = cross(q - p, a - p);
  const double d2 = cross(q - p, b - p);
  const double d3 = cross(b - a, p - a);
  const double d4 = cross(b - a, q - a);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  return point_segment(a, p, q) <= eps || point_segment(b, p, q) <= eps || point_segment(p, a, b) <= eps ||
         point_segment(q, a, b) <= eps;
}

double scaled_on_plane(const MinkowskiPoint& x, const HyperPlane& u) { return std::abs(u.signed_value(x)) / x.t(); }

class Builder {
 public:
  Builder(const PleatedSurface& ps, const Arc2& k, double delta) : ps_(ps), k_(k), delta_(delta), path_(arc_path(ps, k)) {}

  ApproxEntry flat(double t) const {
    std::size_t j = 0;
    while (j < path_.cs.size() && path_.cs[j].parameter < t) ++j;
    return ApproxEntry{t, k_.point_at(t), ps_.flat_plane(path_.nodes[j]), kNoCrossing, 0.0, static_cast<double>(j)};
  }

  ApproxEntry pencil(std::size_t j, double s) const {
    const HyperPlane u = ps_.pencil_plane(path_.cs[j].leaf_index, path_.nodes[j], s);
    return ApproxEntry{path_.cs[j].parameter, path_.ys[j], u, j, s, static_cast<double>(j) + s / path_.weights[j]};
  }

  // Both planes belong to one pencil (or coincide as chain members).
  static bool one_pencil(const ApproxEntry& a, const ApproxEntry& b) {
    const double lo = std::min(a.chain, b.chain);
    const double hi = std::max(a.chain, b.chain);
    if (hi - lo < 1e-12) return true;
    const double j = std::floor(lo + 1e-12);
    return hi <= j + 1.0 + 1e-12;
  }

  // 1: kept, 2: disjoint planes, 3: projection misses the subarc.
  int configuration(const ApproxEntry& a, const ApproxEntry& b) const {
    if (one_pencil(a, b)) return 1;
    if (planes_coincide(a.plane, b.plane)) return 3;
    if (!planes_meet(a.plane, b.plane)) return 2;
    return projection_meets_segment(ps_, a.plane, b.plane, a.point, b.point) ? 1 : 3;
  }

  // Pencil members strictly between the chain positions of a and b.
  std::vector<ApproxEntry> candidates(const ApproxEntry& a, const ApproxEntry& b) const {
    std::vector<ApproxEntry> out;
    const std::size_t j0 = static_cast<std::size_t>(std::floor(a.chain + 1e-12));
    for (std::size_t j = j0; j < path_.cs.size() && static_cast<double>(j) < b.chain; ++j) {
      for (double f : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const double chain = static_cast<double>(j) + f;
        if (chain <= a.chain + 1e-12 || chain >= b.chain - 1e-12) continue;
        out.push_back(pencil(j, f * path_.weights[j]));
      }
    }
    return out;
  }

  // Every pencil between a and b, cut into steps of angle below delta.
  std::vector<ApproxEntry> full_chain(const ApproxEntry& a, const ApproxEntry& b, double delta) const {
    std::vector<ApproxEntry> out;
    const std::size_t first = static_cast<std::size_t>(std::floor(a.chain + 1e-12));
    const std::size_t last = static_cast<std::size_t>(std::ceil(b.chain - 1e-12));
    for (std::size_t j = first; j < last && j < path_.cs.size(); ++j) {
      const double w = path_.weights[j];
      const double s0 = j == first ? std::clamp((a.chain - j) * w, 0.0, w) : 0.0;
      const double s1 = j + 1 == last ? std::clamp((b.chain - j) * w, 0.0, w) : w;
      if (s1 - s0 <= 1e-15) continue;
      const auto q = static_cast<std::size_t>(std::floor((s1 - s0) / delta)) + 1;
      for (std::size_t m = 1; m <= q; ++m) {
        const double s = m == q ? s1 : s0 + (s1 - s0) * static_cast<double>(m) / static_cast<double>(q);
        ApproxEntry e = pencil(j, s);
        if (m == q && j + 1 == last && std::abs(e.chain - b.chain) < 1e-12 &&
            std::abs(e.parameter - b.parameter) < 1e-12) {
          continue;
        }
        out.push_back(e);
      }
    }
    return out;
  }

  std::optional<std::vector<ApproxEntry>> resolve(const ApproxEntry& a, const ApproxEntry& b) const {
    const auto cands = candidates(a, b);
    std::optional<std::vector<ApproxEntry>> best;
    double best_cost = std::numeric_limits<double>::infinity();
    for (const auto& c : cands) {
      if (configuration(a, c) != 1 || configuration(c, b) != 1) continue;
      const double cost = plane_angle(a.plane, c.plane) + plane_angle(c.plane, b.plane);
      if (cost < best_cost) {
        best_cost = cost;
        best = std::vector<ApproxEntry>{c};
      }
    }
    if (best) return best;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (configuration(a, cands[i]) != 1) continue;
      for (std::size_t j = i + 1; j < cands.size(); ++j) {
        if (configuration(cands[i], cands[j]) != 1 || configuration(cands[j], b) != 1) continue;
        const double cost = plane_angle(a.plane, cands[i].plane) + plane_angle(cands[i].plane, cands[j].plane) +
                            plane_angle(cands[j].plane, b.plane);
        if (cost < best_cost) {
          best_cost = cost;
          best = std::vector<ApproxEntry>{cands[i], cands[j]};
        }
      }
    }
    return best;
  }

  const ArcPath& path() const { return path_; }

 private:
  const PleatedSurface& ps_;
  const Arc2& k_;
  double delta_;
  ArcPath path_;
};

}  // namespace

double PolygonalApproximation::angle_sum() const {
  double total = 0.0;
  for (std::size_t i = 1; i < entries.size(); ++i) total += plane_angle(entries[i - 1].plane, entries[i].plane);
  return total;
}

double PolygonalApproximation::max_angle() const {
  double worst = 0.0;
  for (std::size_t i = 1; i < entries.size(); ++i) {
    worst = std::max(worst, plane_angle(entries[i - 1].plane, entries[i].plane));
  }
  return worst;
}

double PolygonalApproximation::max_spacing() const {
  double worst = 0.0;
  for (std::size_t i = 1; i < entries.size(); ++i) {
    worst = std::max(worst, hyp_dist(entries[i - 1].point, entries[i].point));
  }
  return worst;
}

double length_bound(double epsilon, double delta, double arc_length) {
  const double c = kPi / delta + 1.0;
  return 4.0 / epsilon * c * arc_length + 4.0 * c;
}

bool projection_meets_segment(const PleatedSurface& ps, const HyperPlane& u, const HyperPlane& v,
                              const MinkowskiPoint& a, const MinkowskiPoint& b) {
  const auto line = plane_intersection(u, v);
  if (!line) return false;
  const MinkowskiPoint mid = MinkowskiPoint::normalized(a.coords() + b.coords());
  const double centre = line->parameter_of(ps.evaluate(mid));
  constexpr int kSamples = 321;
  constexpr double kHalfWidth = 8.0;
  const Eigen::Vector2d ka = a.klein();
  const Eigen::Vector2d kb = b.klein();
  std::optional<Eigen::Vector2d> prev;
  for (int i = 0; i < kSamples; ++i) {
    const double s = centre - kHalfWidth + 2.0 * kHalfWidth * i / (kSamples - 1);
    const Eigen::Vector2d h = ps.project(line->point_at(s)).preimage.klein();
    if (prev && segments_meet(*prev, h, ka, kb, 1e-10)) return true;
    if (!prev && segments_meet(h, h, ka, kb, 1e-10)) return true;
    prev = h;
  }
  return false;
}

PolygonalApproximation polygonal_approximation(const PleatedSurface& ps, const Arc2& k, double delta,
                                               double epsilon) {
  if (!(epsilon > 0.0) || !(epsilon < kMaxEpsilon)) {
    std::ostringstream os;
    os << "epsilon must lie in (0, log(3)/2 = " << kMaxEpsilon << "), got " << epsilon;
    throw ParameterError(os.str());
  }
  if (!(delta > 0.0)) throw ParameterError("delta must be positive");
  if (!satisfies_support_condition(ps)) throw UnsupportedError("surface is not convex");

  Builder builder(ps, k, delta);
  const auto& path = builder.path();
  PolygonalApproximation out;
  out.delta = delta;
  out.epsilon = epsilon;

  // (i) samples with spacing below epsilon, pushed off the leaves.
  const double len = k.length();
  const auto p = static_cast<std::size_t>(std::floor(len / epsilon));
  const double step = 1.0 / static_cast<double>(p + 1);
  const double slack = epsilon - len * step;
  const double nudge = std::min(slack / 4.0, 1e-6) / len;
  std::vector<ApproxEntry> samples;
  for (std::size_t m = 0; m <= p + 1; ++m) {
    double t = static_cast<double>(m) * step;
    for (const auto& c : path.cs) {
      if (std::abs(t - c.parameter) * len < 1e-9) t = c.parameter + (t <= c.parameter ? -nudge : nudge);
    }
    samples.push_back(builder.flat(std::clamp(t, 0.0, 1.0)));
  }

  // (ii) resolve the configurations of consecutive samples.
  std::vector<ApproxEntry> resolved{samples.front()};
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const ApproxEntry& a = resolved.back();
    const ApproxEntry& b = samples[i];
    const int config = builder.configuration(a, b);
    ++out.configuration_counts[config - 1];
    if (config != 1) {
      if (auto inserted = builder.resolve(a, b)) {
        for (auto& e : *inserted) resolved.push_back(e);
      } else {
        ++out.full_pencil_fallbacks;
        for (auto& e : builder.full_chain(a, b, std::numeric_limits<double>::infinity())) resolved.push_back(e);
      }
    }
    resolved.push_back(b);
  }

  // (iii) subdivide wide angles along the pencils.
  out.entries.push_back(resolved.front());
  for (std::size_t i = 1; i < resolved.size(); ++i) {
    const ApproxEntry& a = resolved[i - 1];
    const ApproxEntry& b = resolved[i];
    if (plane_angle(a.plane, b.plane) >= delta) {
      for (auto& e : builder.full_chain(a, b, delta)) out.entries.push_back(e);
    }
    out.entries.push_back(b);
  }
  return out;
}

std::vector<InvariantViolation> check_polygonal_invariants(const PleatedSurface& ps, const Arc2& k,
                                                           const std::vector<ApproxEntry>& entries) {
  std::vector<InvariantViolation> out;
  auto report = [&](int which, std::size_t i, const std::string& detail) { out.push_back({which, i, detail}); };
  const auto& lam = ps.lamination();

  // 1: ordering along the arc, recomputed from the points.
  std::vector<double> along;
  for (const auto& e : entries) {
    const double d0 = hyp_dist(k.from(), e.point);
    const double d1 = hyp_dist(e.point, k.to());
    if (std::abs(d0 + d1 - k.length()) > 1e-7) report(1, along.size(), "sample point is off the arc");
    along.push_back(d0);
  }
  for (std::size_t i = 1; i < along.size(); ++i) {
    if (along[i] < along[i - 1] - 1e-9) report(1, i, "sample points out of order");
  }

  // 2: support planes.
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    const double on = scaled_on_plane(ps.evaluate(e.point), e.plane);
    if (on > tol::kSupport) {
      std::ostringstream os;
      os << "plane misses the image point by " << on;
      report(2, i, os.str());
    }
    const double v = ps.support_violation(e.plane);
    if (v > tol::kSupport) {
      std::ostringstream os;
      os << "surface crosses the plane by " << v;
      report(2, i, os.str());
    }
  }

  // 3: consecutive planes meet.
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (!planes_meet(entries[i - 1].plane, entries[i].plane)) report(3, i, "consecutive planes are disjoint");
  }

  // 4: pencil order at repeated points.
  auto same_point = [](const MinkowskiPoint& p, const MinkowskiPoint& q) {
    return (p.coords() - q.coords()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, p.t());
  };
  for (std::size_t i = 1; i + 1 < entries.size(); ++i) {
    if (!same_point(entries[i - 1].point, entries[i].point) || !same_point(entries[i].point, entries[i + 1].point)) {
      continue;
    }
    const HyperPlane& prev = entries[i - 1].plane;
    const HyperPlane& cur = entries[i].plane;
    const HyperPlane& next = entries[i + 1].plane;
    const MinkowskiPoint a = ps.evaluate(entries[i].point);
    // Orthonormal tangent basis of the plane at a.
    const Vec4 u = cur.normal();
    Eigen::Matrix4d basis;
    basis.col(0) = Vec4(0, 1, 0, 0);
    basis.col(1) = Vec4(0, 0, 1, 0);
    basis.col(2) = Vec4(0, 0, 0, 1);
    basis.col(3) = Vec4(1, 0, 0, 0);
    std::vector<Vec4> frame;
    for (int c = 0; c < 4 && frame.size() < 2; ++c) {
      Vec4 w = basis.col(c);
      w += mink_inner(w, a.coords()) * a.coords();
      w -= mink_inner(w, u) * u;
      for (const auto& f : frame) w -= mink_inner(w, f) * f;
      const double n2 = mink_inner(w, w);
      if (n2 > 1e-8) frame.push_back(w / std::sqrt(n2));
    }
    bool ordered = false;
    for (int step = 0; step < 360 && !ordered && frame.size() == 2; ++step) {
      const double phi = 2.0 * kPi * step / 360.0;
      const Vec4 dir = std::cos(phi) * frame[0] + std::sin(phi) * frame[1];
      for (double r : {1e-3, 1e-2, 0.1, 1.0}) {
        const MinkowskiPoint q = exp_map(a, dir, r);
        if (next.signed_value(q) < -1e-12 && prev.signed_value(q) > 1e-12) {
          ordered = true;
          break;
        }
      }
    }
    if (!ordered && !planes_coincide(prev, cur) && !planes_coincide(cur, next)) {
      report(4, i, "planes at a repeated point are not pencil-ordered");
    }
  }

  // 5: the intersection line projects onto the subarc.
  for (std::size_t i = 1; i < entries.size(); ++i) {
    const auto& a = entries[i - 1];
    const auto& b = entries[i];
    if (planes_coincide(a.plane, b.plane)) continue;
    // A leaf image lying in both planes and met by the subarc.
    bool shared_leaf = false;
    for (std::size_t l = 0; l < lam.size() && !shared_leaf; ++l) {
      const Leaf2& leaf = lam.leaves()[l];
      const double va = leaf.signed_value(a.point);
      const double vb = leaf.signed_value(b.point);
      const bool met = std::abs(va) <= tol::kSide || std::abs(vb) <= tol::kSide || (va > 0.0) != (vb > 0.0);
      if (!met) continue;
      const LorentzMap& m = ps.component_map(ps.tree().left_of(l));
      const Vec4 e0 = m.apply(leaf.geodesic().from());
      const Vec4 e1 = m.apply(leaf.geodesic().to());
      auto contains = [&](const HyperPlane& u) {
        return std::abs(mink_inner(e0, u.normal())) <= 1e-9 * e0[0] &&
               std::abs(mink_inner(e1, u.normal())) <= 1e-9 * e1[0];
      };
      shared_leaf = contains(a.plane) && contains(b.plane);
    }
    if (shared_leaf) continue;
    if (!planes_meet(a.plane, b.plane) || !projection_meets_segment(ps, a.plane, b.plane, a.point, b.point)) {
      report(5, i, "projection of the plane intersection misses the subarc");
    }
  }
  return out;
}

double default_sample_spacing() { return std::min(0.5, kMaxEpsilon - 1e-3); }

ApproxReport approx_report(const PleatedSurface& ps, const Arc2& k, double alpha, double s) {
  if (!(alpha > 0.0) || !(alpha < kPi / 2.0)) throw ParameterError("alpha must lie in (0, pi/2)");
  if (!(s > 0.0) || !(s < std::min(1.0, kMaxEpsilon))) throw ParameterError("s must lie in (0, min(1, log(3)/2))");
  const auto approx = polygonal_approximation(ps, k, alpha, s);
  ApproxReport r{};
  r.angle_sum = approx.angle_sum();
  r.exact_measure = bending_measure(ps, k);
  r.error = std::abs(r.angle_sum - r.exact_measure);
  r.length = approx.length();
  r.arc_length = k.length();
  r.bound = length_bound(s, alpha, r.arc_length);
  r.ratio = r.error / (alpha * r.arc_length);
  r.alpha = alpha;
  r.s = s;
  return r;
}

}  // namespace hypbend

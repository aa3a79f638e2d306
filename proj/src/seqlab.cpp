#include "hypbend/seqlab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

namespace hypbend {

namespace {
constexpr double kPi = std::numbers::pi;

bool is_pi(double w) { return std::abs(w - kPi) <= 1e-12; }
}  // namespace

double WeightPath::at(long n) const {
  const double x = static_cast<double>(n);
  switch (kind) {
    case Kind::Constant:
      return target;
    case Kind::Harmonic:
      return target - scale / x;
    case Kind::Geometric:
      return target * (1.0 - std::pow(ratio, x));
    case Kind::Oscillating:
      return target + ((n % 2 == 0) ? scale : -scale);
  }
  return target;
}

void FamilySpec::validate() const {
  if (indices.empty()) throw ParameterError("family has no indices");
  if (!std::is_sorted(indices.begin(), indices.end()) || indices.front() < 1) {
    throw ParameterError("family indices must be positive and increasing");
  }
  for (const auto& leaf : leaves) {
    auto it = weights.find(leaf.id);
    if (it == weights.end()) throw ParameterError("no weight path for leaf '" + leaf.id + "'");
    for (long n : indices) {
      const double w = it->second.at(n);
      if (!(w > 0.0) || w > kPi + 1e-12) {
        std::ostringstream os;
        os << "weight of '" << leaf.id << "' at n = " << n << " is " << w << ", outside (0, pi]";
        throw ValidationError(os.str());
      }
    }
  }
}

FiniteLamination2 FamilySpec::lamination_at(long n) const {
  std::vector<Leaf2> out;
  for (const auto& leaf : leaves) {
    out.push_back(Leaf2::make(leaf.id, leaf.theta1, leaf.theta2, std::min(weights.at(leaf.id).at(n), kPi)));
  }
  return FiniteLamination2(std::move(out));
}

std::vector<long> log_spaced_indices(long first, long last, std::size_t count) {
  if (first < 1 || last < first || count < 1) throw ParameterError("bad index range");
  std::set<long> out{first, last};
  if (count > 1) {
    const double a = std::log(static_cast<double>(first));
    const double b = std::log(static_cast<double>(last));
    for (std::size_t i = 0; i < count; ++i) {
      out.insert(std::lround(std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1))));
    }
  }
  return {out.begin(), out.end()};
}

const char* to_string(LimitClass c) {
  switch (c) {
    case LimitClass::Convex:
      return "convex";
    case LimitClass::Even:
      return "even";
    case LimitClass::NonConvergent:
      return "non-convergent";
  }
  return "?";
}

DichotomyReport run_dichotomy(const FamilySpec& spec, const std::vector<Arc2>& arcs, std::size_t tail,
                              long extrapolate_to) {
  spec.validate();
  DichotomyReport r;
  r.indices = spec.indices;
  r.extrapolate_to = extrapolate_to;
  const std::size_t count = spec.indices.size();
  const std::size_t start = count > tail ? count - tail : 0;

  std::vector<PleatedSurface> surfaces;
  for (long n : spec.indices) {
    surfaces.push_back(build_pleated(spec.data_at(n)));
    const auto verdict = is_convex(surfaces.back());
    r.convex.push_back(verdict.convex);
    if (!verdict.convex) r.excluded.push_back(n);
    r.coplanarity.push_back(coplanarity_residual(surfaces.back()));
  }
  const PleatedSurface& terminal = surfaces.back();
  r.terminal_residual = r.coplanarity.back();

  bool convergent = true;
  bool all_pi = !spec.leaves.empty();
  for (const auto& leaf : spec.leaves) {
    const WeightPath& w = spec.weights.at(leaf.id);
    convergent = convergent && w.converges();
    all_pi = all_pi && is_pi(w.target);
  }
  r.classification = !convergent ? LimitClass::NonConvergent : all_pi ? LimitClass::Even : LimitClass::Convex;

  // Residual model C / n fitted over the tail.
  double num = 0.0, den = 0.0;
  for (std::size_t i = start; i < count; ++i) {
    const double inv = 1.0 / static_cast<double>(spec.indices[i]);
    num += r.coplanarity[i] * inv;
    den += inv * inv;
  }
  r.extrapolated_residual = den > 0.0 ? num / den / static_cast<double>(extrapolate_to) : r.terminal_residual;

  if (r.classification == LimitClass::Even) {
    const double at_target = spec.indices.back() >= extrapolate_to ? r.terminal_residual : r.extrapolated_residual;
    r.classification_verified = at_target <= 1e-6 && satisfies_support_condition(terminal);
  } else if (r.classification == LimitClass::Convex) {
    const auto verdict = is_convex(terminal);
    r.witness = verdict.witness;
    r.witness_margin = verdict.witness_margin;
    r.witness_stable = verdict.convex;
    for (std::size_t i = start; i < count && r.witness_stable; ++i) {
      r.witness_stable = witness_margin(surfaces[i], *verdict.witness) >= kWitnessMargin;
    }
    r.classification_verified = verdict.convex && r.witness_stable;
  }

  for (const auto& arc : arcs) {
    ArcTraceReport t{};
    for (const auto& ps : surfaces) t.values.push_back(bending_measure(ps, arc));
    for (const auto& c : crossings(arc, terminal.lamination())) {
      const double target = spec.weights.at(c.leaf_id).target;
      t.limit += std::min(target, kPi);
      t.crossed.push_back(c.leaf_id);
      if (is_pi(target)) t.dirac_pi.push_back(c.leaf_id);
    }
    t.terminal_deviation = std::abs(t.values.back() - t.limit);
    t.converges = convergent && t.terminal_deviation <= 1e-4;
    r.arcs.push_back(std::move(t));
  }
  return r;
}

double flat_image_check(const PleatedSurface& ps) {
  if (ps.lamination().empty()) throw ParameterError("flat-image check needs a non-empty lamination");
  return coplanarity_residual(ps);
}

double translation_length(const LorentzMap& g) {
  // The characteristic polynomial of a Lorentz matrix is palindromic:
  // x^4 - t x^3 + s x^2 - t x + 1, so y = x + 1/x solves y^2 - t y + (s - 2) = 0
  // with roots 2 cosh(d) and 2 cos(theta).
  const Mat4& m = g.matrix();
  const double t = m.trace();
  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) s += m(i, i) * m(j, j) - m(i, j) * m(j, i);
  }
  const double disc = std::max(0.0, t * t - 4.0 * (s - 2.0));
  const double y_hi = 0.5 * (t + std::sqrt(disc));
  const double y_lo = 0.5 * (t - std::sqrt(disc));
  const double excess = 0.5 * y_hi - 1.0;
  if (excess > 1e-12) {
    const double d = std::log1p(excess + std::sqrt(excess * (excess + 2.0)));
    if (std::exp(d) > 1.0 + 1e-9) return d;
  }
  if ((m - Mat4::Identity()).cwiseAbs().maxCoeff() <= 1e-9) {
    throw NotLoxodromicError("identity", "the identity has no translation axis");
  }
  if (y_lo < 2.0 - 1e-9) throw NotLoxodromicError("elliptic", "elliptic isometry fixes an axis pointwise");
  throw NotLoxodromicError("parabolic", "parabolic isometry has no translation axis");
}

Leaf2 orthogonal_leaf(const std::string& id, double s, double weight) {
  const double phi = std::atan2(1.0 / std::cosh(s), std::tanh(s));
  return Leaf2::make(id, -phi, phi, weight);
}

namespace {

HyperGeodesic x_axis() { return HyperGeodesic::from_angles(kPi, 0.0); }

double ideal_angle(const Vec4& e) { return std::atan2(e[2], e[1]); }

}  // namespace

PeriodicPleating::PeriodicPleating(double period, std::vector<Leaf2> seeds, int side, int copies)
    : period_(period),
      a_(LorentzMap::translation(x_axis(), period)),
      seeds_(std::move(seeds)),
      side_(side),
      copies_(std::max(copies, 1)) {
  if (!(period > 0.0)) throw ParameterError("period must be positive");
  std::vector<Leaf2> leaves;
  for (int k = -copies_; k <= copies_; ++k) {
    const Mat4 ak = k >= 0 ? LorentzMap::translation(x_axis(), k * period).matrix()
                           : LorentzMap::translation(x_axis().reversed(), -k * period).matrix();
    for (const auto& seed : seeds_) {
      const Vec4 e0 = ak * seed.geodesic().from();
      const Vec4 e1 = ak * seed.geodesic().to();
      leaves.push_back(Leaf2::make(seed.id() + "@" + std::to_string(k), ideal_angle(e0), ideal_angle(e1), seed.weight()));
    }
  }
  lamination_ = FiniteLamination2(std::move(leaves));
  for (const auto& leaf : lamination_.leaves()) {
    if (std::abs(leaf.signed_value(MinkowskiPoint::basepoint())) <= tol::kSide) {
      throw ValidationError("basepoint lies on leaf '" + leaf.id() + "'");
    }
  }
  surface_ = build_pleated(BendingData(lamination_, side_));
}

double PeriodicPleating::axis_intersection() const {
  // A seed crosses the axis y = 0 when its ideal endpoints lie on both sides.
  double total = 0.0;
  for (const auto& seed : seeds_) {
    if ((seed.geodesic().from()[2] > 0.0) != (seed.geodesic().to()[2] > 0.0)) total += seed.weight();
  }
  return total;
}

LorentzMap periodic_holonomy(const PeriodicPleating& pp) {
  const PleatedSurface& ps = pp.surface();
  const MinkowskiPoint ao = pp.translation().apply(MinkowskiPoint::basepoint());
  const auto node = ps.tree().try_locate(ao);
  if (!node) throw ValidationError("translate of the basepoint lies on a leaf");
  const LorentzMap r = (ps.component_map(*node) * pp.translation()).renormalized();
  const double defect = equivariance_defect(pp, r);
  if (defect > 1e-8) {
    std::ostringstream os;
    os << "pleated map is not equivariant: defect " << defect;
    throw ValidationError(os.str());
  }
  return r;
}

double equivariance_defect(const PeriodicPleating& pp, const LorentzMap& holonomy) {
  const PleatedSurface& ps = pp.surface();
  const HyperGeodesic axis = x_axis();
  const Vec4 up(0.0, 0.0, 1.0, 0.0);
  double worst = 0.0;
  for (int domain = 0; domain < 2; ++domain) {
    for (double f : {0.1, 0.35, 0.6, 0.85}) {
      const MinkowskiPoint on_axis = axis.point_at((domain + f) * pp.period());
      for (double h : {-1.0, 0.0, 0.7}) {
        const MinkowskiPoint x = exp_map(on_axis, up, h);
        if (!ps.tree().try_locate(x)) continue;
        const MinkowskiPoint ax = pp.translation().apply(x);
        if (!ps.tree().try_locate(ax)) continue;
        const MinkowskiPoint lhs = ps.evaluate(ax);
        const MinkowskiPoint rhs = holonomy.apply(ps.evaluate(x));
        worst = std::max(worst, (lhs.coords() - rhs.coords()).cwiseAbs().maxCoeff() / lhs.t());
      }
    }
  }
  return worst;
}

QuasiGeodesicSummary quasigeodesic_experiment(
    const std::vector<std::pair<double, std::vector<PeriodicPleating>>>& family) {
  QuasiGeodesicSummary summary{{}, true, true};
  for (const auto& [eps, instances] : family) {
    QuasiGeodesicLevel level{eps, {}, std::numeric_limits<double>::quiet_NaN()};
    for (const auto& pp : instances) {
      QuasiGeodesicReport q{};
      q.epsilon = eps;
      q.intersection = pp.axis_intersection();
      q.length = pp.period();
      if (eps >= kPi / 2.0 || q.intersection > eps + 1e-12) {
        std::ostringstream os;
        os << "i(c, lambda) = " << q.intersection << " exceeds epsilon " << eps << " or epsilon >= pi/2";
        q.in_regime = false;
        q.diagnostic = os.str();
        level.instances.push_back(q);
        continue;
      }
      q.in_regime = true;
      q.holonomy_length = translation_length(periodic_holonomy(pp));
      q.ratio = q.length / q.holonomy_length;
      if (q.ratio < 1.0 - 1e-9) summary.ratios_at_least_one = false;
      level.c_epsilon = std::isnan(level.c_epsilon) ? q.ratio : std::max(level.c_epsilon, q.ratio);
      level.instances.push_back(q);
    }
    summary.levels.push_back(std::move(level));
  }
  std::sort(summary.levels.begin(), summary.levels.end(),
            [](const QuasiGeodesicLevel& a, const QuasiGeodesicLevel& b) { return a.epsilon > b.epsilon; });
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (const auto& level : summary.levels) {
    if (std::isnan(level.c_epsilon)) continue;
    if (!std::isnan(prev) && level.c_epsilon > prev * 1.05) summary.trend_non_increasing = false;
    prev = level.c_epsilon;
  }
  return summary;
}

}  // namespace hypbend

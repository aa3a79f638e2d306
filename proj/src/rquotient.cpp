#include "hypbend/rquotient.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace hypbend {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kPiTol = 1e-12;
}  // namespace

AbstractLamination::AbstractLamination(std::vector<AbstractLeaf> leaves) : leaves_(std::move(leaves)) {
  std::set<std::string> ids;
  for (const auto& l : leaves_) {
    if (!ids.insert(l.id).second) throw ValidationError("duplicate leaf id '" + l.id + "'");
    if (!(l.weight > 0.0)) throw ValidationError("leaf '" + l.id + "' has non-positive weight");
  }
}

const AbstractLeaf* AbstractLamination::find(const std::string& id) const {
  for (const auto& l : leaves_) {
    if (l.id == id) return &l;
  }
  return nullptr;
}

std::map<std::string, double> AbstractLamination::weights() const {
  std::map<std::string, double> out;
  for (const auto& l : leaves_) out[l.id] = l.weight;
  return out;
}

bool AbstractLamination::operator==(const AbstractLamination& other) const {
  if (leaves_.size() != other.leaves_.size()) return false;
  for (const auto& l : leaves_) {
    const AbstractLeaf* o = other.find(l.id);
    if (!o || o->closed != l.closed || o->weight != l.weight) return false;
  }
  return true;
}

TestArc::TestArc(std::vector<std::pair<std::string, int>> crossings) : crossings_(std::move(crossings)) {
  for (const auto& [id, mult] : crossings_) {
    if (mult < 1) throw ValidationError("arc multiplicity for '" + id + "' must be at least 1");
  }
}

bool TestArc::crosses(const std::string& id) const {
  return std::any_of(crossings_.begin(), crossings_.end(), [&](const auto& c) { return c.first == id; });
}

RClass truncate(const AbstractLamination& lam) {
  std::vector<AbstractLeaf> out = lam.leaves();
  for (auto& l : out) {
    if (l.closed) l.weight = std::min(l.weight, kPi);
  }
  return RClass(AbstractLamination(std::move(out)));
}

bool r_equivalent(const AbstractLamination& a, const AbstractLamination& b) { return truncate(a) == truncate(b); }

std::set<std::string> pi_part(const AbstractLamination& lam, PiMode mode) {
  std::set<std::string> out;
  for (const auto& l : lam.leaves()) {
    if (!l.closed) continue;
    const bool pass = mode == PiMode::AtLeast ? l.weight >= kPi - kPiTol : l.weight > kPi + kPiTol;
    if (pass) out.insert(l.id);
  }
  return out;
}

double arc_integral(const TestArc& k, const AbstractLamination& lam) {
  double total = 0.0;
  for (const auto& [id, mult] : k.crossings()) {
    if (const AbstractLeaf* l = lam.find(id)) total += mult * l->weight;
  }
  return total;
}

QuotientConvergenceReport quotient_convergence_check(const std::vector<AbstractLamination>& sequence,
                                                     const AbstractLamination& candidate,
                                                     const std::vector<TestArc>& arcs, double tolerance,
                                                     std::size_t tail) {
  if (sequence.empty()) throw ParameterError("empty sequence");
  const AbstractLamination canon = truncate(candidate).canonical();
  const auto pi = pi_part(canon, PiMode::AtLeast);
  const std::size_t n = sequence.size();
  const std::size_t start = n > tail ? n - tail : 0;
  QuotientConvergenceReport report{true, {}, std::nullopt};
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    ArcTrace t{};
    t.arc_index = a;
    t.crosses_pi_part = std::any_of(pi.begin(), pi.end(), [&](const std::string& id) { return arcs[a].crosses(id); });
    t.limit = arc_integral(arcs[a], canon);
    t.tail_inf = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      const double v = arc_integral(arcs[a], sequence[i]);
      t.values.push_back(v);
      if (i >= start) {
        t.tail_deviation = std::max(t.tail_deviation, std::abs(v - t.limit));
        t.tail_inf = std::min(t.tail_inf, v);
      }
    }
    t.converges = t.crosses_pi_part || t.tail_deviation <= tolerance;
    t.liminf_ok = t.tail_inf >= t.limit - tolerance;
    if (!(t.converges && t.liminf_ok)) {
      report.pass = false;
      if (!report.witness) report.witness = a;
    }
    report.arcs.push_back(std::move(t));
  }
  return report;
}

Separation separation_witness(const RClass& a, const RClass& b, const std::vector<TestArc>& pool) {
  if (a == b) return {true, std::nullopt, 0.0};
  const AbstractLamination& la = a.canonical();
  const AbstractLamination& lb = b.canonical();
  std::set<std::string> ids;
  for (const auto& l : la.leaves()) ids.insert(l.id);
  for (const auto& l : lb.leaves()) ids.insert(l.id);

  auto single = [&](const std::string& id) -> const TestArc* {
    for (const auto& k : pool) {
      if (k.crossings().size() == 1 && k.crossings()[0].first == id && k.crossings()[0].second == 1) return &k;
    }
    return nullptr;
  };
  for (const auto& id : ids) {
    if (!single(id)) throw CannotDecideError("arc pool has no single-crossing arc for leaf '" + id + "'");
  }
  auto weight = [](const AbstractLamination& l, const std::string& id) {
    const AbstractLeaf* f = l.find(id);
    return f ? f->weight : 0.0;
  };
  double max_gap = 0.0;
  for (const auto& id : ids) max_gap = std::max(max_gap, std::abs(weight(la, id) - weight(lb, id)));

  const auto pa = pi_part(la, PiMode::AtLeast);
  const auto pb = pi_part(lb, PiMode::AtLeast);
  auto avoids_pi = [&](const TestArc& k) {
    for (const auto& [id, mult] : k.crossings()) {
      if (pa.count(id) || pb.count(id)) return false;
    }
    return true;
  };
  // Best pool arc: largest integral gap, arcs avoiding both pi-parts first.
  const TestArc* best = nullptr;
  double best_gap = -1.0;
  bool best_avoids = false;
  for (const auto& k : pool) {
    const double gap = std::abs(arc_integral(k, la) - arc_integral(k, lb));
    if (gap <= 0.0) continue;
    const bool avoids = avoids_pi(k);
    if (!best || (avoids && !best_avoids) || (avoids == best_avoids && gap > best_gap)) {
      best = &k;
      best_gap = gap;
      best_avoids = avoids;
    }
  }
  if (!best) throw CannotDecideError("no arc of the pool separates the classes");
  // The leaf with the largest weight gap always separates by that gap.
  if (best_gap < max_gap) {
    for (const auto& id : ids) {
      if (std::abs(weight(la, id) - weight(lb, id)) == max_gap) {
        const TestArc* k = single(id);
        if (avoids_pi(*k) || !best_avoids) return {false, *k, max_gap};
      }
    }
  }
  return {false, *best, best_gap};
}

SupportInclusionReport support_inclusion_check(const std::vector<FiniteLamination2>& sequence,
                                               const FiniteLamination2& candidate, double radius, double tolerance,
                                               std::size_t tail) {
  if (sequence.empty()) throw ParameterError("empty sequence");
  SupportInclusionReport report{InclusionVerdict::Pass, {}, {}, std::nullopt};
  const auto samples = sample_support(candidate, radius, 1e-2 * radius);
  const std::size_t n = sequence.size();
  const std::size_t start = n > tail ? n - tail : 0;
  for (std::size_t i = 0; i < n; ++i) {
    double gap = 0.0;
    std::optional<MinkowskiPoint> worst;
    for (const auto& p : samples) {
      const double d = distance_to_support(p, sequence[i], radius);
      if (d > gap) {
        gap = d;
        worst = p;
      }
    }
    report.gaps.push_back(gap);
    if (i + 1 == n) report.witness = worst;
    if (i + 1 < n && i + 1 >= start) {
      report.consecutive.push_back(windowed_hausdorff(sequence[i], sequence[i + 1], radius));
    }
  }
  for (double d : report.consecutive) {
    if (!(d <= tolerance)) {
      report.verdict = InclusionVerdict::Inconclusive;
      return report;
    }
  }
  double tail_max = 0.0;
  for (std::size_t i = start; i < n; ++i) tail_max = std::max(tail_max, report.gaps[i]);
  report.verdict = tail_max <= tolerance ? InclusionVerdict::Pass : InclusionVerdict::Fail;
  if (report.verdict == InclusionVerdict::Pass) report.witness.reset();
  return report;
}

}  // namespace hypbend

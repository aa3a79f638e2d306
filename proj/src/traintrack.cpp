#include "hypbend/traintrack.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace hypbend {

TrainTrack::TrainTrack(std::vector<std::string> branches, std::vector<Switch> switches)
    : branches_(std::move(branches)), switches_(std::move(switches)) {
  for (const auto& b : branches_) {
    if (!branch_set_.insert(b).second) throw ValidationError("duplicate branch id '" + b + "'");
  }
  std::map<std::string, int> ends;
  std::set<std::string> switch_ids;
  for (const auto& s : switches_) {
    if (!switch_ids.insert(s.id).second) throw ValidationError("duplicate switch id '" + s.id + "'");
    if (s.side_a.empty() && s.side_b.empty()) throw ValidationError("switch '" + s.id + "' is isolated");
    for (const auto* side : {&s.side_a, &s.side_b}) {
      for (const auto& e : *side) {
        if (!branch_set_.count(e.branch)) throw UnknownBranchError("switch '" + s.id + "' names '" + e.branch + "'");
        if (e.end != 0 && e.end != 1) throw ValidationError("branch end must be 0 or 1");
        const int bit = 1 << e.end;
        if (ends[e.branch] & bit) throw ValidationError("end of branch '" + e.branch + "' placed twice");
        ends[e.branch] |= bit;
      }
    }
  }
  for (const auto& b : branches_) {
    if (ends[b] != 3) throw ValidationError("branch '" + b + "' does not have both ends placed");
  }
}

double branch_weight(const TrainTrack& tt, const BranchMeasure& m, const std::string& branch) {
  if (!tt.has_branch(branch)) throw UnknownBranchError("no branch '" + branch + "'");
  auto it = m.find(branch);
  return it == m.end() ? 0.0 : it->second;
}

namespace {

void check_ids(const TrainTrack& tt, const BranchMeasure& m) {
  for (const auto& [id, w] : m) {
    if (!tt.has_branch(id)) throw UnknownBranchError("measure names unknown branch '" + id + "'");
  }
}

double side_sum(const TrainTrack& tt, const BranchMeasure& m, const std::vector<BranchEnd>& side) {
  double total = 0.0;
  for (const auto& e : side) total += branch_weight(tt, m, e.branch);
  return total;
}

}  // namespace

double switch_defect(const TrainTrack& tt, const BranchMeasure& m) {
  check_ids(tt, m);
  double worst = 0.0;
  for (const auto& s : tt.switches()) {
    worst = std::max(worst, std::abs(side_sum(tt, m, s.side_a) - side_sum(tt, m, s.side_b)));
  }
  return worst;
}

bool validate_measure(const TrainTrack& tt, const BranchMeasure& m, double tolerance) {
  check_ids(tt, m);
  for (const auto& [id, w] : m) {
    if (!(w >= 0.0)) return false;
  }
  return switch_defect(tt, m) <= tolerance;
}

double tie_measure(const TrainTrack& tt, const BranchMeasure& m, const std::string& branch) {
  return branch_weight(tt, m, branch);
}

namespace {

TrainTrack restrict_track(const TrainTrack& tt, const std::set<std::string>& keep, std::set<std::string>& touched) {
  std::vector<Switch> switches;
  for (const auto& s : tt.switches()) {
    Switch r{s.id, {}, {}};
    for (const auto& e : s.side_a) {
      if (keep.count(e.branch)) r.side_a.push_back(e);
    }
    for (const auto& e : s.side_b) {
      if (keep.count(e.branch)) r.side_b.push_back(e);
    }
    if (r.side_a.empty() && r.side_b.empty()) continue;
    if (r.side_a.empty() || r.side_b.empty()) {
      throw ValidationError("subtrack leaves switch '" + s.id + "' with an empty side");
    }
    touched.insert(s.id);
    switches.push_back(std::move(r));
  }
  return TrainTrack(std::vector<std::string>(keep.begin(), keep.end()), std::move(switches));
}

}  // namespace

Subtrack::Subtrack(const TrainTrack& tt, std::set<std::string> branches)
    : branches_(std::move(branches)), track_([&]() -> TrainTrack {
        for (const auto& b : branches_) {
          if (!tt.has_branch(b)) throw UnknownBranchError("subtrack names unknown branch '" + b + "'");
        }
        return restrict_track(tt, branches_, switches_);
      }()) {}

bool Subtrack::is_loop_carrier() const {
  if (branches_.empty()) return false;
  for (const auto& s : track_.switches()) {
    if (s.side_a.size() != 1 || s.side_b.size() != 1) return false;
  }
  // Connectivity over branches sharing a switch.
  std::map<std::string, std::string> parent;
  for (const auto& b : branches_) parent[b] = b;
  std::function<std::string(const std::string&)> find = [&](const std::string& x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  for (const auto& s : track_.switches()) parent[find(s.side_a[0].branch)] = find(s.side_b[0].branch);
  const std::string root = find(*branches_.begin());
  return std::all_of(branches_.begin(), branches_.end(), [&](const std::string& b) { return find(b) == root; });
}

std::vector<std::string> incident_branches(const TrainTrack& tt, const Subtrack& carrier) {
  std::set<std::string> out;
  for (const auto& s : tt.switches()) {
    if (!carrier.switches().count(s.id)) continue;
    for (const auto* side : {&s.side_a, &s.side_b}) {
      for (const auto& e : *side) {
        if (!carrier.branches().count(e.branch)) out.insert(e.branch);
      }
    }
  }
  return {out.begin(), out.end()};
}

double carried_intersection(const TrainTrack& tt, const Subtrack& carrier, const BranchMeasure& m) {
  if (!carrier.is_loop_carrier()) throw NotLoopCarrierError("subtrack does not carry a simple closed curve");
  check_ids(tt, m);
  double total = 0.0;
  for (const auto& b : incident_branches(tt, carrier)) total += branch_weight(tt, m, b);
  return 0.5 * total;
}

BranchConvergenceReport branch_convergence_check(const TrainTrack& tt, const std::vector<BranchMeasure>& sequence,
                                                 const BranchMeasure& limit, const std::set<std::string>& excluded,
                                                 double tolerance, std::size_t tail) {
  BranchConvergenceReport report{true, {}};
  if (sequence.empty()) throw ParameterError("empty sequence");
  const std::size_t n = sequence.size();
  const std::size_t start = n > tail ? n - tail : 0;
  for (const auto& b : tt.branches()) {
    if (excluded.count(b)) continue;
    const double target = branch_weight(tt, limit, b);
    BranchConvergence c{b, true, 0.0, std::numeric_limits<double>::quiet_NaN()};
    std::vector<double> xs, ys;
    for (std::size_t i = start; i < n; ++i) {
      const double err = std::abs(branch_weight(tt, sequence[i], b) - target);
      c.tail_error = std::max(c.tail_error, err);
      if (err > 0.0) {
        xs.push_back(std::log(static_cast<double>(i + 1)));
        ys.push_back(std::log(err));
      }
    }
    c.converges = c.tail_error <= tolerance;
    if (xs.size() >= 2) {
      double mx = 0, my = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
      }
      mx /= xs.size();
      my /= ys.size();
      double sxy = 0, sxx = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
      }
      if (sxx > 0) c.decay_exponent = sxy / sxx;
    }
    report.converges = report.converges && c.converges;
    report.branches.push_back(c);
  }
  return report;
}

}  // namespace hypbend

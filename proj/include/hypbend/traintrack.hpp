#pragma once

// Combinatorial train tracks, switch-conditioned branch measures and the
// intersection of a carried closed curve with a carried measure.

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hypbend/errors.hpp"

namespace hypbend {

struct BranchEnd {
  std::string branch;
  int end;  // 0 or 1
};

struct Switch {
  std::string id;
  std::vector<BranchEnd> side_a;
  std::vector<BranchEnd> side_b;
};

class TrainTrack {
 public:
  /// Every branch must have its two ends placed exactly once; every switch
  /// must carry at least one end.
  TrainTrack(std::vector<std::string> branches, std::vector<Switch> switches);

  const std::vector<std::string>& branches() const { return branches_; }
  const std::vector<Switch>& switches() const { return switches_; }
  bool has_branch(const std::string& id) const { return branch_set_.count(id) > 0; }

 private:
  std::vector<std::string> branches_;
  std::set<std::string> branch_set_;
  std::vector<Switch> switches_;
};

using BranchMeasure = std::map<std::string, double>;

/// Weight of a branch; absent ids of the track weigh 0. Throws
/// UnknownBranchError for ids outside the track.
double branch_weight(const TrainTrack& tt, const BranchMeasure& m, const std::string& branch);

/// Largest |side A - side B| over the switches.
double switch_defect(const TrainTrack& tt, const BranchMeasure& m);

/// True iff every weight is non-negative and every switch balances (exactly
/// when the weights are exactly representable, within `tolerance` otherwise).
bool validate_measure(const TrainTrack& tt, const BranchMeasure& m, double tolerance = 1e-12);

double tie_measure(const TrainTrack& tt, const BranchMeasure& m, const std::string& branch);

class Subtrack {
 public:
  /// Keeps the given branches; every switch that retains an end must retain
  /// ends on both of its sides.
  Subtrack(const TrainTrack& tt, std::set<std::string> branches);

  const std::set<std::string>& branches() const { return branches_; }
  /// Restriction as a train track in its own right.
  const TrainTrack& track() const { return track_; }
  /// Switch ids of the parent touched by retained branches.
  const std::set<std::string>& switches() const { return switches_; }
  /// Connected, with exactly one retained end on each side of each retained
  /// switch: the subtrack is a single loop that carries a closed curve.
  bool is_loop_carrier() const;

 private:
  std::set<std::string> branches_;
  std::set<std::string> switches_;
  TrainTrack track_;
};

/// Branches outside the subtrack with an end at one of its switches, each
/// listed once.
std::vector<std::string> incident_branches(const TrainTrack& tt, const Subtrack& carrier);

/// Half the total weight of the incident branches. Throws NotLoopCarrierError
/// unless the subtrack is a loop carrier.
double carried_intersection(const TrainTrack& tt, const Subtrack& carrier, const BranchMeasure& m);

struct BranchConvergence {
  std::string branch;
  bool converges;
  double tail_error;      // max |m_n - m| over the tail window
  double decay_exponent;  // log-log slope of the error against n over the tail (NaN if undefined)
};

struct BranchConvergenceReport {
  bool converges;
  std::vector<BranchConvergence> branches;
};

/// Terms are indexed n = 1, 2, ...; a branch converges when the last `tail`
/// terms are within `tolerance` of the limit. Excluded branches are skipped.
BranchConvergenceReport branch_convergence_check(const TrainTrack& tt, const std::vector<BranchMeasure>& sequence,
                                                 const BranchMeasure& limit,
                                                 const std::set<std::string>& excluded = {},
                                                 double tolerance = 1e-6, std::size_t tail = 10);

}  // namespace hypbend

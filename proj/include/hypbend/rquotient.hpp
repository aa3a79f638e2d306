#pragma once

// The relation R on measured laminations (closed-leaf weights truncated at
// pi), arc functionals, quotient convergence and separation witnesses.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hypbend/hypgeom.hpp"
#include "hypbend/lamination.hpp"

namespace hypbend {

struct AbstractLeaf {
  std::string id;
  bool closed;
  double weight;
};

class AbstractLamination {
 public:
  AbstractLamination() = default;
  /// Validates unique ids and positive weights.
  explicit AbstractLamination(std::vector<AbstractLeaf> leaves);

  const std::vector<AbstractLeaf>& leaves() const { return leaves_; }
  const AbstractLeaf* find(const std::string& id) const;
  /// id -> weight.
  std::map<std::string, double> weights() const;

  bool operator==(const AbstractLamination& other) const;

 private:
  std::vector<AbstractLeaf> leaves_;
};

/// Crossings of a test arc: (leaf id, multiplicity >= 1).
class TestArc {
 public:
  TestArc() = default;
  explicit TestArc(std::vector<std::pair<std::string, int>> crossings);
  const std::vector<std::pair<std::string, int>>& crossings() const { return crossings_; }
  bool crosses(const std::string& id) const;

 private:
  std::vector<std::pair<std::string, int>> crossings_;
};

/// An R-class, held by its representative with closed-leaf weights <= pi.
class RClass {
 public:
  const AbstractLamination& canonical() const { return canonical_; }
  bool operator==(const RClass& other) const { return canonical_ == other.canonical_; }

 private:
  friend RClass truncate(const AbstractLamination& lam);
  explicit RClass(AbstractLamination c) : canonical_(std::move(c)) {}
  AbstractLamination canonical_;
};

RClass truncate(const AbstractLamination& lam);

bool r_equivalent(const AbstractLamination& a, const AbstractLamination& b);

enum class PiMode { StrictlyGreater, AtLeast };

/// Closed leaves with weight > pi (or >= pi), compared at 1e-12.
std::set<std::string> pi_part(const AbstractLamination& lam, PiMode mode);

double arc_integral(const TestArc& k, const AbstractLamination& lam);

struct ArcTrace {
  std::size_t arc_index;
  bool crosses_pi_part;
  double limit;           // integral against the truncated candidate
  std::vector<double> values;
  double tail_deviation;  // max |value - limit| over the tail window (non-pi arcs)
  double tail_inf;        // min value over the tail window
  bool converges;         // clause (i); true for pi arcs
  bool liminf_ok;         // clause (ii)
};

struct QuotientConvergenceReport {
  bool pass;
  std::vector<ArcTrace> arcs;
  /// First failing arc, if any.
  std::optional<std::size_t> witness;
};

QuotientConvergenceReport quotient_convergence_check(const std::vector<AbstractLamination>& sequence,
                                                     const AbstractLamination& candidate,
                                                     const std::vector<TestArc>& arcs, double tolerance = 1e-6,
                                                     std::size_t tail = 10);

struct Separation {
  bool equal;
  std::optional<TestArc> arc;
  double gap = 0.0;
};

/// Throws CannotDecideError when the classes differ but the pool lacks a
/// single-crossing arc for some leaf id of either class.
Separation separation_witness(const RClass& a, const RClass& b, const std::vector<TestArc>& pool);

enum class InclusionVerdict { Pass, Fail, Inconclusive };

struct SupportInclusionReport {
  InclusionVerdict verdict;
  std::vector<double> gaps;          // max distance from |candidate| to |lam_n| per n
  std::vector<double> consecutive;   // windowed Hausdorff distance of lam_n, lam_{n+1}
  std::optional<MinkowskiPoint> witness;
};

/// Every sampled point of |candidate| must come within a vanishing distance
/// of |lam_n| over the tail. The supports of the sequence must themselves
/// settle (consecutive windowed distances below `tolerance`), otherwise the
/// verdict is inconclusive.
SupportInclusionReport support_inclusion_check(const std::vector<FiniteLamination2>& sequence,
                                               const FiniteLamination2& candidate, double radius = 5.0,
                                               double tolerance = 1e-2, std::size_t tail = 10);

}  // namespace hypbend

#pragma once

// Experiment harness: families of bending data indexed by n, the convex /
// even dichotomy of their limits, flat-image residuals, periodic pleatings
// with their holonomy, and translation-length sweeps.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hypbend/hypgeom.hpp"
#include "hypbend/lamination.hpp"
#include "hypbend/pleated.hpp"

namespace hypbend {

/// n -> w(n) from a fixed catalogue.
struct WeightPath {
  enum class Kind { Constant, Harmonic, Geometric, Oscillating };
  Kind kind = Kind::Constant;
  double target = 0.0;
  /// Harmonic: target - scale / n. Geometric: target (1 - ratio^n).
  /// Oscillating: target + scale (-1)^n (has no limit).
  double scale = 0.0;
  double ratio = 0.5;

  static WeightPath constant(double w) { return {Kind::Constant, w, 0.0, 0.5}; }
  static WeightPath harmonic(double target, double scale) { return {Kind::Harmonic, target, scale, 0.5}; }
  static WeightPath geometric(double target, double ratio) { return {Kind::Geometric, target, 0.0, ratio}; }
  static WeightPath oscillating(double target, double amplitude) { return {Kind::Oscillating, target, amplitude, 0.5}; }

  double at(long n) const;
  bool converges() const { return kind != Kind::Oscillating || scale == 0.0; }
};

struct LeafGeometry {
  std::string id;
  double theta1;
  double theta2;
};

struct FamilySpec {
  std::vector<LeafGeometry> leaves;
  std::map<std::string, WeightPath> weights;  // by leaf id
  std::vector<long> indices;                  // increasing
  int side = 1;

  /// Validates w(n) in (0, pi] for every leaf and index.
  void validate() const;
  FiniteLamination2 lamination_at(long n) const;
  BendingData data_at(long n) const { return BendingData(lamination_at(n), side); }
};

/// Roughly log-spaced distinct integers from first to last (inclusive).
std::vector<long> log_spaced_indices(long first, long last, std::size_t count);

enum class LimitClass { Convex, Even, NonConvergent };
const char* to_string(LimitClass c);

struct ArcTraceReport {
  std::vector<double> values;              // bending measure per index
  double limit;                            // sum of the target weights of crossed leaves
  double terminal_deviation;               // |value at the last index - limit|
  bool converges;                          // terminal deviation <= 1e-4
  std::vector<std::string> crossed;        // leaf ids
  std::vector<std::string> dirac_pi;       // crossed leaves whose target is pi
};

struct DichotomyReport {
  std::vector<long> indices;
  std::vector<bool> convex;                // is_convex per index
  std::vector<long> excluded;              // indices failing is_convex
  LimitClass classification = LimitClass::NonConvergent;
  bool classification_verified = false;
  std::vector<double> coplanarity;         // residual per index
  double terminal_residual = 0.0;
  double extrapolated_residual = 0.0;      // C / n fitted on the tail, at n = extrapolate_to
  long extrapolate_to = 0;
  std::optional<MinkowskiPoint> witness;   // terminal witness (convex limits)
  double witness_margin = 0.0;
  bool witness_stable = false;             // witness keeps its margin over the tail
  std::vector<ArcTraceReport> arcs;
};

/// Classifies the limit of the family from its weight targets and verifies
/// it at the terminal indices (the last `tail` ones).
DichotomyReport run_dichotomy(const FamilySpec& spec, const std::vector<Arc2>& arcs, std::size_t tail = 10,
                              long extrapolate_to = 10000);

/// Max |<f(sample), (0,0,0,1)>| over sampled flat points. Throws
/// ParameterError for the empty lamination.
double flat_image_check(const PleatedSurface& ps);

/// Largest modulus of an eigenvalue of the Lorentz matrix, as a log: the
/// translation length of a loxodromic isometry. Throws NotLoxodromicError
/// naming "identity", "elliptic" or "parabolic" otherwise.
double translation_length(const LorentzMap& g);

/// Leaf of the slice orthogonal to the x-axis at signed distance s.
Leaf2 orthogonal_leaf(const std::string& id, double s, double weight);

class PeriodicPleating {
 public:
  /// Translation by `period` along the x-axis (towards angle 0). Seed leaves
  /// and their translates over `copies` fundamental domains each way must be
  /// pairwise disjoint (checked over at least 3 domains).
  PeriodicPleating(double period, std::vector<Leaf2> seeds, int side = 1, int copies = 4);

  const LorentzMap& translation() const { return a_; }
  double period() const { return period_; }
  const std::vector<Leaf2>& seeds() const { return seeds_; }
  int copies() const { return copies_; }
  /// The truncated periodic lamination (translates k = -copies..copies).
  const FiniteLamination2& lamination() const { return lamination_; }
  const PleatedSurface& surface() const { return *surface_; }
  /// Sum of the weights of the seed leaves crossing the axis.
  double axis_intersection() const;

 private:
  double period_;
  LorentzMap a_;
  std::vector<Leaf2> seeds_;
  int side_;
  int copies_;
  FiniteLamination2 lamination_;
  std::optional<PleatedSurface> surface_;
};

/// r(a) = M_{P(a o)} a for the base point o. Checks f(a x) = r(a) f(x) on
/// points of two fundamental domains (ValidationError beyond 1e-8).
LorentzMap periodic_holonomy(const PeriodicPleating& pp);

/// Largest |f(a x) - r(a) f(x)| over the sampled points.
double equivariance_defect(const PeriodicPleating& pp, const LorentzMap& holonomy);

struct QuasiGeodesicReport {
  double epsilon;
  double intersection;       // i(c, lambda)
  double length;             // l(c)
  double holonomy_length;    // l(c*)
  double ratio;              // l(c) / l(c*)
  bool in_regime;
  std::string diagnostic;
};

struct QuasiGeodesicLevel {
  double epsilon;
  std::vector<QuasiGeodesicReport> instances;
  double c_epsilon;          // max ratio over in-regime instances
};

struct QuasiGeodesicSummary {
  std::vector<QuasiGeodesicLevel> levels;  // sorted by decreasing epsilon
  bool ratios_at_least_one;                // ratio >= 1 - 1e-9 everywhere
  bool trend_non_increasing;               // C_eps non-increasing as eps decreases (5% slack)
};

/// One entry per epsilon level; instances with i(c, lambda) > epsilon or
/// epsilon >= pi/2 are excluded with a diagnostic.
QuasiGeodesicSummary quasigeodesic_experiment(const std::vector<std::pair<double, std::vector<PeriodicPleating>>>& family);

}  // namespace hypbend

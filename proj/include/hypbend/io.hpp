#pragma once

// JSON formats for laminations, arcs, train tracks, experiment specs and
// reports.

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hypbend/lamination.hpp"
#include "hypbend/pleated.hpp"
#include "hypbend/polygonal.hpp"
#include "hypbend/rquotient.hpp"
#include "hypbend/seqlab.hpp"
#include "hypbend/traintrack.hpp"

namespace hypbend::io {

using nlohmann::json;

/// Reads and parses a JSON file; ParseError on failure.
json read_json_file(const std::string& path);

/// Numbers, or the strings "pi", "-pi", "pi/2", "2pi".
double parse_number(const json& j);

/// {"coords": [t, x, y, z]} or {"polar": [r, phi]}.
MinkowskiPoint parse_point(const json& j);
json point_to_json(const MinkowskiPoint& p);

/// {"leaves": [{"id", "theta1", "theta2", "weight"}]}
FiniteLamination2 parse_lamination(const json& j);
json lamination_to_json(const FiniteLamination2& lam);

/// {"from": point, "to": point}
Arc2 parse_arc(const json& j);

/// {"leaves": [{"id", "closed", "weight"}]}
AbstractLamination parse_abstract(const json& j);
json abstract_to_json(const AbstractLamination& lam);

/// {"crossings": [["a", 2], ...]}
TestArc parse_test_arc(const json& j);
std::vector<TestArc> parse_arc_pool(const json& j);

/// {"branches": [...], "switches": [{"id", "a": [["b1", 0]], "b": [...]}]}
TrainTrack parse_train_track(const json& j);
BranchMeasure parse_measure(const json& j);

/// {"kind": "constant" | "harmonic" | "geometric" | "oscillating", ...}
WeightPath parse_weight_path(const json& j);

/// {"leaves": [{"id", "theta1", "theta2"}], "weights": {id: path},
///  "indices": [...] | {"log_spaced": [first, last, count]}, "side"}
FamilySpec parse_family(const json& j);

/// {"period", "seeds": [leaf | {"id", "orthogonal_at", "weight"}], "side", "copies"}
PeriodicPleating parse_periodic(const json& j);

json to_json(const ApproxReport& r);
json to_json(const ApproxEntry& e);
json to_json(const ConvexityReport& r);
json to_json(const DichotomyReport& r);
json to_json(const QuasiGeodesicSummary& r);
json to_json(const QuotientConvergenceReport& r);
json to_json(const BranchConvergenceReport& r);

/// Writes text to a file, creating parent directories.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace hypbend::io

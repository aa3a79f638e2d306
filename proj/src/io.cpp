#include "hypbend/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

namespace hypbend::io {

namespace {

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

template <typename Fn>
auto guarded(const char* what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("'" + path + "' is not valid JSON: " + e.what());
  }
}

double parse_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    constexpr double pi = std::numbers::pi;
    if (s == "pi") return pi;
    if (s == "-pi") return -pi;
    if (s == "pi/2") return pi / 2.0;
    if (s == "2pi") return 2.0 * pi;
  }
  throw ParseError("expected a number, got " + j.dump());
}

MinkowskiPoint parse_point(const json& j) {
  return guarded("point", [&] {
    if (j.contains("polar")) {
      const auto& p = j.at("polar");
      return MinkowskiPoint::from_polar(parse_number(p.at(0)), parse_number(p.at(1)));
    }
    const auto& c = require(j, "coords");
    if (!c.is_array() || c.size() != 4) throw ParseError("coords must have four entries");
    return MinkowskiPoint::from_coords(
        Vec4(parse_number(c[0]), parse_number(c[1]), parse_number(c[2]), parse_number(c[3])));
  });
}

json point_to_json(const MinkowskiPoint& p) { return json{{"coords", {p.t(), p.x(), p.y(), p.z()}}}; }

FiniteLamination2 parse_lamination(const json& j) {
  return guarded("lamination", [&] {
    std::vector<Leaf2> leaves;
    for (const auto& l : require(j, "leaves")) {
      leaves.push_back(Leaf2::make(require(l, "id").get<std::string>(), parse_number(require(l, "theta1")),
                                   parse_number(require(l, "theta2")), parse_number(require(l, "weight"))));
    }
    return FiniteLamination2(std::move(leaves));
  });
}

json lamination_to_json(const FiniteLamination2& lam) {
  json leaves = json::array();
  for (const auto& l : lam.leaves()) {
    leaves.push_back({{"id", l.id()}, {"theta1", l.theta1()}, {"theta2", l.theta2()}, {"weight", l.weight()}});
  }
  return json{{"leaves", leaves}};
}

Arc2 parse_arc(const json& j) {
  return guarded("arc", [&] { return Arc2(parse_point(require(j, "from")), parse_point(require(j, "to"))); });
}

AbstractLamination parse_abstract(const json& j) {
  return guarded("abstract lamination", [&] {
    std::vector<AbstractLeaf> leaves;
    for (const auto& l : require(j, "leaves")) {
      leaves.push_back({require(l, "id").get<std::string>(), l.value("closed", false),
                        parse_number(require(l, "weight"))});
    }
    return AbstractLamination(std::move(leaves));
  });
}

json abstract_to_json(const AbstractLamination& lam) {
  json leaves = json::array();
  for (const auto& l : lam.leaves()) leaves.push_back({{"id", l.id}, {"closed", l.closed}, {"weight", l.weight}});
  return json{{"leaves", leaves}};
}

TestArc parse_test_arc(const json& j) {
  return guarded("test arc", [&] {
    std::vector<std::pair<std::string, int>> cs;
    for (const auto& c : require(j, "crossings")) cs.emplace_back(c.at(0).get<std::string>(), c.at(1).get<int>());
    return TestArc(std::move(cs));
  });
}

std::vector<TestArc> parse_arc_pool(const json& j) {
  std::vector<TestArc> out;
  for (const auto& a : require(j, "arcs")) out.push_back(parse_test_arc(a));
  return out;
}

TrainTrack parse_train_track(const json& j) {
  return guarded("train track", [&] {
    std::vector<std::string> branches = require(j, "branches").get<std::vector<std::string>>();
    std::vector<Switch> switches;
    for (const auto& s : require(j, "switches")) {
      Switch sw{require(s, "id").get<std::string>(), {}, {}};
      for (const auto& e : require(s, "a")) sw.side_a.push_back({e.at(0).get<std::string>(), e.at(1).get<int>()});
      for (const auto& e : require(s, "b")) sw.side_b.push_back({e.at(0).get<std::string>(), e.at(1).get<int>()});
      switches.push_back(std::move(sw));
    }
    return TrainTrack(std::move(branches), std::move(switches));
  });
}

BranchMeasure parse_measure(const json& j) {
  return guarded("measure", [&] {
    BranchMeasure m;
    for (auto it = j.begin(); it != j.end(); ++it) m[it.key()] = parse_number(it.value());
    return m;
  });
}

WeightPath parse_weight_path(const json& j) {
  return guarded("weight path", [&] {
    const std::string kind = require(j, "kind").get<std::string>();
    if (kind == "constant") return WeightPath::constant(parse_number(require(j, "value")));
    if (kind == "harmonic") {
      return WeightPath::harmonic(parse_number(require(j, "target")), parse_number(require(j, "scale")));
    }
    if (kind == "geometric") {
      return WeightPath::geometric(parse_number(require(j, "target")), parse_number(require(j, "ratio")));
    }
    if (kind == "oscillating") {
      return WeightPath::oscillating(parse_number(require(j, "target")), parse_number(require(j, "amplitude")));
    }
    throw ParseError("unknown weight path kind '" + kind + "'");
  });
}

FamilySpec parse_family(const json& j) {
  return guarded("family", [&] {
    FamilySpec spec;
    for (const auto& l : require(j, "leaves")) {
      spec.leaves.push_back({require(l, "id").get<std::string>(), parse_number(require(l, "theta1")),
                             parse_number(require(l, "theta2"))});
    }
    const auto& w = require(j, "weights");
    for (auto it = w.begin(); it != w.end(); ++it) spec.weights[it.key()] = parse_weight_path(it.value());
    const auto& idx = require(j, "indices");
    if (idx.is_array()) {
      spec.indices = idx.get<std::vector<long>>();
    } else {
      const auto& ls = require(idx, "log_spaced");
      spec.indices = log_spaced_indices(ls.at(0).get<long>(), ls.at(1).get<long>(), ls.at(2).get<std::size_t>());
    }
    spec.side = j.value("side", 1);
    return spec;
  });
}

PeriodicPleating parse_periodic(const json& j) {
  return guarded("periodic pleating", [&] {
    std::vector<Leaf2> seeds;
    for (const auto& s : j.value("seeds", json::array())) {
      const std::string id = require(s, "id").get<std::string>();
      const double w = parse_number(require(s, "weight"));
      if (s.contains("orthogonal_at")) {
        seeds.push_back(orthogonal_leaf(id, parse_number(s.at("orthogonal_at")), w));
      } else {
        seeds.push_back(Leaf2::make(id, parse_number(require(s, "theta1")), parse_number(require(s, "theta2")), w));
      }
    }
    return PeriodicPleating(parse_number(require(j, "period")), std::move(seeds), j.value("side", 1),
                            j.value("copies", 4));
  });
}

json to_json(const ApproxReport& r) {
  return json{{"angle_sum", r.angle_sum}, {"exact_measure", r.exact_measure}, {"error", r.error},
              {"length", r.length},       {"bound", r.bound},                 {"ratio", r.ratio},
              {"alpha", r.alpha},         {"s", r.s},                         {"arc_length", r.arc_length}};
}

json to_json(const ApproxEntry& e) {
  json j{{"parameter", e.parameter}, {"point", point_to_json(e.point)},
         {"plane", {e.plane.normal()[0], e.plane.normal()[1], e.plane.normal()[2], e.plane.normal()[3]}}};
  if (e.crossing != kNoCrossing) {
    j["crossing"] = e.crossing;
    j["pencil"] = e.pencil;
  }
  return j;
}

json to_json(const ConvexityReport& r) {
  json j{{"convex", r.convex},
         {"condition1", r.condition1},
         {"condition2", r.condition2},
         {"worst_violation", number_or_null(r.worst_violation)},
         {"witness_margin", number_or_null(r.witness_margin)}};
  if (r.violated_pair) j["violated_pair"] = {r.violated_pair->first, r.violated_pair->second};
  if (r.witness) j["witness"] = point_to_json(*r.witness);
  return j;
}

json to_json(const DichotomyReport& r) {
  json arcs = json::array();
  for (const auto& a : r.arcs) {
    arcs.push_back({{"values", a.values},
                    {"limit", a.limit},
                    {"terminal_deviation", a.terminal_deviation},
                    {"converges", a.converges},
                    {"crossed", a.crossed},
                    {"dirac_pi", a.dirac_pi}});
  }
  json j{{"indices", r.indices},
         {"convex", r.convex},
         {"excluded", r.excluded},
         {"classification", to_string(r.classification)},
         {"classification_verified", r.classification_verified},
         {"coplanarity", r.coplanarity},
         {"terminal_residual", r.terminal_residual},
         {"extrapolated_residual", r.extrapolated_residual},
         {"extrapolate_to", r.extrapolate_to},
         {"witness_margin", number_or_null(r.witness_margin)},
         {"witness_stable", r.witness_stable},
         {"arcs", arcs}};
  if (r.witness) j["witness"] = point_to_json(*r.witness);
  return j;
}

json to_json(const QuasiGeodesicSummary& r) {
  json levels = json::array();
  for (const auto& level : r.levels) {
    json inst = json::array();
    for (const auto& q : level.instances) {
      json row{{"epsilon", q.epsilon}, {"intersection", q.intersection}, {"length", q.length},
               {"in_regime", q.in_regime}};
      if (q.in_regime) {
        row["holonomy_length"] = q.holonomy_length;
        row["ratio"] = q.ratio;
      } else {
        row["diagnostic"] = q.diagnostic;
      }
      inst.push_back(row);
    }
    levels.push_back({{"epsilon", level.epsilon}, {"c_epsilon", number_or_null(level.c_epsilon)},
                      {"instances", inst}});
  }
  return json{{"levels", levels},
              {"ratios_at_least_one", r.ratios_at_least_one},
              {"trend_non_increasing", r.trend_non_increasing}};
}

json to_json(const QuotientConvergenceReport& r) {
  json arcs = json::array();
  for (const auto& a : r.arcs) {
    arcs.push_back({{"arc", a.arc_index},
                    {"crosses_pi_part", a.crosses_pi_part},
                    {"limit", a.limit},
                    {"values", a.values},
                    {"tail_deviation", a.tail_deviation},
                    {"tail_inf", number_or_null(a.tail_inf)},
                    {"converges", a.converges},
                    {"liminf_ok", a.liminf_ok}});
  }
  json j{{"pass", r.pass}, {"arcs", arcs}};
  if (r.witness) j["witness_arc"] = *r.witness;
  return j;
}

json to_json(const BranchConvergenceReport& r) {
  json branches = json::array();
  for (const auto& b : r.branches) {
    branches.push_back({{"branch", b.branch},
                        {"converges", b.converges},
                        {"tail_error", b.tail_error},
                        {"decay_exponent", number_or_null(b.decay_exponent)}});
  }
  return json{{"converges", r.converges}, {"branches", branches}};
}

void write_text_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << text;
}

}  // namespace hypbend::io

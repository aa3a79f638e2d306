#include "hypbend/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include "hypbend/io.hpp"

namespace hypbend::cli {

namespace {

using io::json;

struct Options {
  std::vector<std::string> inputs;
  std::string out;
  double delta = Defaults::delta;
  double epsilon = Defaults::epsilon;
  double alpha = Defaults::delta;
  double s = Defaults::epsilon;
  double window = Defaults::window;
  double tolerance = Defaults::tolerance;
  int tail = Defaults::tail;
  std::string pool;
};

std::string base_dir(const std::string& file) {
  const auto parent = std::filesystem::path(file).parent_path();
  return parent.empty() ? std::string(".") : parent.string();
}

// A field that is either an inline object or a path relative to the input file.
json resolve(const json& j, const std::string& dir) {
  if (j.is_string()) return io::read_json_file((std::filesystem::path(dir) / j.get<std::string>()).string());
  return j;
}

void check_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ParameterError(std::string(name) + " must be positive");
}

struct Result {
  json report;
  int status = kExitPass;
  std::string csv;  // optional companion table
};

Result run_bend(const Options& o) {
  const json spec = io::read_json_file(o.inputs.at(0));
  const auto lam = io::parse_lamination(resolve(spec.at("lamination"), base_dir(o.inputs[0])));
  const auto ps = build_pleated(BendingData(lam, spec.value("side", 1)));
  json rows = json::array();
  std::ostringstream csv;
  csv << "arc,measure,crossings\n";
  const json arcs = spec.value("arcs", json::array());
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const Arc2 k = io::parse_arc(arcs[i]);
    const double m = bending_measure(ps, k);
    const auto cs = crossings(k, lam);
    json ids = json::array();
    for (const auto& c : cs) ids.push_back(c.leaf_id);
    rows.push_back({{"arc", i}, {"measure", m}, {"crossings", ids}});
    csv << i << ',' << std::setprecision(17) << m << ',' << cs.size() << '\n';
  }
  const auto convexity = is_convex(ps);
  return {json{{"command", "bend"}, {"measures", rows}, {"convexity", io::to_json(convexity)}}, kExitPass, csv.str()};
}

Result run_approx(const Options& o) {
  const json spec = io::read_json_file(o.inputs.at(0));
  const auto lam = io::parse_lamination(resolve(spec.at("lamination"), base_dir(o.inputs[0])));
  const auto ps = build_pleated(BendingData(lam, spec.value("side", 1)));
  json rows = json::array();
  std::ostringstream csv;
  csv << "request,angle_sum,exact_measure,error,length,bound,ratio,alpha,s,arc_length,violations\n";
  int status = kExitPass;
  const json requests = spec.value("requests", json::array());
  // Validate every request before computing anything.
  std::vector<std::tuple<Arc2, double, double>> parsed;
  for (const auto& r : requests) {
    const double delta = r.contains("delta") ? io::parse_number(r.at("delta")) : o.delta;
    const double eps = r.contains("epsilon") ? io::parse_number(r.at("epsilon")) : o.epsilon;
    if (!(eps > 0.0) || !(eps < std::log(3.0) / 2.0)) {
      std::ostringstream os;
      os << "epsilon must be < (log 3)/2 = " << std::log(3.0) / 2.0 << ", got " << eps;
      throw ParameterError(os.str());
    }
    check_positive(delta, "delta");
    if (!(delta < std::numbers::pi / 2.0)) throw ParameterError("delta must be below pi/2");
    parsed.emplace_back(io::parse_arc(r.at("arc")), delta, eps);
  }
  for (std::size_t i = 0; i < parsed.size(); ++i) {
    const auto& [k, delta, eps] = parsed[i];
    const auto approx = polygonal_approximation(ps, k, delta, eps);
    const auto report = approx_report(ps, k, delta, eps);
    const auto violations = check_polygonal_invariants(ps, k, approx.entries);
    json entries = json::array();
    for (const auto& e : approx.entries) entries.push_back(io::to_json(e));
    json bad = json::array();
    for (const auto& v : violations) bad.push_back({{"invariant", v.invariant}, {"index", v.index}, {"detail", v.detail}});
    const bool ok = violations.empty() && approx.max_angle() < delta && approx.max_spacing() < eps &&
                    static_cast<double>(approx.length()) <= report.bound;
    if (!ok) status = kExitViolation;
    rows.push_back({{"request", i},
                    {"report", io::to_json(report)},
                    {"max_angle", approx.max_angle()},
                    {"max_spacing", approx.max_spacing()},
                    {"violations", bad},
                    {"entries", entries}});
    csv << i << std::setprecision(17) << ',' << report.angle_sum << ',' << report.exact_measure << ','
        << report.error << ',' << report.length << ',' << report.bound << ',' << report.ratio << ',' << report.alpha
        << ',' << report.s << ',' << report.arc_length << ',' << violations.size() << '\n';
  }
  return {json{{"command", "approx"}, {"results", rows}}, status, csv.str()};
}

Result run_fold(const Options& o) {
  const json spec = io::read_json_file(o.inputs.at(0));
  const auto lam = io::parse_lamination(resolve(spec.at("lamination"), base_dir(o.inputs[0])));
  const auto ps = build_pleated(BendingData(lam, spec.value("side", 1)));
  std::ostringstream csv;
  csv << "component,t,x,y,z\n" << std::setprecision(17);
  std::size_t count = 0;
  double worst = 0.0;
  for (std::size_t node = 0; node < ps.tree().node_count(); ++node) {
    for (const auto& x : ps.sample_component(node)) {
      const MinkowskiPoint y = ps.component_map(node).apply(x);
      worst = std::max(worst, std::abs(mink_inner(y.coords(), y.coords()) + 1.0));
      csv << node << ',' << y.t() << ',' << y.x() << ',' << y.y() << ',' << y.z() << '\n';
      ++count;
    }
  }
  const auto convexity = is_convex(ps);
  return {json{{"command", "fold"},
               {"components", ps.tree().node_count()},
               {"points", count},
               {"max_hyperboloid_defect", worst},
               {"convexity", io::to_json(convexity)},
               {"even", is_even(ps)}},
          kExitPass, csv.str()};
}

Result run_dichotomy_cmd(const Options& o) {
  const json spec = io::read_json_file(o.inputs.at(0));
  const FamilySpec family = io::parse_family(spec);
  std::vector<Arc2> arcs;
  for (const auto& a : spec.value("arcs", json::array())) arcs.push_back(io::parse_arc(a));
  const auto tail = static_cast<std::size_t>(spec.value("tail", o.tail));
  const auto report = run_dichotomy(family, arcs, tail, spec.value("extrapolate_to", 10000L));
  std::ostringstream csv;
  csv << "index,convex,coplanarity";
  for (std::size_t a = 0; a < report.arcs.size(); ++a) csv << ",arc" << a;
  csv << '\n' << std::setprecision(17);
  for (std::size_t i = 0; i < report.indices.size(); ++i) {
    csv << report.indices[i] << ',' << (report.convex[i] ? 1 : 0) << ',' << report.coplanarity[i];
    for (const auto& a : report.arcs) csv << ',' << a.values[i];
    csv << '\n';
  }
  bool ok = report.classification_verified;
  for (const auto& a : report.arcs) ok = ok && a.converges;
  return {json{{"command", "dichotomy"}, {"report", io::to_json(report)}}, ok ? kExitPass : kExitViolation, csv.str()};
}

Result run_quasigeo(const Options& o) {
  const json spec = io::read_json_file(o.inputs.at(0));
  std::vector<std::pair<double, std::vector<PeriodicPleating>>> family;
  for (const auto& level : spec.at("levels")) {
    std::vector<PeriodicPleating> instances;
    for (const auto& inst : level.at("instances")) instances.push_back(io::parse_periodic(inst));
    family.emplace_back(io::parse_number(level.at("epsilon")), std::move(instances));
  }
  const auto summary = quasigeodesic_experiment(family);
  std::ostringstream csv;
  csv << "epsilon,intersection,length,holonomy_length,ratio,in_regime\n" << std::setprecision(17);
  for (const auto& level : summary.levels) {
    for (const auto& q : level.instances) {
      csv << q.epsilon << ',' << q.intersection << ',' << q.length << ',';
      if (q.in_regime) csv << q.holonomy_length << ',' << q.ratio;
      else csv << ',';
      csv << ',' << (q.in_regime ? 1 : 0) << '\n';
    }
  }
  const bool ok = summary.ratios_at_least_one && summary.trend_non_increasing;
  return {json{{"command", "quasigeo"}, {"report", io::to_json(summary)}}, ok ? kExitPass : kExitViolation, csv.str()};
}

Result run_rq_compare(const Options& o) {
  if (o.inputs.size() < 2) throw ParameterError("rq-compare needs two lamination files");
  const auto a = io::parse_abstract(io::read_json_file(o.inputs[0]));
  const auto b = io::parse_abstract(io::read_json_file(o.inputs[1]));
  const bool eq = r_equivalent(a, b);
  json j{{"command", "rq-compare"},
         {"equivalent", eq},
         {"canonical_a", io::abstract_to_json(truncate(a).canonical())},
         {"canonical_b", io::abstract_to_json(truncate(b).canonical())}};
  if (!eq && !o.pool.empty()) {
    const auto pool = io::parse_arc_pool(io::read_json_file(o.pool));
    const auto sep = separation_witness(truncate(a), truncate(b), pool);
    json crossings = json::array();
    for (const auto& [id, m] : sep.arc->crossings()) crossings.push_back({id, m});
    j["separation"] = {{"crossings", crossings}, {"gap", sep.gap}};
  }
  return {j, kExitPass, ""};
}

Result run_rq_converge(const Options& o) {
  const json spec = io::read_json_file(o.inputs.at(0));
  std::vector<AbstractLamination> seq;
  for (const auto& l : spec.at("sequence")) seq.push_back(io::parse_abstract(l));
  const auto candidate = io::parse_abstract(spec.at("candidate"));
  const auto pool = io::parse_arc_pool(spec);
  check_positive(o.tolerance, "tol");
  if (o.tail < 1) throw ParameterError("tail must be at least 1");
  const auto report = quotient_convergence_check(seq, candidate, pool, o.tolerance, static_cast<std::size_t>(o.tail));
  return {json{{"command", "rq-converge"}, {"report", io::to_json(report)}}, report.pass ? kExitPass : kExitViolation,
          ""};
}

Result run_tt_check(const Options& o) {
  const json spec = io::read_json_file(o.inputs.at(0));
  const auto tt = io::parse_train_track(spec.at("track"));
  std::optional<Subtrack> carrier;
  if (spec.contains("carrier")) {
    const auto ids = spec.at("carrier").get<std::vector<std::string>>();
    carrier.emplace(tt, std::set<std::string>(ids.begin(), ids.end()));
  }
  json rows = json::object();
  int status = kExitPass;
  for (auto it = spec.at("measures").begin(); it != spec.at("measures").end(); ++it) {
    const auto m = io::parse_measure(it.value());
    const bool valid = validate_measure(tt, m);
    json row{{"valid", valid}, {"switch_defect", switch_defect(tt, m)}};
    if (!valid) status = kExitViolation;
    if (valid && carrier) row["carried_intersection"] = carried_intersection(tt, *carrier, m);
    rows[it.key()] = row;
  }
  json j{{"command", "tt-check"}, {"measures", rows}};
  if (carrier) {
    j["loop_carrier"] = carrier->is_loop_carrier();
    j["incident_branches"] = incident_branches(tt, *carrier);
  }
  return {j, status, ""};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bending of hyperbolic surfaces along finite measured laminations", "hypbend"};
  app.require_subcommand(1);
  Options o;
  auto add_common = [&](CLI::App* sub, bool numeric) {
    sub->add_option("inputs", o.inputs, "Input files")->required();
    sub->add_option("-o,--out", o.out, "Report path (JSON); a .csv companion is written next to it");
    if (numeric) {
      sub->add_option("--delta", o.delta, "Angle bound delta")->capture_default_str();
      sub->add_option("--epsilon", o.epsilon, "Sample spacing epsilon")->capture_default_str();
      sub->add_option("--alpha", o.alpha, "Angle bound alpha")->capture_default_str();
      sub->add_option("--s", o.s, "Sample spacing s")->capture_default_str();
      sub->add_option("--window", o.window, "Window radius R")->capture_default_str();
    }
    sub->add_option("--tol", o.tolerance, "Tail tolerance")->capture_default_str();
    sub->add_option("--tail", o.tail, "Tail window length")->capture_default_str();
  };
  std::map<std::string, Result (*)(const Options&)> handlers{
      {"bend", run_bend},         {"approx", run_approx},           {"fold", run_fold},
      {"dichotomy", run_dichotomy_cmd}, {"quasigeo", run_quasigeo}, {"rq-compare", run_rq_compare},
      {"rq-converge", run_rq_converge}, {"tt-check", run_tt_check}};
  const std::map<std::string, std::string> help{
      {"bend", "Bending measures of arcs"},
      {"approx", "Polygonal approximations and angle-sum reports"},
      {"fold", "Sampled image of the pleated surface (CSV)"},
      {"dichotomy", "Convex / even classification of a family"},
      {"quasigeo", "Translation lengths of periodic pleatings"},
      {"rq-compare", "R-equivalence of two abstract laminations"},
      {"rq-converge", "Quotient convergence of a sequence"},
      {"tt-check", "Train-track measures and carried intersections"}};
  for (const auto& [name, fn] : handlers) {
    auto* sub = app.add_subcommand(name, help.at(name));
    add_common(sub, name == "bend" || name == "approx" || name == "fold");
    if (name == "rq-compare") sub->add_option("--pool", o.pool, "Arc pool for separation witnesses");
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  auto given = [&](const std::string& flag) {
    const CLI::Option* opt = chosen->get_option_no_throw(flag);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--alpha")) o.delta = o.alpha;
  if (given("--s")) o.epsilon = o.s;
  Result result;
  try {
    check_positive(o.window, "window");
    result = handlers.at(name)(o);
  } catch (const Error& e) {
    err << "error [" << e.kind() << "]: " << e.what() << '\n';
    return kExitInput;
  } catch (const json::exception& e) {
    err << "error [parse]: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::out_of_range& e) {
    err << "error [parse]: missing input\n";
    return kExitInput;
  }

  result.report["status"] = result.status;
  const std::string text = result.report.dump(2) + "\n";
  std::string path = o.out;
  if (path.empty()) {
    if (const char* dir = std::getenv(kReportDirEnv)) path = (std::filesystem::path(dir) / (name + ".json")).string();
  }
  if (!path.empty()) {
    io::write_text_file(path, text);
    if (!result.csv.empty()) {
      io::write_text_file(std::filesystem::path(path).replace_extension(".csv").string(), result.csv);
    }
  }
  out << text;
  return result.status;
}

}  // namespace hypbend::cli

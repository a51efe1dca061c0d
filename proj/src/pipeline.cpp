#include "equimetric/pipeline.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "equimetric/error.hpp"
#include "equimetric/verify.hpp"

namespace equimetric {

using nlohmann::json;

namespace {

[[noreturn]] void bad_config(const std::string& why) { throw Error(ErrorKind::InvalidConfig, why); }

void only_keys(const json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) bad_config("unknown field '" + key + "' in " + where);
  }
}

double positive_number(const json& v, const std::string& what) {
  if (!v.is_number()) bad_config(what + " must be a number");
  const double x = v.get<double>();
  if (!(x > 0.0) || !std::isfinite(x)) bad_config(what + " must be positive");
  return x;
}

std::string text(const json& v, const std::string& what) {
  if (!v.is_string()) bad_config(what + " must be a string");
  return v.get<std::string>();
}

// Either "kind" or {"kind": ..., extra fields}.
std::pair<std::string, json> kind_and_body(const json& v, const std::string& what) {
  if (v.is_string()) return {v.get<std::string>(), json::object()};
  if (!v.is_object() || !v.contains("kind")) bad_config(what + " must be a string or an object with 'kind'");
  return {text(v.at("kind"), what + ".kind"), v};
}

DistanceTable read_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  try {
    rows = json::parse(in).get<std::vector<std::vector<double>>>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidConfig, path.string() + ": " + e.what());
  }
  DistanceTable t(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw Error(ErrorKind::NotAMetric, path.string() + ": table is not square");
    for (std::size_t j = 0; j < rows.size(); ++j) t(i, j) = rows[i][j];
  }
  return t;
}

std::string label(Point p) { return "x" + std::to_string(p); }
std::string orbit_label(Orbit q) { return "q" + std::to_string(q); }

std::string members_text(const std::vector<Point>& points) {
  std::string out;
  for (std::size_t i = 0; i < points.size(); ++i) out += (i ? " " : "") + label(points[i]);
  return out;
}

std::string radius_text(const OrbitRadius& r) {
  return format_real(r.radius) + (r.singleton ? " (singleton)" : "");
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out << content;
  if (!out) throw Error(ErrorKind::Io, "failed writing " + path.string());
}

}  // namespace

LiftMode parse_mode(const std::string& mode) {
  if (mode == "general") return LiftMode::General;
  if (mode == "cover") return LiftMode::Cover;
  if (mode == "naive") return LiftMode::Naive;
  bad_config("mode must be general, cover or naive, got '" + mode + "'");
}

ScenarioConfig parse_config(const json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) bad_config("config must be an object");
  only_keys(doc,
            {"scenario", "mode", "group_metric", "quotient_mode", "shrink_factor", "enlargement_factor", "tolerance",
             "output_dir", "slice_family"},
            "config");
  ScenarioConfig c;
  c.base_dir = base_dir;

  if (!doc.contains("scenario")) bad_config("config needs 'scenario'");
  const json& sc = doc.at("scenario");
  if (sc.is_string()) {
    c.scenario = sc.get<std::string>();
  } else if (sc.is_object()) {
    only_keys(sc, {"name", "params"}, "scenario");
    if (!sc.contains("name")) bad_config("scenario needs 'name'");
    c.scenario = text(sc.at("name"), "scenario.name");
    if (sc.contains("params")) {
      if (!sc.at("params").is_object()) bad_config("scenario.params must be an object");
      c.scenario_params = sc.at("params");
    }
  } else {
    bad_config("scenario must be a name or an object");
  }

  if (!doc.contains("mode")) bad_config("config needs 'mode'");
  c.mode = parse_mode(text(doc.at("mode"), "mode"));

  if (doc.contains("group_metric")) {
    auto [kind, body] = kind_and_body(doc.at("group_metric"), "group_metric");
    if (kind == "discrete") {
      only_keys(body, {"kind", "scale"}, "group_metric");
      c.group_metric = GroupMetricKind::Discrete;
      if (body.contains("scale")) c.scale = positive_number(body.at("scale"), "group_metric.scale");
    } else if (kind == "word") {
      only_keys(body, {"kind"}, "group_metric");
      c.group_metric = GroupMetricKind::Word;
    } else if (kind == "explicit") {
      only_keys(body, {"kind", "path"}, "group_metric");
      if (!body.contains("path")) bad_config("explicit group_metric needs 'path'");
      c.group_metric = GroupMetricKind::Explicit;
      c.group_metric_path = text(body.at("path"), "group_metric.path");
    } else {
      bad_config("group_metric kind must be discrete, word or explicit");
    }
  }

  if (doc.contains("quotient_mode")) {
    auto [kind, body] = kind_and_body(doc.at("quotient_mode"), "quotient_mode");
    if (kind == "graph" || kind == "isometric") {
      only_keys(body, {"kind"}, "quotient_mode");
      c.quotient_mode = kind == "graph" ? QuotientMode::Graph : QuotientMode::Isometric;
    } else if (kind == "explicit") {
      only_keys(body, {"kind", "path"}, "quotient_mode");
      if (!body.contains("path")) bad_config("explicit quotient_mode needs 'path'");
      c.quotient_mode = QuotientMode::Explicit;
      c.quotient_path = text(body.at("path"), "quotient_mode.path");
    } else {
      bad_config("quotient_mode must be graph, isometric or explicit");
    }
  }

  if (doc.contains("shrink_factor")) c.shrink_factor = positive_number(doc.at("shrink_factor"), "shrink_factor");
  if (doc.contains("enlargement_factor")) {
    c.enlargement_factor = positive_number(doc.at("enlargement_factor"), "enlargement_factor");
  }
  if (doc.contains("tolerance")) c.tolerance = positive_number(doc.at("tolerance"), "tolerance");
  if (doc.contains("output_dir")) c.output_dir = text(doc.at("output_dir"), "output_dir");
  if (doc.contains("slice_family")) {
    const std::string sf = text(doc.at("slice_family"), "slice_family");
    if (sf == "build") {
      c.slice_family = SliceSource::Build;
    } else if (sf == "singleton") {
      c.slice_family = SliceSource::Singleton;
    } else {
      bad_config("slice_family must be build or singleton");
    }
  }
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::InvalidConfig, path.string() + ": " + e.what());
  }
  return parse_config(doc, path.parent_path());
}

int exit_code_for(const VerificationReport& report) {
  const Check* conn = report.find("lift.connectivity");
  if (conn && conn->status == Status::Fail) return 3;
  return report.all_pass() ? 0 : 2;
}

PipelineResult run_pipeline(const ScenarioConfig& config, unsigned threads) {
  auto resolve = [&](const std::filesystem::path& p) { return p.is_relative() ? config.base_dir / p : p; };

  Scenario scenario = generate_scenario(config.scenario, config.scenario_params, config.base_dir);
  const SampledGSpace& gs = scenario.gspace;

  std::optional<DistanceTable> explicit_d;
  if (config.quotient_mode == QuotientMode::Explicit) explicit_d = read_table(resolve(*config.quotient_path));
  Quotient quotient = quotient_metric(gs, compute_orbits(gs), config.quotient_mode, explicit_d, threads);

  SliceFamily family = config.slice_family == SliceSource::Singleton
                           ? singleton_family(gs, quotient)
                           : build_slice_family(gs, quotient, SliceOptions{config.shrink_factor});

  VerificationReport report;
  if (scenario.region) {
    Check region{"scenario.region", Status::Advisory,
                 static_cast<double>(gs.n_points() - scenario.region->size()), {scenario.region_note}};
    report.add(std::move(region));
  }
  report.merge(verify_slice_family(gs, quotient, family));

  std::optional<OrbitalMetric> orbital;
  if (config.mode == LiftMode::General) {
    GroupMetricSpec spec;
    spec.kind = config.group_metric;
    spec.scale = config.scale;
    if (config.group_metric == GroupMetricKind::Explicit) spec.table = read_table(resolve(*config.group_metric_path));
    std::set<Subgroup> stabilizers;
    for (Point z = 0; z < gs.n_points(); ++z) stabilizers.insert(gs.stabilizer(z));
    const std::vector<Subgroup> of_interest(stabilizers.begin(), stabilizers.end());
    const GroupMetric metric = group_metric(gs.group(), spec, of_interest);
    orbital = build_orbital_metric(gs, quotient, family, metric);
    report.merge(verify_orbital_properties(gs, quotient, family, *orbital, config.tolerance));
  }

  CoverOptions cover{config.shrink_factor, config.enlargement_factor};
  AllowabilityGraph graph =
      build_allowability_graph(gs, quotient, &family, orbital ? &*orbital : nullptr, config.mode, cover);
  LiftedMetric lifted = lift_metric(graph, threads);

  VerifyOptions vopts{config.tolerance, scenario.region};
  report.merge(verify_lifted_metric(gs, quotient, graph, lifted, vopts));
  if (orbital) report.merge(verify_ball_inclusions(gs, quotient, family, orbital->base, *orbital, lifted));
  report.merge(quotient_consistency(gs, quotient, lifted, config.tolerance));

  const int code = exit_code_for(report);
  return PipelineResult{std::move(scenario), std::move(quotient), std::move(family), std::move(orbital),
                        std::move(graph),    std::move(lifted),   std::move(report), code};
}

std::string format_rho_csv(const LiftedMetric& lifted) {
  const std::size_t n = lifted.rho.size();
  std::string out;
  for (Point j = 0; j < n; ++j) out += "," + label(j);
  out += "\n";
  for (Point i = 0; i < n; ++i) {
    out += label(i);
    for (Point j = 0; j < n; ++j) out += "," + format_real(lifted.rho(i, j));
    out += "\n";
  }
  return out;
}

std::string format_quotient_csv(const Quotient& quotient) {
  std::string out;
  for (Orbit q = 0; q < quotient.n_orbits; ++q) out += "," + orbit_label(q);
  out += "\n";
  for (Orbit p = 0; p < quotient.n_orbits; ++p) {
    out += orbit_label(p);
    for (Orbit q = 0; q < quotient.n_orbits; ++q) out += "," + format_real(quotient.d(p, q));
    out += "\n";
  }
  out += "\npoint,orbit,representative\n";
  for (Point x = 0; x < quotient.orbit_of.size(); ++x) {
    const Orbit q = quotient.orbit_of[x];
    out += label(x) + "," + orbit_label(q) + "," + label(quotient.representative[q]) + "\n";
  }
  return out;
}

std::string format_slices(const Quotient& quotient, const SliceFamily& family) {
  std::ostringstream out;
  out << "# orbit radii\n";
  for (Orbit q = 0; q < quotient.n_orbits; ++q) {
    out << orbit_label(q) << "\t" << radius_text(family.radius_of_orbit[q]) << "\n";
  }
  out << "# slices\n";
  for (Point x = 0; x < family.slice_of.size(); ++x) {
    out << label(x) << "\t" << members_text(family.slice_of[x].members()) << "\n";
  }
  out << "# construction log\n";
  for (const SliceLogEntry& e : family.construction_log) {
    out << orbit_label(e.orbit) << "\ttry " << radius_text(e.tried) << "\t"
        << (e.condition.empty() ? "accepted" : e.condition);
    if (!e.witness.empty()) out << "\t" << members_text(e.witness);
    if (e.element) out << "\tg=" << *e.element;
    out << "\n";
  }
  for (const std::string& w : family.warnings) out << "# warning: " << w << "\n";
  return out.str();
}

std::string format_report(const PipelineResult& result, const ScenarioConfig& config) {
  const VerificationReport& r = result.report;
  std::ostringstream out;
  out << "# scenario " << result.scenario.name << " mode " << to_string(config.mode) << "\n";
  out << "# pass " << r.count(Status::Pass) << " fail " << r.count(Status::Fail) << " advisory "
      << r.count(Status::Advisory) << " exit " << result.exit_code << "\n";
  for (const Check& c : r.checks()) out << VerificationReport::format_line(c) << "\n";
  return out.str();
}

void write_outputs(const PipelineResult& result, const ScenarioConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create " + config.output_dir.string() + ": " + ec.message());
  write_file(config.output_dir / "rho.csv", format_rho_csv(result.lifted));
  write_file(config.output_dir / "quotient.csv", format_quotient_csv(result.quotient));
  write_file(config.output_dir / "slices.txt", format_slices(result.quotient, result.family));
  write_file(config.output_dir / "report.txt", format_report(result, config));
}

}  // namespace equimetric

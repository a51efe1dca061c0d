#include "equimetric/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include "equimetric/error.hpp"
#include "equimetric/report.hpp"

namespace equimetric {

using nlohmann::json;

namespace {

std::string s(std::size_t v) { return std::to_string(v); }

DistanceTable circle_metric(std::size_t n) {
  DistanceTable t(n);
  for (Point i = 0; i < n; ++i) {
    for (Point j = 0; j < n; ++j) {
      const std::size_t steps = i > j ? i - j : j - i;
      t(i, j) = 2.0 * std::numbers::pi * static_cast<double>(std::min(steps, n - steps)) / static_cast<double>(n);
    }
  }
  return t;
}

std::vector<Edge> cycle_edges(std::size_t n) {
  std::vector<Edge> edges;
  if (n < 2) return edges;
  for (Point i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  if (n > 2) edges.emplace_back(0, n - 1);
  return edges;
}

DistanceTable line_metric(const std::vector<double>& t) {
  DistanceTable d(t.size());
  for (Point i = 0; i < t.size(); ++i) {
    for (Point j = 0; j < t.size(); ++j) d(i, j) = std::abs(t[i] - t[j]);
  }
  return d;
}

std::vector<Edge> path_edges(std::size_t n) {
  std::vector<Edge> edges;
  for (Point i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return edges;
}

std::vector<double> line_points(std::size_t m, double h) {
  std::vector<double> t(2 * m + 1);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = (static_cast<double>(i) - static_cast<double>(m)) * h;
  return t;
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorKind::InvalidParams, std::string(what) + " must be positive and finite");
  }
}

void require_keys(const json& params, std::initializer_list<const char*> keys, const std::string& scenario) {
  if (!params.is_object()) throw Error(ErrorKind::InvalidParams, scenario + " parameters must be an object");
  std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : params.items()) {
    if (!allowed.count(key)) throw Error(ErrorKind::InvalidParams, "unknown " + scenario + " parameter '" + key + "'");
  }
  for (const char* key : keys) {
    if (!params.contains(key)) throw Error(ErrorKind::InvalidParams, scenario + " needs parameter '" + key + "'");
  }
}

std::size_t get_count(const json& params, const char* key) {
  const json& v = params.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw Error(ErrorKind::InvalidParams, std::string("parameter '") + key + "' must be a positive integer");
  }
  return v.get<std::size_t>();
}

double get_real(const json& params, const char* key) {
  const json& v = params.at(key);
  if (!v.is_number()) throw Error(ErrorKind::InvalidParams, std::string("parameter '") + key + "' must be a number");
  return v.get<double>();
}

template <class T>
T field(const json& doc, const char* key) {
  if (!doc.contains(key)) throw Error(ErrorKind::InvalidParams, std::string("G-space document lacks '") + key + "'");
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidParams, std::string("G-space field '") + key + "': " + e.what());
  }
}

}  // namespace

Scenario circle_scenario(std::size_t n, std::size_t k) {
  if (n < 3) throw Error(ErrorKind::InvalidParams, "circle needs at least 3 points");
  if (k == 0 || n % k != 0) throw Error(ErrorKind::InvalidParams, "group order " + s(k) + " does not divide " + s(n));
  const std::size_t step = n / k;
  std::vector<PartialMap> act;
  for (Element j = 0; j < k; ++j) {
    std::vector<std::optional<Point>> images(n);
    for (Point i = 0; i < n; ++i) images[i] = (i + j * step) % n;
    act.emplace_back(std::move(images));
  }
  SampledSpace space(circle_metric(n), cycle_edges(n));
  return {"circle", bind_action(std::move(space), cyclic_group(k), std::move(act)), std::nullopt, ""};
}

Scenario reflection_scenario(std::size_t m, double h) {
  require_positive(h, "spacing h");
  const std::size_t n = 2 * m + 1;
  std::vector<std::optional<Point>> flip(n);
  for (Point i = 0; i < n; ++i) flip[i] = n - 1 - i;
  std::vector<PartialMap> act{PartialMap::identity(n), PartialMap(std::move(flip))};
  SampledSpace space(line_metric(line_points(m, h)), path_edges(n));
  return {"reflection", bind_action(std::move(space), cyclic_group(2), std::move(act)), std::nullopt, ""};
}

Scenario dihedral_scenario(std::size_t n) {
  if (n < 3) throw Error(ErrorKind::InvalidParams, "dihedral needs at least 3 points");
  Permutation r(n), r_inv(n), flip(n);
  for (Point i = 0; i < n; ++i) {
    r[i] = (i + 1) % n;
    r_inv[i] = (i + n - 1) % n;
    flip[i] = (n - i) % n;
  }
  std::vector<Permutation> gens{r, r_inv, flip};
  std::vector<Permutation> elements;
  FiniteGroup group = permutation_group(gens, &elements);
  std::vector<PartialMap> act;
  for (const Permutation& p : elements) {
    std::vector<std::optional<Point>> images(p.begin(), p.end());
    act.emplace_back(std::move(images));
  }
  SampledSpace space(circle_metric(n), cycle_edges(n));
  return {"dihedral", bind_action(std::move(space), std::move(group), std::move(act)), std::nullopt, ""};
}

Scenario disk_scenario(std::size_t rows, std::size_t cols) {
  if (rows != cols) throw Error(ErrorKind::InvalidParams, "grid " + s(rows) + "x" + s(cols) + " is not rotation symmetric");
  if (rows == 0) throw Error(ErrorKind::InvalidParams, "grid must be non-empty");
  const std::size_t n = rows * cols;
  // Doubled coordinates keep the grid integral for even sizes.
  std::vector<long> x2(n), y2(n);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      x2[r * cols + c] = 2 * static_cast<long>(c) - static_cast<long>(cols - 1);
      y2[r * cols + c] = static_cast<long>(rows - 1) - 2 * static_cast<long>(r);
    }
  }
  auto index_of = [&](long x, long y) {
    const std::size_t c = static_cast<std::size_t>((x + static_cast<long>(cols - 1)) / 2);
    const std::size_t r = static_cast<std::size_t>((static_cast<long>(rows - 1) - y) / 2);
    return r * cols + c;
  };
  DistanceTable metric(n);
  for (Point a = 0; a < n; ++a) {
    for (Point b = 0; b < n; ++b) {
      metric(a, b) = std::hypot(static_cast<double>(x2[a] - x2[b]), static_cast<double>(y2[a] - y2[b])) / 2.0;
    }
  }
  std::vector<Edge> edges;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) edges.emplace_back(r * cols + c, r * cols + c + 1);
      if (r + 1 < rows) edges.emplace_back(r * cols + c, (r + 1) * cols + c);
    }
  }
  std::vector<PartialMap> act;
  std::vector<std::optional<Point>> current(n);
  for (Point p = 0; p < n; ++p) current[p] = p;
  for (Element j = 0; j < 4; ++j) {
    act.emplace_back(current);
    for (Point p = 0; p < n; ++p) {
      const Point q = *current[p];
      current[p] = index_of(-y2[q], x2[q]);  // quarter turn (x, y) -> (-y, x)
    }
  }
  SampledSpace space(std::move(metric), edges);
  return {"disk", bind_action(std::move(space), cyclic_group(4), std::move(act)), std::nullopt, ""};
}

Scenario shift_scenario(std::size_t m, double h, std::size_t max_shift) {
  require_positive(h, "spacing h");
  const double inverse = 1.0 / h;
  const double steps_real = std::round(inverse);
  if (steps_real < 1.0 || std::abs(inverse - steps_real) > 1e-9) {
    throw Error(ErrorKind::InvalidParams, "1/h must be a positive integer so unit shifts map samples to samples");
  }
  const std::size_t steps = static_cast<std::size_t>(steps_real);
  const std::size_t n = 2 * m + 1;
  // Large enough that no two admissible shifts compose across the wrap.
  const std::size_t order = 2 * ((n + steps - 1) / steps + max_shift) + 1;

  std::vector<PartialMap> act;
  for (Element j = 0; j < order; ++j) {
    std::vector<std::optional<Point>> images(n);
    long shift = 0;
    bool admissible = false;
    if (j <= max_shift) {
      shift = static_cast<long>(j);
      admissible = true;
    } else if (order - j <= max_shift) {
      shift = -static_cast<long>(order - j);
      admissible = true;
    }
    if (admissible) {
      for (Point i = 0; i < n; ++i) {
        const long target = static_cast<long>(i) + shift * static_cast<long>(steps);
        if (target >= 0 && target < static_cast<long>(n)) images[i] = static_cast<Point>(target);
      }
    }
    act.emplace_back(std::move(images));
  }

  const std::vector<double> t = line_points(m, h);
  const double margin = static_cast<double>(max_shift) * h / 2.0;
  const double half_length = static_cast<double>(m) * h;
  PointSet region(n);
  for (Point i = 0; i < n; ++i) {
    if (half_length - std::abs(t[i]) > margin + 1e-12) region.insert(i);
  }
  SampledSpace space(line_metric(t), path_edges(n));
  return {"shift", bind_action(std::move(space), cyclic_group(order), std::move(act)), region,
          "checks restricted to points farther than " + format_real(margin) + " from the sample boundary"};
}

Scenario generate_scenario(const std::string& name, const json& params, const std::filesystem::path& base_dir) {
  if (name == "circle") {
    require_keys(params, {"n", "k"}, name);
    return circle_scenario(get_count(params, "n"), get_count(params, "k"));
  }
  if (name == "reflection") {
    require_keys(params, {"m", "h"}, name);
    return reflection_scenario(get_count(params, "m"), get_real(params, "h"));
  }
  if (name == "dihedral") {
    require_keys(params, {"n"}, name);
    return dihedral_scenario(get_count(params, "n"));
  }
  if (name == "disk") {
    require_keys(params, {"rows", "cols"}, name);
    return disk_scenario(get_count(params, "rows"), get_count(params, "cols"));
  }
  if (name == "shift") {
    require_keys(params, {"m", "h", "N"}, name);
    return shift_scenario(get_count(params, "m"), get_real(params, "h"), get_count(params, "N"));
  }
  if (name == "file") {
    require_keys(params, {"path"}, name);
    if (!params.at("path").is_string()) throw Error(ErrorKind::InvalidParams, "file path must be a string");
    std::filesystem::path p = params.at("path").get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    return load_scenario_file(p);
  }
  throw Error(ErrorKind::InvalidParams, "unknown scenario '" + name + "'");
}

json scenario_to_json(const Scenario& scenario) {
  const SampledGSpace& g = scenario.gspace;
  const std::size_t n = g.n_points();
  json doc;
  doc["name"] = scenario.name;
  doc["points"] = n;
  json metric = json::array();
  for (Point i = 0; i < n; ++i) {
    auto row = g.space().base_metric().row(i);
    metric.push_back(std::vector<double>(row.begin(), row.end()));
  }
  doc["metric"] = std::move(metric);
  json edges = json::array();
  for (const auto& [a, b] : g.space().edges()) edges.push_back({a, b});
  doc["edges"] = std::move(edges);
  doc["group"] = {{"mul", g.group().table()}, {"generators", g.group().generators()}};
  json act = json::array();
  for (Element e = 0; e < g.group().order(); ++e) {
    json images = json::array();
    for (const auto& img : g.action(e).images()) images.push_back(img ? json(*img) : json(nullptr));
    act.push_back(std::move(images));
  }
  doc["action"] = std::move(act);
  if (scenario.region) {
    doc["region"] = scenario.region->members();
    doc["region_note"] = scenario.region_note;
  }
  return doc;
}

Scenario scenario_from_json(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorKind::InvalidParams, "G-space document must be an object");
  static const std::set<std::string> known{"name", "points", "metric", "edges", "group", "action", "region",
                                           "region_note"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) throw Error(ErrorKind::InvalidParams, "unknown G-space field '" + key + "'");
  }
  const auto n = field<std::size_t>(doc, "points");
  const auto rows = field<std::vector<std::vector<double>>>(doc, "metric");
  if (rows.size() != n) throw Error(ErrorKind::NotAMetric, "metric has " + s(rows.size()) + " rows for " + s(n) + " points");
  DistanceTable metric(n);
  for (Point i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw Error(ErrorKind::NotAMetric, "metric row " + s(i) + " has wrong length");
    for (Point j = 0; j < n; ++j) metric(i, j) = rows[i][j];
  }
  std::vector<Edge> edges;
  for (const auto& e : field<std::vector<std::vector<long long>>>(doc, "edges")) {
    if (e.size() != 2 || e[0] < 0 || e[1] < 0) throw Error(ErrorKind::BadAdjacency, "edges must be index pairs");
    edges.emplace_back(static_cast<Point>(e[0]), static_cast<Point>(e[1]));
  }
  const json& gdoc = doc.at("group");
  if (!gdoc.is_object() || !gdoc.contains("mul")) throw Error(ErrorKind::InvalidParams, "group needs 'mul'");
  const auto mul = field<MulTable>(gdoc, "mul");
  std::optional<std::vector<Element>> gens;
  if (gdoc.contains("generators")) gens = field<std::vector<Element>>(gdoc, "generators");
  FiniteGroup group = build_group(mul, gens);

  std::vector<PartialMap> act;
  for (const json& images : doc.at("action")) {
    if (!images.is_array() || images.size() != n) {
      throw Error(ErrorKind::InvalidParams, "each action map needs one entry per point");
    }
    std::vector<std::optional<Point>> imgs(n);
    for (Point i = 0; i < n; ++i) {
      if (images[i].is_null()) continue;
      if (!images[i].is_number_integer() || images[i].get<long long>() < 0) {
        throw Error(ErrorKind::IndexOutOfRange, "action image must be a point index or null");
      }
      imgs[i] = images[i].get<Point>();
    }
    act.emplace_back(std::move(imgs));
  }

  std::optional<PointSet> region;
  if (doc.contains("region")) {
    region = PointSet(n);
    for (Point p : field<std::vector<Point>>(doc, "region")) {
      if (p >= n) throw Error(ErrorKind::IndexOutOfRange, "region point " + s(p) + " out of range");
      region->insert(p);
    }
  }
  std::string note = doc.contains("region_note") ? field<std::string>(doc, "region_note") : "";
  std::string name = doc.contains("name") ? field<std::string>(doc, "name") : "file";
  return {std::move(name), bind_action(SampledSpace(std::move(metric), edges), std::move(group), std::move(act)),
          std::move(region), std::move(note)};
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::InvalidParams, path.string() + ": " + e.what());
  }
  return scenario_from_json(doc);
}

}  // namespace equimetric

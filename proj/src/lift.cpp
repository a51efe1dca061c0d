#include "equimetric/lift.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "equimetric/error.hpp"

namespace equimetric {

namespace {

constexpr double kIsometryTolerance = 1e-9;

bool injective_on(const Quotient& quotient, const PointSet& set) {
  std::vector<char> seen(quotient.n_orbits, 0);
  for (Point p : set.members()) {
    if (seen[quotient.orbit_of[p]]) return false;
    seen[quotient.orbit_of[p]] = 1;
  }
  return true;
}

// Shortest paths inside the set, stepping only between adjacent points at
// cost d(pa, pb), reproduce the quotient distance.
bool intrinsically_isometric(const SampledGSpace& gspace, const Quotient& quotient, const PointSet& set) {
  const std::vector<Point> m = set.members();
  const std::size_t k = m.size();
  DistanceTable dist(k, kInfinity);
  for (std::size_t i = 0; i < k; ++i) {
    dist(i, i) = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (i != j && gspace.space().adjacent(m[i], m[j])) dist(i, j) = quotient.distance(m[i], m[j]);
    }
  }
  for (std::size_t via = 0; via < k; ++via) {
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) dist(i, j) = std::min(dist(i, j), dist(i, via) + dist(via, j));
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      if (dist(i, j) > quotient.distance(m[i], m[j]) + kIsometryTolerance) return false;
    }
  }
  return true;
}

bool all_components_injective(const SampledGSpace& gspace, const Quotient& quotient, const PointSet& set) {
  for (const PointSet& c : components(gspace.space().neighbors(), set)) {
    if (!injective_on(quotient, c)) return false;
  }
  return true;
}

std::vector<PointSet> maximal_sets(std::vector<PointSet> sets) {
  std::sort(sets.begin(), sets.end(), [](const PointSet& a, const PointSet& b) { return a.size() > b.size(); });
  std::vector<PointSet> kept;
  for (PointSet& s : sets) {
    const bool covered = std::any_of(kept.begin(), kept.end(), [&](const PointSet& k) { return s.is_subset_of(k); });
    if (!covered) kept.push_back(std::move(s));
  }
  std::sort(kept.begin(), kept.end(),
            [](const PointSet& a, const PointSet& b) { return a.members().front() < b.members().front(); });
  return kept;
}

}  // namespace

std::string_view to_string(LiftMode mode) {
  switch (mode) {
    case LiftMode::General: return "general";
    case LiftMode::Cover: return "cover";
    case LiftMode::Naive: return "naive";
  }
  return "?";
}

std::string_view to_string(EdgeKind kind) {
  switch (kind) {
    case EdgeKind::Slice: return "slice";
    case EdgeKind::Orbit: return "orbit";
    case EdgeKind::SmallSet: return "small-set";
    case EdgeKind::NaiveElementary: return "naive-elementary";
  }
  return "?";
}

WeightedGraph AllowabilityGraph::adjacency() const {
  WeightedGraph g(n_points);
  for (const auto& e : edges) {
    g[e.u].push_back({e.v, e.weight});
    g[e.v].push_back({e.u, e.weight});
  }
  for (auto& arcs : g) {
    std::sort(arcs.begin(), arcs.end(), [](const WeightedArc& a, const WeightedArc& b) { return a.to < b.to; });
  }
  return g;
}

const AllowabilityEdge* AllowabilityGraph::find(Point a, Point b) const {
  if (a > b) std::swap(a, b);
  auto it = std::lower_bound(edges.begin(), edges.end(), std::make_pair(a, b),
                             [](const AllowabilityEdge& e, const std::pair<Point, Point>& key) {
                               return std::make_pair(e.u, e.v) < key;
                             });
  if (it == edges.end() || it->u != a || it->v != b) return nullptr;
  return &*it;
}

std::vector<PointSet> cover_small_sets(const SampledGSpace& gspace, const Quotient& quotient,
                                       const CoverOptions& options) {
  const auto& nbrs = gspace.space().neighbors();
  std::vector<PointSet> accepted;
  for (Orbit o = 0; o < quotient.n_orbits; ++o) {
    const std::vector<double> radii = candidate_radii(quotient, o);
    if (!options.shrink_factor) {
      for (double r : radii) {
        for (PointSet& c : components(nbrs, quotient.preimage_of_ball(o, r))) {
          if (c.size() > 1 && injective_on(quotient, c) && intrinsically_isometric(gspace, quotient, c)) {
            accepted.push_back(std::move(c));
          }
        }
      }
      continue;
    }
    if (!(*options.shrink_factor > 0.0) || !(options.enlargement_factor > 0.0)) {
      throw Error(ErrorKind::InvalidParams, "shrink and enlargement factors must be positive");
    }
    // Largest radius whose ball preimage splits into elementary components.
    double elementary = 0.0;
    for (double r : radii) {
      if (all_components_injective(gspace, quotient, quotient.preimage_of_ball(o, r))) {
        elementary = r;
        break;
      }
    }
    if (!(elementary > 0.0)) continue;
    const double r = elementary / *options.shrink_factor;
    const PointSet enlarged = quotient.preimage_of_ball(o, r * options.enlargement_factor);
    for (PointSet& c : components(nbrs, quotient.preimage_of_ball(o, r))) {
      if (c.size() < 2 || !injective_on(quotient, c)) continue;
      if (!injective_on(quotient, component_of(nbrs, enlarged, c.members().front()))) continue;
      accepted.push_back(std::move(c));
    }
  }
  return maximal_sets(std::move(accepted));
}

std::vector<Edge> naive_elementary_pairs(const SampledGSpace& gspace, const Quotient& quotient) {
  if (quotient.n_orbits > 64) {
    throw Error(ErrorKind::InvalidParams, "naive mode supports at most 64 orbits, got " +
                                              std::to_string(quotient.n_orbits));
  }
  const auto& nbrs = gspace.space().neighbors();
  const std::size_t n = gspace.n_points();
  std::vector<Edge> pairs;
  for (Point start = 0; start < n; ++start) {
    std::set<std::pair<Point, std::uint64_t>> seen;
    std::vector<std::pair<Point, std::uint64_t>> stack;
    const std::uint64_t first = std::uint64_t{1} << quotient.orbit_of[start];
    stack.emplace_back(start, first);
    seen.emplace(start, first);
    std::vector<char> reached(n, 0);
    while (!stack.empty()) {
      auto [p, mask] = stack.back();
      stack.pop_back();
      reached[p] = 1;
      for (Point q : nbrs[p]) {
        const std::uint64_t bit = std::uint64_t{1} << quotient.orbit_of[q];
        if (mask & bit) continue;
        auto state = std::make_pair(q, mask | bit);
        if (seen.insert(state).second) stack.push_back(state);
      }
    }
    for (Point v = start + 1; v < n; ++v) {
      if (reached[v]) pairs.emplace_back(start, v);
    }
  }
  return pairs;
}

AllowabilityGraph build_allowability_graph(const SampledGSpace& gspace, const Quotient& quotient,
                                           const SliceFamily* family, const OrbitalMetric* orbital, LiftMode mode,
                                           const CoverOptions& options) {
  const std::size_t n = gspace.n_points();
  AllowabilityGraph out;
  out.n_points = n;
  out.mode = mode;
  std::map<std::pair<Point, Point>, AllowabilityEdge> edges;
  auto add = [&](Point a, Point b, double w, EdgeKind kind) {
    if (a == b) return;
    if (a > b) std::swap(a, b);
    auto [it, inserted] = edges.try_emplace({a, b}, AllowabilityEdge{a, b, w, kind});
    if (!inserted && w < it->second.weight) it->second.weight = w;
  };

  switch (mode) {
    case LiftMode::General: {
      if (!orbital) throw Error(ErrorKind::NoOrbitalMetric, "general mode needs an orbital metric");
      if (!family) throw Error(ErrorKind::InvalidParams, "general mode needs a slice family");
      for (Point v = 0; v < n; ++v) {
        for (Point u : family->slice_of[v].members()) {
          add(u, v, quotient.distance(u, v) + (*orbital)(u, v), EdgeKind::Slice);
        }
      }
      for (Point u = 0; u < n; ++u) {
        for (Element g = 0; g < gspace.group().order(); ++g) {
          auto gu = gspace.act(g, u);
          if (!gu || *gu == u) continue;
          const double w = (*orbital)(u, *gu);
          if (std::isfinite(w)) add(u, *gu, w, EdgeKind::Orbit);
        }
      }
      break;
    }
    case LiftMode::Cover: {
      out.small_sets = cover_small_sets(gspace, quotient, options);
      for (const PointSet& set : out.small_sets) {
        const auto m = set.members();
        for (std::size_t i = 0; i < m.size(); ++i) {
          for (std::size_t j = i + 1; j < m.size(); ++j) {
            add(m[i], m[j], quotient.distance(m[i], m[j]), EdgeKind::SmallSet);
          }
        }
      }
      break;
    }
    case LiftMode::Naive:
      for (const auto& [u, v] : naive_elementary_pairs(gspace, quotient)) {
        add(u, v, quotient.distance(u, v), EdgeKind::NaiveElementary);
      }
      break;
  }

  out.edges.reserve(edges.size());
  for (auto& [key, e] : edges) out.edges.push_back(e);
  for (Element g : gspace.total_elements()) {
    std::vector<Point> image(n);
    for (Point x = 0; x < n; ++x) image[x] = *gspace.act(g, x);
    out.symmetries.push_back(std::move(image));
  }
  return out;
}

LiftedMetric lift_metric(const AllowabilityGraph& graph, unsigned threads) {
  LiftedMetric out;
  out.mode = graph.mode;
  const WeightedGraph adj = graph.adjacency();
  out.witnesses = all_pairs_shortest_paths(adj, threads);
  out.rho = out.witnesses.dist;

  // Equal-cost witnesses of symmetric pairs may sum in a different order; one
  // value per orbit of pairs keeps the lift exactly invariant.
  const std::size_t n = graph.n_points;
  for (Point a = 0; a < n; ++a) {
    for (Point b = a + 1; b < n; ++b) {
      double v = out.rho(a, b);
      for (const auto& g : graph.symmetries) v = std::min(v, out.witnesses.dist(g[a], g[b]));
      out.rho(a, b) = out.rho(b, a) = v;
    }
  }

  std::vector<std::vector<Point>> nbrs(graph.n_points);
  for (Point p = 0; p < graph.n_points; ++p) {
    for (const auto& arc : adj[p]) nbrs[p].push_back(arc.to);
  }
  PointSet all(graph.n_points);
  for (Point p = 0; p < graph.n_points; ++p) all.insert(p);
  for (const PointSet& c : components(nbrs, all)) out.components.push_back(c.members());
  return out;
}

}  // namespace equimetric

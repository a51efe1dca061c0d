#include "equimetric/quotient.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "equimetric/error.hpp"
#include "equimetric/graph.hpp"

namespace equimetric {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

PointSet Quotient::preimage(const std::vector<char>& orbit_mask) const {
  PointSet out(orbit_of.size());
  for (Point x = 0; x < orbit_of.size(); ++x) {
    if (orbit_mask[orbit_of[x]]) out.insert(x);
  }
  return out;
}

PointSet Quotient::preimage_of_ball(Orbit center, double radius) const {
  std::vector<char> mask(n_orbits, 0);
  for (Orbit q = 0; q < n_orbits; ++q) mask[q] = d(center, q) < radius;
  return preimage(mask);
}

Quotient compute_orbits(const SampledGSpace& gspace) {
  const std::size_t n = gspace.n_points();
  UnionFind uf(n);
  for (Element g = 0; g < gspace.group().order(); ++g) {
    for (Point x = 0; x < n; ++x) {
      if (auto gx = gspace.act(g, x)) uf.unite(x, *gx);
    }
  }
  Quotient q;
  q.orbit_of.assign(n, 0);
  std::vector<long> orbit_of_root(n, -1);
  for (Point x = 0; x < n; ++x) {
    const std::size_t root = uf.find(x);
    if (orbit_of_root[root] < 0) {
      orbit_of_root[root] = static_cast<long>(q.n_orbits++);
      q.representative.push_back(x);
      q.members.emplace_back();
    }
    const auto o = static_cast<Orbit>(orbit_of_root[root]);
    q.orbit_of[x] = o;
    q.members[o].push_back(x);
  }
  q.stabilizer_of.resize(n);
  for (Point x = 0; x < n; ++x) q.stabilizer_of[x] = gspace.stabilizer(x);

  std::set<Edge> qedges;
  for (auto [a, b] : gspace.space().edges()) {
    const Orbit oa = q.orbit_of[a];
    const Orbit ob = q.orbit_of[b];
    if (oa != ob) qedges.insert({std::min(oa, ob), std::max(oa, ob)});
  }
  q.quotient_adjacency.assign(qedges.begin(), qedges.end());
  return q;
}

Quotient quotient_metric(const SampledGSpace& gspace, Quotient q, QuotientMode mode,
                         const std::optional<DistanceTable>& table, unsigned threads) {
  const auto& space = gspace.space();
  const std::size_t n = gspace.n_points();
  const std::size_t m = q.n_orbits;
  q.mode = mode;

  switch (mode) {
    case QuotientMode::Isometric: {
      for (Element g : gspace.total_elements()) {
        for (Point a = 0; a < n; ++a) {
          for (Point b = 0; b < n; ++b) {
            const double moved = space.distance(*gspace.act(g, a), *gspace.act(g, b));
            if (std::abs(moved - space.distance(a, b)) > 1e-9) {
              throw Error(ErrorKind::NotIsometricAction, "element " + std::to_string(g) +
                                                             " does not preserve the base distance of (" +
                                                             std::to_string(a) + "," + std::to_string(b) + ")");
            }
          }
        }
      }
      q.d = DistanceTable(m, kInfinity);
      for (Point a = 0; a < n; ++a) {
        for (Point b = 0; b < n; ++b) {
          double& cell = q.d(q.orbit_of[a], q.orbit_of[b]);
          cell = std::min(cell, space.distance(a, b));
        }
      }
      break;
    }
    case QuotientMode::Graph: {
      WeightedGraph graph(m);
      for (auto [oa, ob] : q.quotient_adjacency) {
        double w = kInfinity;
        for (auto [a, b] : space.edges()) {
          const Orbit pa = q.orbit_of[a];
          const Orbit pb = q.orbit_of[b];
          if ((pa == oa && pb == ob) || (pa == ob && pb == oa)) w = std::min(w, space.distance(a, b));
        }
        graph[oa].push_back({ob, w});
        graph[ob].push_back({oa, w});
      }
      for (auto& arcs : graph) {
        std::sort(arcs.begin(), arcs.end(), [](const auto& x, const auto& y) { return x.to < y.to; });
      }
      auto sp = all_pairs_shortest_paths(graph, threads);
      for (Orbit a = 0; a < m; ++a) {
        for (Orbit b = 0; b < m; ++b) {
          if (!std::isfinite(sp.dist(a, b))) {
            throw Error(ErrorKind::DisconnectedQuotient,
                        "orbits " + std::to_string(a) + " and " + std::to_string(b) + " are not joined by adjacency");
          }
        }
      }
      q.d = std::move(sp.dist);
      break;
    }
    case QuotientMode::Explicit: {
      if (!table || table->size() != m) {
        throw Error(ErrorKind::NotAMetric, "explicit quotient table must be " + std::to_string(m) + "x" +
                                               std::to_string(m));
      }
      if (auto v = metric_violation(*table, 1e-9)) throw Error(ErrorKind::NotAMetric, *v);
      q.d = *table;
      break;
    }
  }
  return q;
}

}  // namespace equimetric

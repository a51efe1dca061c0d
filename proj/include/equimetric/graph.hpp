#pragma once

#include <vector>

#include "equimetric/types.hpp"

namespace equimetric {

struct WeightedArc {
  Point to;
  double weight;
};

/// Undirected weighted graph as sorted adjacency lists.
using WeightedGraph = std::vector<std::vector<WeightedArc>>;

/// Component labels (ascending by least member) of the subgraph induced on
/// `subset`; points outside the subset get label -1.
std::vector<long> induced_components(const std::vector<std::vector<Point>>& neighbors, const PointSet& subset);

/// The component of `seed` inside the subgraph induced on `subset`.
PointSet component_of(const std::vector<std::vector<Point>>& neighbors, const PointSet& subset, Point seed);

/// Every component of the induced subgraph, ordered by least member.
std::vector<PointSet> components(const std::vector<std::vector<Point>>& neighbors, const PointSet& subset);

/// All-pairs shortest paths over non-negative weights.
///
/// Distances come from one Dijkstra run per source (sources split across
/// `threads` workers). Each reported value is then re-summed along the
/// canonical path, the lexicographically smallest point sequence among the
/// minimal-cost paths for the ordered pair (min, max), so the table is exactly
/// symmetric and independent of the thread count.
struct ShortestPaths {
  DistanceTable dist;
  /// paths[i][j] for i < j; empty when unreachable. paths[i][i] = {i}.
  std::vector<std::vector<std::vector<Point>>> paths;

  const std::vector<Point>& path(Point a, Point b) const { return a <= b ? paths[a][b] : paths[b][a]; }
};

ShortestPaths all_pairs_shortest_paths(const WeightedGraph& graph, unsigned threads = 1, double tie_tolerance = 1e-9);

}  // namespace equimetric

#pragma once

#include <optional>
#include <vector>

#include "equimetric/gspace.hpp"

namespace equimetric {

enum class QuotientMode { Graph, Isometric, Explicit };

/// Orbit space X/G with the projection p and a metric d.
struct Quotient {
  std::size_t n_orbits = 0;
  std::vector<Orbit> orbit_of;          // p
  std::vector<Point> representative;    // least point of each orbit
  std::vector<std::vector<Point>> members;  // ascending
  std::vector<Subgroup> stabilizer_of;  // per point
  std::vector<Edge> quotient_adjacency; // image of adjacency under p, no self-loops
  DistanceTable d;                      // empty until quotient_metric
  QuotientMode mode = QuotientMode::Graph;

  double distance(Point a, Point b) const { return d(orbit_of[a], orbit_of[b]); }
  bool same_orbit(Point a, Point b) const { return orbit_of[a] == orbit_of[b]; }
  PointSet preimage(const std::vector<char>& orbit_mask) const;
  /// Points whose orbit lies in the open ball K_d(center, radius).
  PointSet preimage_of_ball(Orbit center, double radius) const;
};

/// Orbits are the classes of the relation generated by all defined partial
/// maps; for a total action these are the usual group orbits.
Quotient compute_orbits(const SampledGSpace& gspace);

/// Fills in `d`. Isometric mode minimises the base metric over orbit pairs;
/// graph mode runs shortest paths on the quotient adjacency with edge weight
/// the least base distance over adjacent lifts; explicit mode validates and
/// adopts `table`.
Quotient quotient_metric(const SampledGSpace& gspace, Quotient orbits, QuotientMode mode,
                         const std::optional<DistanceTable>& table = std::nullopt, unsigned threads = 1);

}  // namespace equimetric

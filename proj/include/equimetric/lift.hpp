#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "equimetric/graph.hpp"
#include "equimetric/orbital.hpp"
#include "equimetric/slices.hpp"

namespace equimetric {

enum class LiftMode { General, Cover, Naive };
enum class EdgeKind { Slice, Orbit, SmallSet, NaiveElementary };

std::string_view to_string(LiftMode mode);
std::string_view to_string(EdgeKind kind);

struct AllowabilityEdge {
  Point u = 0;  // u < v
  Point v = 0;
  double weight = 0.0;
  EdgeKind kind = EdgeKind::Slice;
};

struct AllowabilityGraph {
  std::size_t n_points = 0;
  LiftMode mode = LiftMode::General;
  std::vector<AllowabilityEdge> edges;  // sorted by (u, v), one per pair
  /// Cover mode: the accepted small sets, maximal under inclusion, ordered by
  /// least member.
  std::vector<PointSet> small_sets;
  /// Point maps of the total group elements; the graph is invariant under each.
  std::vector<std::vector<Point>> symmetries;

  WeightedGraph adjacency() const;
  const AllowabilityEdge* find(Point a, Point b) const;
};

struct CoverOptions {
  /// Unset: direct check. Set: conservative radii (largest elementary radius
  /// divided by this factor, with the enlarged ball also elementary).
  std::optional<double> shrink_factor;
  double enlargement_factor = 4.0;
};

/// Components C of quotient-ball preimages on which p is injective and along
/// which the quotient distance is realized by paths inside C.
std::vector<PointSet> cover_small_sets(const SampledGSpace& gspace, const Quotient& quotient,
                                       const CoverOptions& options = {});

/// Pairs (u, v) joined by a path visiting each orbit at most once, i.e. lying
/// in a common connected set on which p is injective. Needs at most 64 orbits.
std::vector<Edge> naive_elementary_pairs(const SampledGSpace& gspace, const Quotient& quotient);

/// `family` is used in general mode, `orbital` is required in general mode
/// (NoOrbitalMetric otherwise).
AllowabilityGraph build_allowability_graph(const SampledGSpace& gspace, const Quotient& quotient,
                                           const SliceFamily* family, const OrbitalMetric* orbital, LiftMode mode,
                                           const CoverOptions& options = {});

struct LiftedMetric {
  DistanceTable rho;
  LiftMode mode = LiftMode::General;
  ShortestPaths witnesses;
  /// Components of the allowability graph, ordered by least member.
  std::vector<std::vector<Point>> components;

  bool connected() const { return components.size() <= 1; }
  const std::vector<Point>& witness(Point a, Point b) const { return witnesses.path(a, b); }
};

LiftedMetric lift_metric(const AllowabilityGraph& graph, unsigned threads = 1);

}  // namespace equimetric

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "equimetric/group.hpp"
#include "equimetric/types.hpp"

namespace equimetric {

using Edge = std::pair<Point, Point>;  // stored with first < second

/// Finite point sample with a metric and a neighbourhood graph standing in for
/// the topology: connected vertex sets play the role of connected open sets.
class SampledSpace {
 public:
  /// Throws NotAMetric or BadAdjacency. Edges may be given in either order.
  SampledSpace(DistanceTable base_metric, const std::vector<Edge>& edges);

  std::size_t n_points() const noexcept { return metric_.size(); }
  const DistanceTable& base_metric() const noexcept { return metric_; }
  double distance(Point a, Point b) const { return metric_(a, b); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<std::vector<Point>>& neighbors() const noexcept { return neighbors_; }
  bool adjacent(Point a, Point b) const;

 private:
  DistanceTable metric_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Point>> neighbors_;
};

/// Injective partial map on point indices.
class PartialMap {
 public:
  PartialMap() = default;
  explicit PartialMap(std::vector<std::optional<Point>> images);
  static PartialMap identity(std::size_t n);

  std::size_t domain_size() const noexcept { return images_.size(); }
  std::optional<Point> operator()(Point x) const { return images_[x]; }
  bool defined_at(Point x) const { return images_[x].has_value(); }
  bool is_total() const noexcept { return total_; }
  const std::vector<std::optional<Point>>& images() const noexcept { return images_; }

 private:
  std::vector<std::optional<Point>> images_;
  bool total_ = true;
};

/// A sampled space with a validated action of a finite group by (partial)
/// graph automorphisms.
class SampledGSpace {
 public:
  const SampledSpace& space() const noexcept { return space_; }
  const FiniteGroup& group() const noexcept { return group_; }
  std::size_t n_points() const noexcept { return space_.n_points(); }

  const PartialMap& action(Element g) const { return act_[g]; }
  std::optional<Point> act(Element g, Point x) const { return act_[g](x); }
  bool is_total(Element g) const { return act_[g].is_total(); }
  bool all_total() const noexcept { return all_total_; }
  /// Elements acting by total maps, ascending.
  const std::vector<Element>& total_elements() const noexcept { return total_elements_; }

  /// {g : g defined at x and g.x = x}, ascending.
  const Subgroup& stabilizer(Point x) const { return stabilizers_[x]; }

  /// Image of a point set under g, dropping points where g is undefined.
  PointSet image(Element g, const PointSet& s) const;

 private:
  friend SampledGSpace bind_action(SampledSpace, FiniteGroup, std::vector<PartialMap>);
  SampledGSpace(SampledSpace space, FiniteGroup group) : space_(std::move(space)), group_(std::move(group)) {}

  SampledSpace space_;
  FiniteGroup group_;
  std::vector<PartialMap> act_;
  std::vector<Subgroup> stabilizers_;
  std::vector<Element> total_elements_;
  bool all_total_ = true;
};

/// Validates the action and records stabilizers. Scan order is row-major over
/// (g, h, x) so the first reported violation is deterministic.
SampledGSpace bind_action(SampledSpace space, FiniteGroup group, std::vector<PartialMap> act);

/// Returns a description of the first metric-axiom violation, if any.
std::optional<std::string> metric_violation(const DistanceTable& table, double tolerance);

}  // namespace equimetric

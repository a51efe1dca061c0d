#pragma once

#include <optional>
#include <span>
#include <vector>

#include "equimetric/report.hpp"
#include "equimetric/slices.hpp"

namespace equimetric {

enum class GroupMetricKind { Discrete, Word, Explicit };

struct GroupMetricSpec {
  GroupMetricKind kind = GroupMetricKind::Discrete;
  double scale = 1.0;                  // discrete only
  std::optional<DistanceTable> table;  // explicit only
};

/// Left-invariant metric on a finite group.
struct GroupMetric {
  DistanceTable table;
  GroupMetricKind kind = GroupMetricKind::Discrete;
  double scale = 1.0;
  /// Subgroups of interest for which right invariance was verified.
  std::vector<Subgroup> right_invariant_subgroups;

  double operator()(Element a, Element b) const { return table(a, b); }
  bool flagged_right_invariant(std::span<const Element> subgroup) const;
};

/// d(gk, hk) == d(g, h) for all g, h in G and k in K.
bool is_right_invariant(const FiniteGroup& group, const DistanceTable& table, std::span<const Element> subgroup,
                        double tolerance = 1e-12);

/// Builds and validates a group metric. Right invariance is tested against
/// each subgroup in `subgroups_of_interest`.
GroupMetric group_metric(const FiniteGroup& group, const GroupMetricSpec& spec,
                         std::span<const Subgroup> subgroups_of_interest = {});

/// Pseudometric on the cosets G/K induced by d_G.
class CosetMetric {
 public:
  /// Throws NotASubgroup. With `debug`, every call evaluates both forms and
  /// throws std::logic_error if they disagree while right invariance holds.
  CosetMetric(const FiniteGroup& group, const GroupMetric& metric, Subgroup subgroup, bool debug = false);

  /// Minimum of d_G(g1 u, g2 v) over u, v in K.
  double full_form(Element g1, Element g2) const;
  /// Minimum of d_G(g1, g2 u) over u in K; equals full_form under right invariance.
  double reduced_form(Element g1, Element g2) const;
  /// Reduced form when d_G is right K-invariant, full form otherwise.
  double operator()(Element g1, Element g2) const;

  bool right_invariant() const noexcept { return right_invariant_; }
  const Subgroup& subgroup() const noexcept { return subgroup_; }

 private:
  const FiniteGroup* group_;
  const GroupMetric* metric_;
  Subgroup subgroup_;
  bool right_invariant_;
  bool debug_;
};

double coset_distance(const FiniteGroup& group, const GroupMetric& metric, const Subgroup& subgroup, Element g1,
                      Element g2);

/// One local family of orbit metrics, anchored at an orbit representative.
struct Chart {
  Point center = 0;
  PointSet slice;
  double radius = 0.0;
  std::vector<double> weight;                  // normalized bump value per orbit
  std::vector<std::optional<Point>> base_point;  // per orbit: least point of the orbit inside the slice
  DistanceTable table;                         // chart metric on same-orbit pairs; NaN where undefined
};

/// G-invariant family of metrics on orbits, zero across orbits.
struct OrbitalMetric {
  DistanceTable values;
  std::vector<Chart> charts;
  GroupMetric base;

  double operator()(Point a, Point b) const { return values(a, b); }
};

/// Chart distance between a and b (same orbit) measured from `base`, an
/// orbit point used to identify the orbit with G/G_base.
double chart_distance(const SampledGSpace& gspace, const GroupMetric& metric, Point base, Point a, Point b);

OrbitalMetric build_orbital_metric(const SampledGSpace& gspace, const Quotient& quotient, const SliceFamily& family,
                                   const GroupMetric& metric);

/// Witness searches over realized-value grids. Each returns the smallest grid
/// value that works, or nothing.
std::optional<double> small_displacement_witness(const SampledGSpace& gspace, const Quotient& quotient,
                                                 const SliceFamily& family, const OrbitalMetric& orbital, Point x,
                                                 double eps, std::span<const double> delta_grid);
std::optional<double> subcontinuity_witness(const SampledGSpace& gspace, const Quotient& quotient,
                                            const SliceFamily& family, const OrbitalMetric& orbital, Point x,
                                            std::span<const double> delta_grid, double tolerance);
std::optional<double> displacement_control_witness(const SampledGSpace& gspace, const OrbitalMetric& orbital, Point x,
                                                   double delta, std::span<const double> eps_grid);

VerificationReport verify_orbital_properties(const SampledGSpace& gspace, const Quotient& quotient,
                                             const SliceFamily& family, const OrbitalMetric& orbital,
                                             double tolerance = 1e-9);

}  // namespace equimetric

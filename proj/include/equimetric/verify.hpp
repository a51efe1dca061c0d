#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "equimetric/lift.hpp"
#include "equimetric/report.hpp"

namespace equimetric {

struct VerifyOptions {
  double tolerance = 1e-9;
  /// When set, pair checks only consider pairs with both points in the region.
  std::optional<PointSet> region;
};

/// Every metric-axiom violation of a table, restricted to `region` if given.
/// Infinite entries are skipped in the triangle check.
std::vector<std::string> metric_axiom_violations(const DistanceTable& table, double tolerance,
                                                 const std::optional<PointSet>& region = std::nullopt,
                                                 double* max_excess = nullptr);

VerificationReport verify_lifted_metric(const SampledGSpace& gspace, const Quotient& quotient,
                                        const AllowabilityGraph& graph, const LiftedMetric& lifted,
                                        const VerifyOptions& options = {});

/// B(delta) = {g : d_G(g, e) < delta}.
std::vector<Element> group_ball(const GroupMetric& metric, const FiniteGroup& group, double delta);
/// {g y : g in B(delta), y in S_x(radius), g defined at y}.
PointSet translated_subslice(const SampledGSpace& gspace, const Quotient& quotient, const SliceFamily& family,
                             const GroupMetric& metric, Point x, double delta, double radius);
/// Open rho-ball around x.
PointSet rho_ball(const LiftedMetric& lifted, Point x, double eps);

/// Smallest grid delta with B(delta) S_x(delta) inside the open rho-ball of radius eps.
std::optional<double> inner_inclusion_witness(const SampledGSpace& gspace, const Quotient& quotient,
                                              const SliceFamily& family, const GroupMetric& metric,
                                              const LiftedMetric& lifted, Point x, double eps,
                                              std::span<const double> delta_grid);
/// Smallest grid eps with the rho-ball of radius eps inside B(delta) S_x(eps)
/// and the quotient ball K_d(px, eps) inside p S_x.
std::optional<double> outer_inclusion_witness(const SampledGSpace& gspace, const Quotient& quotient,
                                              const SliceFamily& family, const GroupMetric& metric,
                                              const LiftedMetric& lifted, Point x, double delta,
                                              std::span<const double> eps_grid);

VerificationReport verify_ball_inclusions(const SampledGSpace& gspace, const Quotient& quotient,
                                          const SliceFamily& family, const GroupMetric& metric,
                                          const OrbitalMetric& orbital, const LiftedMetric& lifted);

/// d'(P, Q) = min of rho over orbit pairs, compared against d.
DistanceTable induced_quotient_metric(const Quotient& quotient, const LiftedMetric& lifted);
VerificationReport quotient_consistency(const SampledGSpace& gspace, const Quotient& quotient,
                                        const LiftedMetric& lifted, double tolerance = 1e-9);

}  // namespace equimetric

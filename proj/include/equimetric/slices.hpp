#pragma once

#include <optional>
#include <string>
#include <vector>

#include "equimetric/quotient.hpp"
#include "equimetric/report.hpp"

namespace equimetric {

/// Radius state of one orbit. A singleton slice is the terminal fallback used
/// when even the smallest ball has a component meeting the orbit twice.
struct OrbitRadius {
  double radius = 0.0;
  bool singleton = false;

  bool operator==(const OrbitRadius&) const = default;
};

/// One step of the greedy radius search.
struct SliceLogEntry {
  Orbit orbit = 0;
  OrbitRadius tried;
  /// Empty when the radius was accepted; otherwise the failed condition.
  std::string condition;
  /// Points (x, y, other) naming the violation; `element` for translate checks.
  std::vector<Point> witness;
  std::optional<Element> element;
  /// Radii of all orbits right after this step.
  std::vector<OrbitRadius> state;
};

struct SliceFamily {
  std::vector<PointSet> slice_of;
  std::vector<OrbitRadius> radius_of_orbit;
  std::vector<SliceLogEntry> construction_log;
  std::vector<std::string> warnings;  // e.g. DegenerateFamily

  bool degenerate() const;
};

struct SliceOptions {
  /// Conservative mode: after the direct check settles a radius, divide it by
  /// this factor before the joint re-shrinking pass.
  std::optional<double> shrink_factor;
};

/// Candidate radii for an orbit, descending: realized quotient distances from
/// the orbit, midpoints between consecutive ones, and one radius covering the
/// whole quotient.
std::vector<double> candidate_radii(const Quotient& quotient, Orbit center);

/// Component containing x of the preimage of the open ball K_d(px, radius).
PointSet ball_slice(const SampledGSpace& gspace, const Quotient& quotient, Point x, const OrbitRadius& radius);

SliceFamily build_slice_family(const SampledGSpace& gspace, const Quotient& quotient, const SliceOptions& options = {});

/// Family with S_x = {x} for every point.
SliceFamily singleton_family(const SampledGSpace& gspace, const Quotient& quotient);

/// Exhaustive check of every slice condition; every violation is listed.
VerificationReport verify_slice_family(const SampledGSpace& gspace, const Quotient& quotient,
                                       const SliceFamily& family);

/// S_x intersected with the preimage of a set of orbits. Throws EmptyResult if
/// the orbit of x is not in the set.
PointSet subslice(const SliceFamily& family, const Quotient& quotient, Point x, const std::vector<char>& orbit_mask);

/// S_x(eps) = S_x intersected with the preimage of K_d(px, eps).
PointSet subslice_ball(const SliceFamily& family, const Quotient& quotient, Point x, double eps);

/// Largest quotient distance between orbits met by the set.
double quotient_diameter(const Quotient& quotient, const PointSet& set);

}  // namespace equimetric

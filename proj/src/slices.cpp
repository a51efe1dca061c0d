#include "equimetric/slices.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "equimetric/error.hpp"
#include "equimetric/graph.hpp"

namespace equimetric {

namespace {

std::string s(std::size_t v) { return std::to_string(v); }

struct Violation {
  std::string condition;
  std::vector<Point> witness;
  std::optional<Element> element;
};

// Conditions that only involve one orbit: the slice meets its own orbit once
// and is disjoint from its translates by elements outside the stabilizer.
std::optional<Violation> orbit_violation(const SampledGSpace& gspace, const Quotient& quotient, Orbit orbit,
                                         const std::vector<PointSet>& slices) {
  for (Point x : quotient.members[orbit]) {
    const PointSet& sx = slices[x];
    for (Point y : quotient.members[orbit]) {
      if (y != x && sx.contains(y)) return Violation{"orbit-meets-once", {x, y}, std::nullopt};
    }
    for (Element g = 0; g < gspace.group().order(); ++g) {
      const auto gx = gspace.act(g, x);
      if (gx && *gx == x) continue;
      if (gspace.image(g, sx).intersects(sx)) return Violation{"translate-disjoint", {x}, g};
    }
  }
  return std::nullopt;
}

std::optional<Violation> separation_violation(const Quotient& quotient, const std::vector<PointSet>& slices) {
  for (Point x = 0; x < slices.size(); ++x) {
    for (Point y : slices[x].members()) {
      for (Point other : quotient.members[quotient.orbit_of[x]]) {
        if (other != x && slices[y].intersects(slices[other])) {
          return Violation{"neighbor-separation", {x, y, other}, std::nullopt};
        }
      }
    }
  }
  return std::nullopt;
}

bool witness_present(const Violation& v, const Quotient& quotient, const std::vector<PointSet>& slices) {
  const Point x = v.witness[0];
  const Point y = v.witness[1];
  const Point other = v.witness[2];
  (void)quotient;
  return slices[x].contains(y) && slices[y].intersects(slices[other]);
}

}  // namespace

bool SliceFamily::degenerate() const {
  return std::all_of(slice_of.begin(), slice_of.end(), [](const PointSet& p) { return p.size() == 1; });
}

std::vector<double> candidate_radii(const Quotient& quotient, Orbit center) {
  std::vector<double> values;
  for (Orbit q = 0; q < quotient.n_orbits; ++q) values.push_back(quotient.d(center, q));
  values.push_back(0.0);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  std::vector<double> out;
  for (std::size_t i = 1; i < values.size(); ++i) {
    out.push_back(values[i]);
    out.push_back(0.5 * (values[i - 1] + values[i]));
  }
  const double top = values.back() > 0.0 ? 2.0 * values.back() : 1.0;
  out.push_back(top);
  std::sort(out.begin(), out.end(), std::greater<>());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PointSet ball_slice(const SampledGSpace& gspace, const Quotient& quotient, Point x, const OrbitRadius& radius) {
  if (radius.singleton) return PointSet::singleton(gspace.n_points(), x);
  const PointSet pre = quotient.preimage_of_ball(quotient.orbit_of[x], radius.radius);
  return component_of(gspace.space().neighbors(), pre, x);
}

double quotient_diameter(const Quotient& quotient, const PointSet& set) {
  std::vector<char> seen(quotient.n_orbits, 0);
  std::vector<Orbit> orbits;
  for (Point p : set.members()) {
    if (!seen[quotient.orbit_of[p]]) {
      seen[quotient.orbit_of[p]] = 1;
      orbits.push_back(quotient.orbit_of[p]);
    }
  }
  double diam = 0.0;
  for (Orbit a : orbits) {
    for (Orbit b : orbits) diam = std::max(diam, quotient.d(a, b));
  }
  return diam;
}

SliceFamily build_slice_family(const SampledGSpace& gspace, const Quotient& quotient, const SliceOptions& options) {
  const std::size_t n = gspace.n_points();
  const std::size_t m = quotient.n_orbits;
  if (options.shrink_factor && !(*options.shrink_factor > 0.0)) {
    throw Error(ErrorKind::InvalidParams, "shrink factor must be positive");
  }

  std::vector<std::vector<double>> candidates(m);
  for (Orbit o = 0; o < m; ++o) candidates[o] = candidate_radii(quotient, o);

  SliceFamily family;
  family.radius_of_orbit.assign(m, OrbitRadius{});
  family.slice_of.assign(n, PointSet(n));

  auto refresh = [&](Orbit o) {
    for (Point x : quotient.members[o]) family.slice_of[x] = ball_slice(gspace, quotient, x, family.radius_of_orbit[o]);
  };
  auto smallest = [&](Orbit o) { return OrbitRadius{candidates[o].back(), true}; };
  // Next state strictly below the current one.
  auto step_down = [&](Orbit o) {
    const OrbitRadius cur = family.radius_of_orbit[o];
    if (cur.singleton) return cur;
    for (double c : candidates[o]) {
      if (c < cur.radius) return OrbitRadius{c, false};
    }
    return smallest(o);
  };
  auto log = [&](Orbit o, OrbitRadius tried, const std::optional<Violation>& v) {
    SliceLogEntry e;
    e.orbit = o;
    e.tried = tried;
    if (v) {
      e.condition = v->condition;
      e.witness = v->witness;
      e.element = v->element;
    }
    e.state = family.radius_of_orbit;
    family.construction_log.push_back(std::move(e));
  };

  // Descending scan per orbit, ascending representative order.
  for (Orbit o = 0; o < m; ++o) {
    family.radius_of_orbit[o] = OrbitRadius{candidates[o].front(), false};
    while (true) {
      refresh(o);
      auto v = orbit_violation(gspace, quotient, o, family.slice_of);
      if (!v) {
        log(o, family.radius_of_orbit[o], std::nullopt);
        break;
      }
      const OrbitRadius tried = family.radius_of_orbit[o];
      family.radius_of_orbit[o] = step_down(o);
      log(o, tried, v);
      if (tried.singleton) break;  // unreachable for valid actions: singletons pass
    }
    if (options.shrink_factor && !family.radius_of_orbit[o].singleton) {
      const OrbitRadius tried = family.radius_of_orbit[o];
      family.radius_of_orbit[o].radius /= *options.shrink_factor;
      refresh(o);
      log(o, tried, Violation{"conservative-shrink", {}, std::nullopt});
    }
  }

  // Joint pass for the separation condition between neighbouring slices.
  while (auto v = separation_violation(quotient, family.slice_of)) {
    const Point x = v->witness[0];
    const Point y = v->witness[1];
    const Orbit ox = quotient.orbit_of[x];
    const Orbit oy = quotient.orbit_of[y];
    const double dx = quotient_diameter(quotient, family.slice_of[x]);
    const double dy = quotient_diameter(quotient, family.slice_of[y]);
    Orbit target;
    if (dx != dy) {
      target = dx > dy ? ox : oy;
    } else {
      target = std::min(ox, oy);
    }
    if (family.radius_of_orbit[target].singleton) target = target == ox ? oy : ox;
    if (family.radius_of_orbit[target].singleton) break;  // nothing left to shrink

    const OrbitRadius tried = family.radius_of_orbit[target];
    do {
      family.radius_of_orbit[target] = step_down(target);
      refresh(target);
    } while (!family.radius_of_orbit[target].singleton && witness_present(*v, quotient, family.slice_of));
    log(target, tried, v);
  }

  if (family.degenerate()) {
    family.warnings.push_back("DegenerateFamily: every slice is a singleton; the lift may be disconnected");
  }
  return family;
}

SliceFamily singleton_family(const SampledGSpace& gspace, const Quotient& quotient) {
  SliceFamily family;
  const std::size_t n = gspace.n_points();
  for (Orbit o = 0; o < quotient.n_orbits; ++o) {
    family.radius_of_orbit.push_back(OrbitRadius{candidate_radii(quotient, o).back(), true});
  }
  for (Point x = 0; x < n; ++x) family.slice_of.push_back(PointSet::singleton(n, x));
  family.warnings.push_back("DegenerateFamily: every slice is a singleton; the lift may be disconnected");
  return family;
}

VerificationReport verify_slice_family(const SampledGSpace& gspace, const Quotient& quotient,
                                       const SliceFamily& family) {
  const std::size_t n = gspace.n_points();
  const auto& slices = family.slice_of;
  const auto& group = gspace.group();
  const auto& neighbors = gspace.space().neighbors();
  VerificationReport report;

  std::vector<std::string> contains, meets_once, translate, stab, equiv, separation, by_element, open, connected;
  for (Point x = 0; x < n; ++x) {
    const PointSet& sx = slices[x];
    if (!sx.contains(x)) contains.push_back("x=" + s(x));
    for (Point y : quotient.members[quotient.orbit_of[x]]) {
      if (y != x && sx.contains(y)) meets_once.push_back("x=" + s(x) + ",y=" + s(y));
    }
    if (components(neighbors, sx).size() != 1) connected.push_back("x=" + s(x));

    for (Element g = 0; g < group.order(); ++g) {
      const auto gx = gspace.act(g, x);
      const bool fixes = gx && *gx == x;
      const PointSet moved = gspace.image(g, sx);
      if (!fixes && moved.intersects(sx)) translate.push_back("x=" + s(x) + ",g=" + s(g));
      if (fixes) {
        bool whole = true;
        for (Point y : sx.members()) whole = whole && gspace.action(g).defined_at(y);
        if (!whole || !(moved == sx)) stab.push_back("x=" + s(x) + ",h=" + s(g));
      }
      if (gx) {
        const bool ok = gspace.is_total(g) ? moved == slices[*gx] : moved.is_subset_of(slices[*gx]);
        if (!ok) equiv.push_back("x=" + s(x) + ",g=" + s(g));
      }
    }

    for (Point y : sx.members()) {
      for (Point other : quotient.members[quotient.orbit_of[x]]) {
        if (other != x && slices[y].intersects(slices[other])) {
          separation.push_back("x=" + s(x) + ",y=" + s(y) + ",gx=" + s(other));
        }
      }
      for (Element g = 0; g < group.order(); ++g) {
        const auto gx = gspace.act(g, x);
        if (!gx || *gx == x) continue;
        if (slices[y].intersects(slices[*gx])) by_element.push_back("x=" + s(x) + ",y=" + s(y) + ",g=" + s(g));
      }

      // The intersection must be open in S_y: a union of components of the
      // part of S_y lying over the image of S_x.
      std::vector<char> image_mask(quotient.n_orbits, 0);
      for (Point z : sx.members()) image_mask[quotient.orbit_of[z]] = 1;
      const PointSet over = slices[y].intersection(quotient.preimage(image_mask));
      const PointSet common = sx.intersection(slices[y]);
      for (const PointSet& comp : components(neighbors, over)) {
        if (comp.intersects(common) && !comp.is_subset_of(common)) {
          open.push_back("x=" + s(x) + ",y=" + s(y));
          break;
        }
      }
    }
  }

  report.add_exhaustive("slices.contains-point", std::move(contains));
  report.add_exhaustive("slices.orbit-meets-once", std::move(meets_once));
  report.add_exhaustive("slices.translate-disjoint", std::move(translate));
  report.add_exhaustive("slices.stabilizer-invariant", std::move(stab));
  report.add_exhaustive("slices.equivariant", std::move(equiv));
  report.add_exhaustive("slices.neighbor-separation", std::move(separation));
  report.add_exhaustive("slices.separation-by-element", std::move(by_element));
  report.add_exhaustive("slices.open-intersection", std::move(open));
  report.add_exhaustive("slices.connected", std::move(connected));

  Check degenerate{"slices.degenerate-family", Status::Pass, 0.0, {}};
  if (family.degenerate()) {
    degenerate.status = Status::Advisory;
    degenerate.witnesses.push_back("DegenerateFamily: every slice is a singleton");
  }
  report.add(std::move(degenerate));

  // Statistic for the stronger nesting variant S_y subset of S_x; never a failure.
  Check nested{"slices.nested-statistic", Status::Advisory, 0.0, {}};
  std::size_t pairs = 0;
  std::size_t nested_pairs = 0;
  for (Point x = 0; x < n; ++x) {
    for (Point y : slices[x].members()) {
      ++pairs;
      if (slices[y].is_subset_of(slices[x])) ++nested_pairs;
    }
  }
  nested.max_residual = static_cast<double>(pairs - nested_pairs);
  nested.witnesses.push_back("nested " + s(nested_pairs) + " of " + s(pairs) + " pairs");
  report.add(std::move(nested));
  return report;
}

PointSet subslice(const SliceFamily& family, const Quotient& quotient, Point x, const std::vector<char>& orbit_mask) {
  if (!orbit_mask[quotient.orbit_of[x]]) {
    throw Error(ErrorKind::EmptyResult, "orbit of point " + s(x) + " is outside the quotient set");
  }
  return family.slice_of[x].intersection(quotient.preimage(orbit_mask));
}

PointSet subslice_ball(const SliceFamily& family, const Quotient& quotient, Point x, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorKind::EmptyResult, "subslice radius must be positive");
  std::vector<char> mask(quotient.n_orbits, 0);
  for (Orbit q = 0; q < quotient.n_orbits; ++q) mask[q] = quotient.d(quotient.orbit_of[x], q) < eps;
  return subslice(family, quotient, x, mask);
}

}  // namespace equimetric

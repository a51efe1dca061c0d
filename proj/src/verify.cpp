#include "equimetric/verify.hpp"

#include <algorithm>
#include <cmath>

#include "equimetric/grid.hpp"

namespace equimetric {

namespace {

constexpr double kExactTolerance = 1e-12;

std::string s(std::size_t v) { return std::to_string(v); }
std::string pair_text(Point a, Point b) { return "(" + s(a) + "," + s(b) + ")"; }

bool in_region(const std::optional<PointSet>& region, Point p) { return !region || region->contains(p); }

double gap(double a, double b) {
  if (std::isinf(a) || std::isinf(b)) return a == b ? 0.0 : kInfinity;
  return std::abs(a - b);
}

std::string set_text(const std::vector<Point>& points) {
  std::string out = "{";
  for (std::size_t i = 0; i < points.size(); ++i) out += (i ? "," : "") + s(points[i]);
  return out + "}";
}

}  // namespace

std::vector<std::string> metric_axiom_violations(const DistanceTable& t, double tolerance,
                                                 const std::optional<PointSet>& region, double* max_excess) {
  std::vector<std::string> bad;
  double worst = 0.0;
  const std::size_t n = t.size();
  for (Point a = 0; a < n; ++a) {
    if (!in_region(region, a)) continue;
    if (t(a, a) != 0.0) bad.push_back("nonzero diagonal at " + s(a));
    for (Point b = 0; b < n; ++b) {
      if (a == b || !in_region(region, b)) continue;
      if (!(t(a, b) > 0.0)) bad.push_back("zero distance " + pair_text(a, b));
      if (a < b && t(a, b) != t(b, a)) {
        worst = std::max(worst, gap(t(a, b), t(b, a)));
        bad.push_back("asymmetric " + pair_text(a, b));
      }
      for (Point c = 0; c < n; ++c) {
        if (!in_region(region, c)) continue;
        const double excess = t(a, c) - t(a, b) - t(b, c);
        if (std::isfinite(excess) && excess > tolerance) {
          worst = std::max(worst, excess);
          bad.push_back("triangle (" + s(a) + "," + s(b) + "," + s(c) + ")");
        }
      }
    }
  }
  if (max_excess) *max_excess = worst;
  return bad;
}

VerificationReport verify_lifted_metric(const SampledGSpace& gspace, const Quotient& quotient,
                                        const AllowabilityGraph& graph, const LiftedMetric& lifted,
                                        const VerifyOptions& options) {
  const std::size_t n = gspace.n_points();
  const DistanceTable& rho = lifted.rho;
  const auto& region = options.region;
  const double tol = options.tolerance;
  VerificationReport report;

  {
    Check c;
    c.name = "lift.connectivity";
    c.status = lifted.connected() ? Status::Pass : Status::Fail;
    c.max_residual = static_cast<double>(lifted.components.size() - (lifted.components.empty() ? 0 : 1));
    if (!lifted.connected()) {
      for (const auto& comp : lifted.components) c.witnesses.push_back(set_text(comp));
    }
    report.add(std::move(c));
  }

  bool any_finite = n < 2;
  for (Point a = 0; a < n && !any_finite; ++a) {
    for (Point b = 0; b < n; ++b) {
      if (a != b && std::isfinite(rho(a, b))) {
        any_finite = true;
        break;
      }
    }
  }
  auto add = [&](std::string name, std::vector<std::string> bad, double residual) {
    Check c;
    c.name = std::move(name);
    c.status = !any_finite ? Status::Advisory : bad.empty() ? Status::Pass : Status::Fail;
    c.max_residual = residual;
    c.witnesses = std::move(bad);
    if (!any_finite) c.witnesses.insert(c.witnesses.begin(), "no finite off-diagonal distance");
    report.add(std::move(c));
  };

  {
    double excess = 0.0;
    auto bad = metric_axiom_violations(rho, tol, region, &excess);
    add("lift.metric-axioms", std::move(bad), excess);
  }

  {
    std::vector<std::string> bad;
    double residual = 0.0;
    for (Element g : gspace.total_elements()) {
      for (Point a = 0; a < n; ++a) {
        if (!in_region(region, a)) continue;
        for (Point b = 0; b < n; ++b) {
          if (!in_region(region, b)) continue;
          const double r = gap(rho(*gspace.act(g, a), *gspace.act(g, b)), rho(a, b));
          residual = std::max(residual, r);
          if (r > kExactTolerance) bad.push_back("g=" + s(g) + " " + pair_text(a, b));
        }
      }
    }
    add("lift.invariance", std::move(bad), residual);
  }

  {
    std::vector<std::string> bad;
    double residual = 0.0;
    for (Point a = 0; a < n; ++a) {
      for (Point b = 0; b < n; ++b) {
        if (!in_region(region, a) || !in_region(region, b)) continue;
        const double deficit = quotient.distance(a, b) - rho(a, b);
        if (deficit > tol) {
          residual = std::max(residual, deficit);
          bad.push_back(pair_text(a, b));
        }
      }
    }
    add("lift.lower-bound", std::move(bad), residual);
  }

  {
    double step = kInfinity;
    for (const auto& e : graph.edges) {
      if (e.weight > 0.0) step = std::min(step, e.weight);
    }
    std::vector<std::string> bad;
    double residual = 0.0;
    for (Point a = 0; a < n; ++a) {
      for (Point b = a + 1; b < n; ++b) {
        if (!quotient.same_orbit(a, b) || !in_region(region, a) || !in_region(region, b)) continue;
        if (std::isinf(rho(a, b))) continue;  // reported by connectivity
        if (!(rho(a, b) > 0.0) || rho(a, b) < step - tol) {
          residual = std::max(residual, step - rho(a, b));
          bad.push_back(pair_text(a, b));
        }
      }
    }
    add("lift.orbit-positivity", std::move(bad), residual);
  }

  if (graph.mode != LiftMode::General) {
    // Pairs the construction declares local: common small sets, or naive edges.
    std::vector<std::string> bad;
    double residual = 0.0;
    auto check_pair = [&](Point a, Point b) {
      if (!in_region(region, a) || !in_region(region, b)) return;
      const double r = gap(rho(a, b), quotient.distance(a, b));
      residual = std::max(residual, r);
      if (r > kExactTolerance) bad.push_back(pair_text(a, b));
    };
    if (graph.mode == LiftMode::Cover) {
      for (const PointSet& set : graph.small_sets) {
        const auto m = set.members();
        for (std::size_t i = 0; i < m.size(); ++i) {
          for (std::size_t j = i + 1; j < m.size(); ++j) check_pair(m[i], m[j]);
        }
      }
    } else {
      for (const auto& e : graph.edges) check_pair(e.u, e.v);
    }
    add("lift.local-isometry", std::move(bad), residual);

    // The closed rho-ball reaching the nearest other point must project isometrically.
    std::vector<std::string> ball_bad;
    double ball_residual = 0.0;
    for (Point x = 0; x < n; ++x) {
      if (!in_region(region, x)) continue;
      double r = kInfinity;
      for (Point y = 0; y < n; ++y) {
        if (y != x && rho(x, y) > 0.0) r = std::min(r, rho(x, y));
      }
      if (std::isinf(r)) continue;
      std::vector<Point> ball;
      for (Point y = 0; y < n; ++y) {
        if (rho(x, y) <= r + tol && in_region(region, y)) ball.push_back(y);
      }
      bool ok = true;
      for (Point u : ball) {
        for (Point v : ball) {
          const double g = gap(rho(u, v), quotient.distance(u, v));
          ball_residual = std::max(ball_residual, g);
          if (g > kExactTolerance && ok) {
            ok = false;
            ball_bad.push_back("x=" + s(x) + " " + pair_text(u, v));
          }
        }
      }
    }
    add("lift.local-isometry-balls", std::move(ball_bad), ball_residual);
  }

  {
    std::vector<std::string> bad;
    double residual = 0.0;
    for (Point a = 0; a < n; ++a) {
      for (Point b = a + 1; b < n; ++b) {
        const auto& path = lifted.witness(a, b);
        if (path.empty()) continue;
        std::vector<Point> sorted_path = path;
        std::sort(sorted_path.begin(), sorted_path.end());
        bool ok = std::adjacent_find(sorted_path.begin(), sorted_path.end()) == sorted_path.end();
        ok = ok && path.front() == a && path.back() == b;
        double sum = 0.0;
        for (std::size_t i = 0; ok && i + 1 < path.size(); ++i) {
          const AllowabilityEdge* e = graph.find(path[i], path[i + 1]);
          if (!e) {
            ok = false;
          } else {
            sum += e->weight;
          }
        }
        if (ok) residual = std::max(residual, gap(sum, rho(a, b)));
        if (!ok || gap(sum, rho(a, b)) > tol) bad.push_back(pair_text(a, b));
      }
    }
    add("lift.witness-simple", std::move(bad), residual);
  }

  {
    // Nearest rho-neighbour should be a base neighbour or an orbit mate.
    Check c;
    c.name = "lift.compatibility";
    c.status = Status::Advisory;
    std::size_t misses = 0;
    for (Point x = 0; x < n; ++x) {
      double r = kInfinity;
      for (Point y = 0; y < n; ++y) {
        if (y != x) r = std::min(r, rho(x, y));
      }
      if (std::isinf(r)) continue;
      bool ok = false;
      for (Point y = 0; y < n && !ok; ++y) {
        if (y != x && rho(x, y) <= r + tol) {
          ok = gspace.space().adjacent(x, y) || quotient.same_orbit(x, y);
        }
      }
      if (!ok) {
        ++misses;
        c.witnesses.push_back("x=" + s(x));
      }
    }
    c.max_residual = static_cast<double>(misses);
    report.add(std::move(c));
  }

  return report;
}

std::vector<Element> group_ball(const GroupMetric& metric, const FiniteGroup& group, double delta) {
  std::vector<Element> out;
  for (Element g = 0; g < group.order(); ++g) {
    if (metric(g, group.identity()) < delta) out.push_back(g);
  }
  return out;
}

PointSet translated_subslice(const SampledGSpace& gspace, const Quotient& quotient, const SliceFamily& family,
                             const GroupMetric& metric, Point x, double delta, double radius) {
  const PointSet sub = subslice_ball(family, quotient, x, radius);
  PointSet out(gspace.n_points());
  for (Element g : group_ball(metric, gspace.group(), delta)) out = out.union_with(gspace.image(g, sub));
  return out;
}

PointSet rho_ball(const LiftedMetric& lifted, Point x, double eps) {
  PointSet out(lifted.rho.size());
  for (Point y = 0; y < lifted.rho.size(); ++y) {
    if (lifted.rho(x, y) < eps) out.insert(y);
  }
  return out;
}

std::optional<double> inner_inclusion_witness(const SampledGSpace& gspace, const Quotient& quotient,
                                              const SliceFamily& family, const GroupMetric& metric,
                                              const LiftedMetric& lifted, Point x, double eps,
                                              std::span<const double> delta_grid) {
  const PointSet ball = rho_ball(lifted, x, eps);
  for (double delta : delta_grid) {
    if (translated_subslice(gspace, quotient, family, metric, x, delta, delta).is_subset_of(ball)) return delta;
  }
  return std::nullopt;
}

std::optional<double> outer_inclusion_witness(const SampledGSpace& gspace, const Quotient& quotient,
                                              const SliceFamily& family, const GroupMetric& metric,
                                              const LiftedMetric& lifted, Point x, double delta,
                                              std::span<const double> eps_grid) {
  std::vector<char> slice_image(quotient.n_orbits, 0);
  for (Point y : family.slice_of[x].members()) slice_image[quotient.orbit_of[y]] = 1;
  const Orbit px = quotient.orbit_of[x];
  for (double eps : eps_grid) {
    bool inside = true;
    for (Orbit q = 0; q < quotient.n_orbits && inside; ++q) {
      if (quotient.d(px, q) < eps && !slice_image[q]) inside = false;
    }
    if (!inside) continue;
    if (rho_ball(lifted, x, eps).is_subset_of(translated_subslice(gspace, quotient, family, metric, x, delta, eps))) {
      return eps;
    }
  }
  return std::nullopt;
}

VerificationReport verify_ball_inclusions(const SampledGSpace& gspace, const Quotient& quotient,
                                          const SliceFamily& family, const GroupMetric& metric,
                                          const OrbitalMetric& orbital, const LiftedMetric& lifted) {
  std::vector<double> values = lifted.rho.values();
  for (const DistanceTable* t : {&quotient.d, &metric.table, &orbital.values}) {
    values.insert(values.end(), t->values().begin(), t->values().end());
  }
  const std::vector<double> grid = realized_grid(std::move(values));
  const std::size_t n = gspace.n_points();

  VerificationReport report;
  auto add = [&](std::string name, std::vector<std::string> found, std::vector<std::string> missing) {
    Check c;
    c.name = std::move(name);
    c.status = missing.empty() ? Status::Pass : Status::Fail;
    c.witnesses = missing.empty() ? std::move(found) : std::move(missing);
    report.add(std::move(c));
  };

  {
    std::vector<std::string> found, missing;
    for (Point x = 0; x < n; ++x) {
      for (double eps : grid) {
        auto delta = inner_inclusion_witness(gspace, quotient, family, metric, lifted, x, eps, grid);
        if (delta) {
          found.push_back("x=" + s(x) + " eps=" + format_real(eps) + " delta=" + format_real(*delta));
        } else {
          missing.push_back("x=" + s(x) + " eps=" + format_real(eps));
        }
      }
    }
    add("balls.inner-inclusion", std::move(found), std::move(missing));
  }
  {
    std::vector<std::string> found, missing;
    for (Point x = 0; x < n; ++x) {
      for (double delta : grid) {
        auto eps = outer_inclusion_witness(gspace, quotient, family, metric, lifted, x, delta, grid);
        if (eps) {
          found.push_back("x=" + s(x) + " delta=" + format_real(delta) + " eps=" + format_real(*eps));
        } else {
          missing.push_back("x=" + s(x) + " delta=" + format_real(delta));
        }
      }
    }
    add("balls.outer-inclusion", std::move(found), std::move(missing));
  }
  return report;
}

DistanceTable induced_quotient_metric(const Quotient& quotient, const LiftedMetric& lifted) {
  DistanceTable out(quotient.n_orbits, kInfinity);
  for (Orbit p = 0; p < quotient.n_orbits; ++p) {
    for (Orbit q = 0; q < quotient.n_orbits; ++q) {
      for (Point a : quotient.members[p]) {
        for (Point b : quotient.members[q]) out(p, q) = std::min(out(p, q), lifted.rho(a, b));
      }
    }
  }
  return out;
}

VerificationReport quotient_consistency(const SampledGSpace& gspace, const Quotient& quotient,
                                        const LiftedMetric& lifted, double tolerance) {
  (void)gspace;
  VerificationReport report;
  const DistanceTable dp = induced_quotient_metric(quotient, lifted);
  bool finite = true;
  for (double v : lifted.rho.values()) finite = finite && std::isfinite(v);

  {
    Check c;
    c.name = "quotient.consistency-residual";
    c.status = Status::Advisory;
    for (Orbit p = 0; p < quotient.n_orbits; ++p) {
      for (Orbit q = 0; q < quotient.n_orbits; ++q) c.max_residual = std::max(c.max_residual, gap(dp(p, q), quotient.d(p, q)));
    }
    if (!finite) c.witnesses.push_back("lifted metric has infinite entries");
    report.add(std::move(c));
  }
  {
    Check c;
    c.name = "quotient.consistency-metric";
    double excess = 0.0;
    std::vector<std::string> bad = metric_axiom_violations(dp, tolerance, std::nullopt, &excess);
    c.max_residual = excess;
    if (!finite) {
      c.status = Status::Advisory;
      c.witnesses.push_back("lifted metric has infinite entries");
    } else {
      c.status = bad.empty() ? Status::Pass : Status::Fail;
    }
    c.witnesses.insert(c.witnesses.end(), bad.begin(), bad.end());
    report.add(std::move(c));
  }
  return report;
}

}  // namespace equimetric

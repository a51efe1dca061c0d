#include "equimetric/orbital.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <stdexcept>

#include "equimetric/error.hpp"
#include "equimetric/grid.hpp"

namespace equimetric {

namespace {

std::string s(std::size_t v) { return std::to_string(v); }

bool approx_equal(double a, double b, double tol) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::abs(a - b) <= tol;
}

DistanceTable discrete_table(std::size_t n, double scale) {
  DistanceTable t(n, scale);
  for (std::size_t i = 0; i < n; ++i) t(i, i) = 0.0;
  return t;
}

DistanceTable word_table(const FiniteGroup& group) {
  const std::size_t n = group.order();
  const auto& gens = group.generators();
  for (Element g : gens) {
    if (std::find(gens.begin(), gens.end(), group.inv(g)) == gens.end()) {
      throw Error(ErrorKind::GeneratorsNotInverseClosed,
                  "inverse of generator " + s(g) + " is not among the generators");
    }
  }
  // Word length from the identity; the Cayley graph joins g and g*s.
  std::vector<double> length(n, kInfinity);
  std::deque<Element> queue{group.identity()};
  length[group.identity()] = 0.0;
  while (!queue.empty()) {
    Element g = queue.front();
    queue.pop_front();
    for (Element gen : gens) {
      Element h = group.mul(g, gen);
      if (std::isinf(length[h])) {
        length[h] = length[g] + 1.0;
        queue.push_back(h);
      }
    }
  }
  for (Element g = 0; g < n; ++g) {
    if (std::isinf(length[g])) {
      throw Error(ErrorKind::GeneratorsDontGenerate, "element " + s(g) + " is not a word in the generators");
    }
  }
  DistanceTable t(n);
  for (Element a = 0; a < n; ++a) {
    for (Element b = 0; b < n; ++b) t(a, b) = length[group.mul(group.inv(a), b)];
  }
  return t;
}

void require_left_invariant(const FiniteGroup& group, const DistanceTable& t) {
  const std::size_t n = group.order();
  for (Element k = 0; k < n; ++k) {
    for (Element a = 0; a < n; ++a) {
      for (Element b = 0; b < n; ++b) {
        if (!approx_equal(t(group.mul(k, a), group.mul(k, b)), t(a, b), 1e-12)) {
          throw Error(ErrorKind::NotLeftInvariant, "d(" + s(k) + "*" + s(a) + ", " + s(k) + "*" + s(b) +
                                                       ") differs from d(" + s(a) + ", " + s(b) + ")");
        }
      }
    }
  }
}

Subgroup sorted(Subgroup k) {
  std::sort(k.begin(), k.end());
  k.erase(std::unique(k.begin(), k.end()), k.end());
  return k;
}

// First element carrying `base` to `target`, if any.
std::optional<Element> transporter(const SampledGSpace& gspace, Point base, Point target) {
  for (Element g = 0; g < gspace.group().order(); ++g) {
    if (gspace.act(g, base) == target) return g;
  }
  return std::nullopt;
}

// Chart table entries for one orbit, measured from `base`.
void fill_orbit_distances(const SampledGSpace& gspace, const CosetMetric& coset, Point base,
                          const std::vector<Point>& orbit, DistanceTable& out) {
  std::vector<std::optional<Element>> lift(orbit.size());
  for (std::size_t i = 0; i < orbit.size(); ++i) lift[i] = transporter(gspace, base, orbit[i]);
  for (std::size_t i = 0; i < orbit.size(); ++i) {
    for (std::size_t j = 0; j < orbit.size(); ++j) {
      double v;
      if (i == j) {
        v = 0.0;
      } else if (!lift[i] || !lift[j]) {
        v = kInfinity;
      } else {
        v = coset(*lift[i], *lift[j]);
      }
      out(orbit[i], orbit[j]) = v;
    }
  }
}

std::vector<double> table_values(const DistanceTable& t) { return t.values(); }

std::string witness_text(Point x, const char* a_name, double a, const char* b_name, double b) {
  return "x=" + s(x) + " " + a_name + "=" + format_real(a) + " " + b_name + "=" + format_real(b);
}

Check existence_check(std::string name, std::vector<std::string> found, std::vector<std::string> missing) {
  Check c;
  c.name = std::move(name);
  c.status = missing.empty() ? Status::Pass : Status::Fail;
  c.witnesses = missing.empty() ? std::move(found) : std::move(missing);
  return c;
}

}  // namespace

bool GroupMetric::flagged_right_invariant(std::span<const Element> subgroup) const {
  Subgroup k(subgroup.begin(), subgroup.end());
  k = sorted(std::move(k));
  return std::find(right_invariant_subgroups.begin(), right_invariant_subgroups.end(), k) !=
         right_invariant_subgroups.end();
}

bool is_right_invariant(const FiniteGroup& group, const DistanceTable& table, std::span<const Element> subgroup,
                        double tolerance) {
  const std::size_t n = group.order();
  for (Element k : subgroup) {
    for (Element a = 0; a < n; ++a) {
      for (Element b = 0; b < n; ++b) {
        if (std::abs(table(group.mul(a, k), group.mul(b, k)) - table(a, b)) > tolerance) return false;
      }
    }
  }
  return true;
}

GroupMetric group_metric(const FiniteGroup& group, const GroupMetricSpec& spec,
                         std::span<const Subgroup> subgroups_of_interest) {
  GroupMetric m;
  m.kind = spec.kind;
  switch (spec.kind) {
    case GroupMetricKind::Discrete:
      if (!(spec.scale > 0.0) || !std::isfinite(spec.scale)) {
        throw Error(ErrorKind::InvalidParams, "discrete metric scale must be positive, got " + format_real(spec.scale));
      }
      m.scale = spec.scale;
      m.table = discrete_table(group.order(), spec.scale);
      break;
    case GroupMetricKind::Word:
      m.table = word_table(group);
      break;
    case GroupMetricKind::Explicit: {
      if (!spec.table) throw Error(ErrorKind::InvalidParams, "explicit group metric needs a table");
      if (spec.table->size() != group.order()) {
        throw Error(ErrorKind::NotAMetric, "group metric table has size " + s(spec.table->size()) +
                                               ", group order is " + s(group.order()));
      }
      if (auto why = metric_violation(*spec.table, 1e-9)) throw Error(ErrorKind::NotAMetric, *why);
      require_left_invariant(group, *spec.table);
      m.table = *spec.table;
      break;
    }
  }
  for (const Subgroup& k : subgroups_of_interest) {
    Subgroup ks = sorted(k);
    if (is_right_invariant(group, m.table, ks, 0.0) && !m.flagged_right_invariant(ks)) {
      m.right_invariant_subgroups.push_back(std::move(ks));
    }
  }
  return m;
}

CosetMetric::CosetMetric(const FiniteGroup& group, const GroupMetric& metric, Subgroup subgroup, bool debug)
    : group_(&group), metric_(&metric), subgroup_(sorted(std::move(subgroup))), debug_(debug) {
  for (Element k : subgroup_) {
    if (k >= group.order()) throw Error(ErrorKind::NotASubgroup, "element " + s(k) + " is not in the group");
  }
  if (subgroup_.empty() || !group.is_subgroup(subgroup_)) {
    throw Error(ErrorKind::NotASubgroup, "element list is not closed under multiplication and inverses");
  }
  right_invariant_ =
      metric.flagged_right_invariant(subgroup_) || is_right_invariant(group, metric.table, subgroup_, 0.0);
}

double CosetMetric::full_form(Element g1, Element g2) const {
  double best = kInfinity;
  for (Element u : subgroup_) {
    const Element a = group_->mul(g1, u);
    for (Element v : subgroup_) best = std::min(best, metric_->table(a, group_->mul(g2, v)));
  }
  return best;
}

double CosetMetric::reduced_form(Element g1, Element g2) const {
  double best = kInfinity;
  for (Element u : subgroup_) best = std::min(best, metric_->table(g1, group_->mul(g2, u)));
  return best;
}

double CosetMetric::operator()(Element g1, Element g2) const {
  if (!right_invariant_) return full_form(g1, g2);
  const double fast = reduced_form(g1, g2);
  if (debug_) {
    const double full = full_form(g1, g2);
    if (full != fast) {
      throw std::logic_error("coset forms disagree at (" + s(g1) + ", " + s(g2) + "): " + format_real(full) +
                             " vs " + format_real(fast));
    }
  }
  return fast;
}

double coset_distance(const FiniteGroup& group, const GroupMetric& metric, const Subgroup& subgroup, Element g1,
                      Element g2) {
  return CosetMetric(group, metric, subgroup)(g1, g2);
}

double chart_distance(const SampledGSpace& gspace, const GroupMetric& metric, Point base, Point a, Point b) {
  if (a == b) return 0.0;
  auto ga = transporter(gspace, base, a);
  auto gb = transporter(gspace, base, b);
  if (!ga || !gb) return kInfinity;
  return CosetMetric(gspace.group(), metric, gspace.stabilizer(base))(*ga, *gb);
}

OrbitalMetric build_orbital_metric(const SampledGSpace& gspace, const Quotient& quotient, const SliceFamily& family,
                                   const GroupMetric& metric) {
  const FiniteGroup& group = gspace.group();
  const std::size_t n = gspace.n_points();

  // Distinct stabilizers, each checked once.
  std::map<Subgroup, Point> stabilizers;
  for (Point z = 0; z < n; ++z) stabilizers.emplace(gspace.stabilizer(z), z);
  for (const auto& [k, z] : stabilizers) {
    if (!is_right_invariant(group, metric.table, k, 0.0) && !group.is_normal(k)) {
      throw Error(ErrorKind::IncompatibleGroupMetric, "group metric is not right invariant under the stabilizer of " +
                                                          s(z) + ", which is not normal");
    }
  }

  OrbitalMetric out;
  out.base = metric;
  const std::size_t n_orbits = quotient.n_orbits;
  std::vector<double> total(n_orbits, 0.0);

  for (Orbit o = 0; o < n_orbits; ++o) {
    Chart chart;
    chart.center = quotient.representative[o];
    chart.slice = family.slice_of[chart.center];
    chart.radius = family.radius_of_orbit[o].radius;
    chart.weight.assign(n_orbits, 0.0);
    chart.base_point.assign(n_orbits, std::nullopt);
    chart.table = DistanceTable(n, std::nan(""));
    for (Point y : chart.slice.members()) {
      auto& bp = chart.base_point[quotient.orbit_of[y]];
      if (!bp) bp = y;  // members() is ascending, so the first hit is the least
    }
    for (Orbit q = 0; q < n_orbits; ++q) {
      if (!chart.base_point[q]) continue;
      chart.weight[q] = std::max(0.0, chart.radius - quotient.d(q, o));
      total[q] += chart.weight[q];
      const Point base = *chart.base_point[q];
      CosetMetric coset(group, out.base, gspace.stabilizer(base));
      fill_orbit_distances(gspace, coset, base, quotient.members[q], chart.table);
    }
    out.charts.push_back(std::move(chart));
  }

  for (Orbit q = 0; q < n_orbits; ++q) {
    if (!(total[q] > 0.0)) throw Error(ErrorKind::UncoveredOrbit, "orbit q" + s(q) + " meets no chart");
  }
  for (Chart& chart : out.charts) {
    for (Orbit q = 0; q < n_orbits; ++q) chart.weight[q] /= total[q];
  }

  out.values = DistanceTable(n, 0.0);
  for (Orbit q = 0; q < n_orbits; ++q) {
    for (Point a : quotient.members[q]) {
      for (Point b : quotient.members[q]) {
        if (a == b) continue;
        double sum = 0.0;
        for (const Chart& chart : out.charts) {
          const double w = chart.weight[q];
          if (w > 0.0) sum += w * chart.table(a, b);
        }
        out.values(a, b) = sum;
      }
    }
  }
  return out;
}

std::optional<double> small_displacement_witness(const SampledGSpace& gspace, const Quotient& quotient,
                                                 const SliceFamily& family, const OrbitalMetric& orbital, Point x,
                                                 double eps, std::span<const double> delta_grid) {
  const FiniteGroup& group = gspace.group();
  for (double delta : delta_grid) {
    const PointSet sub = subslice_ball(family, quotient, x, delta);
    bool ok = true;
    for (Element g = 0; g < group.order() && ok; ++g) {
      if (!(orbital.base(g, group.identity()) < delta)) continue;
      for (Point y : sub.members()) {
        auto gy = gspace.act(g, y);
        if (gy && !(orbital(y, *gy) < eps)) {
          ok = false;
          break;
        }
      }
    }
    if (ok) return delta;
  }
  return std::nullopt;
}

std::optional<double> subcontinuity_witness(const SampledGSpace& gspace, const Quotient& quotient,
                                            const SliceFamily& family, const OrbitalMetric& orbital, Point x,
                                            std::span<const double> delta_grid, double tolerance) {
  const std::size_t order = gspace.group().order();
  for (double delta : delta_grid) {
    const PointSet sub = subslice_ball(family, quotient, x, delta);
    bool ok = true;
    for (Point y : sub.members()) {
      for (Element g1 = 0; g1 < order && ok; ++g1) {
        auto g1x = gspace.act(g1, x);
        auto g1y = gspace.act(g1, y);
        if (!g1x || !g1y) continue;
        for (Element g2 = 0; g2 < order; ++g2) {
          auto g2x = gspace.act(g2, x);
          auto g2y = gspace.act(g2, y);
          if (!g2x || !g2y) continue;
          if (orbital(*g1x, *g2x) > orbital(*g1y, *g2y) + tolerance) {
            ok = false;
            break;
          }
        }
      }
      if (!ok) break;
    }
    if (ok) return delta;
  }
  return std::nullopt;
}

std::optional<double> displacement_control_witness(const SampledGSpace& gspace, const OrbitalMetric& orbital, Point x,
                                                   double delta, std::span<const double> eps_grid) {
  const FiniteGroup& group = gspace.group();
  const Subgroup& stab = gspace.stabilizer(x);
  for (double eps : eps_grid) {
    bool ok = true;
    for (Element g = 0; g < group.order(); ++g) {
      auto gx = gspace.act(g, x);
      if (!gx || !(orbital(x, *gx) < eps)) continue;
      const bool close = std::any_of(stab.begin(), stab.end(), [&](Element u) {
        return orbital.base(group.identity(), group.mul(g, u)) < delta;
      });
      if (!close) {
        ok = false;
        break;
      }
    }
    if (ok) return eps;
  }
  return std::nullopt;
}

VerificationReport verify_orbital_properties(const SampledGSpace& gspace, const Quotient& quotient,
                                             const SliceFamily& family, const OrbitalMetric& orbital,
                                             double tolerance) {
  const FiniteGroup& group = gspace.group();
  const std::size_t n = gspace.n_points();
  const std::size_t order = group.order();
  const DistanceTable& dO = orbital.values;
  const DistanceTable& dG = orbital.base.table;
  VerificationReport report;

  {
    std::vector<std::string> bad;
    double residual = 0.0;
    for (Element g : gspace.total_elements()) {
      for (Point a = 0; a < n; ++a) {
        for (Point b = 0; b < n; ++b) {
          if (!quotient.same_orbit(a, b)) continue;
          const double lhs = dO(*gspace.act(g, a), *gspace.act(g, b));
          const double rhs = dO(a, b);
          const double r = (std::isinf(lhs) || std::isinf(rhs)) ? (lhs == rhs ? 0.0 : kInfinity) : std::abs(lhs - rhs);
          residual = std::max(residual, r);
          if (r > 1e-12) bad.push_back("g=" + s(g) + " (" + s(a) + "," + s(b) + ")");
        }
      }
    }
    report.add_exhaustive("orbital.invariance", std::move(bad), residual);
  }

  {
    std::vector<std::string> bad;
    for (Point a = 0; a < n; ++a) {
      for (Point b = 0; b < n; ++b) {
        if (!quotient.same_orbit(a, b) && dO(a, b) != 0.0) bad.push_back("(" + s(a) + "," + s(b) + ")");
      }
    }
    report.add_exhaustive("orbital.off-orbit-zero", std::move(bad));
  }

  {
    std::vector<std::string> bad;
    double residual = 0.0;
    for (Orbit q = 0; q < quotient.n_orbits; ++q) {
      const auto& m = quotient.members[q];
      for (Point a : m) {
        if (dO(a, a) != 0.0) bad.push_back("nonzero diagonal at " + s(a));
        for (Point b : m) {
          if (a == b) continue;
          if (!(dO(a, b) > 0.0)) bad.push_back("zero distance (" + s(a) + "," + s(b) + ")");
          if (dO(a, b) != dO(b, a)) bad.push_back("asymmetric (" + s(a) + "," + s(b) + ")");
          for (Point c : m) {
            const double excess = dO(a, c) - dO(a, b) - dO(b, c);
            if (std::isfinite(excess) && excess > tolerance) {
              residual = std::max(residual, excess);
              bad.push_back("triangle (" + s(a) + "," + s(b) + "," + s(c) + ")");
            }
          }
        }
      }
    }
    report.add_exhaustive("orbital.orbit-metric", std::move(bad), residual);
  }

  {
    std::vector<std::string> bad;
    double residual = 0.0;
    for (Orbit q = 0; q < quotient.n_orbits; ++q) {
      double sum = 0.0;
      for (const Chart& c : orbital.charts) sum += c.weight[q];
      residual = std::max(residual, std::abs(sum - 1.0));
      if (std::abs(sum - 1.0) > 1e-12) bad.push_back("q" + s(q) + " sum=" + format_real(sum));
    }
    report.add_exhaustive("orbital.partition-of-unity", std::move(bad), residual);
  }

  {
    std::vector<std::string> bad;
    double residual = 0.0;
    std::map<Subgroup, Point> stabilizers;
    for (Point z = 0; z < n; ++z) stabilizers.emplace(gspace.stabilizer(z), z);
    for (const auto& [k, z] : stabilizers) {
      CosetMetric coset(group, orbital.base, k);
      for (Element a = 0; a < order; ++a) {
        for (Element b = 0; b < order; ++b) {
          const double excess = coset(a, b) - dG(a, b);
          if (excess > 0.0) {
            residual = std::max(residual, excess);
            bad.push_back("stabilizer of " + s(z) + " (" + s(a) + "," + s(b) + ")");
          }
        }
      }
    }
    report.add_exhaustive("orbital.coset-bound", std::move(bad), residual);
  }

  {
    std::vector<std::string> bad;
    double residual = 0.0;
    for (std::size_t alpha = 0; alpha < orbital.charts.size(); ++alpha) {
      const Chart& chart = orbital.charts[alpha];
      const Subgroup& hx = gspace.stabilizer(chart.center);
      for (Orbit q = 0; q < quotient.n_orbits; ++q) {
        if (!chart.base_point[q]) continue;
        const Point y0 = *chart.base_point[q];
        for (Element h : hx) {
          auto y1 = gspace.act(h, y0);
          if (!y1 || *y1 == y0 || !chart.slice.contains(*y1)) continue;
          for (Point a : quotient.members[q]) {
            for (Point b : quotient.members[q]) {
              const double r = std::abs(chart_distance(gspace, orbital.base, *y1, a, b) - chart.table(a, b));
              if (std::isnan(r) || r > tolerance) {
                bad.push_back("chart " + s(alpha) + " base " + s(*y1) + " (" + s(a) + "," + s(b) + ")");
              } else {
                residual = std::max(residual, r);
              }
            }
          }
        }
      }
    }
    report.add_exhaustive("orbital.base-point-independence", std::move(bad), residual);
  }

  std::vector<double> d_and_g = table_values(quotient.d);
  d_and_g.insert(d_and_g.end(), dG.values().begin(), dG.values().end());
  const std::vector<double> delta_grid = realized_grid(d_and_g);
  const std::vector<double> eps_grid = realized_grid(table_values(dO));
  const std::vector<double> group_grid = realized_grid(table_values(dG));

  {
    std::vector<std::string> found, missing;
    for (Point x = 0; x < n; ++x) {
      for (double eps : eps_grid) {
        if (auto d = small_displacement_witness(gspace, quotient, family, orbital, x, eps, delta_grid)) {
          found.push_back(witness_text(x, "eps", eps, "delta", *d));
        } else {
          missing.push_back("x=" + s(x) + " eps=" + format_real(eps));
        }
      }
    }
    report.add(existence_check("orbital.small-displacement", std::move(found), std::move(missing)));
  }

  {
    std::vector<std::string> found, missing;
    for (Point x = 0; x < n; ++x) {
      if (auto d = subcontinuity_witness(gspace, quotient, family, orbital, x, delta_grid, tolerance)) {
        found.push_back("x=" + s(x) + " delta=" + format_real(*d));
      } else {
        missing.push_back("x=" + s(x));
      }
    }
    report.add(existence_check("orbital.subcontinuity", std::move(found), std::move(missing)));
  }

  {
    std::vector<std::string> found, missing;
    for (Point x = 0; x < n; ++x) {
      for (double delta : group_grid) {
        if (auto e = displacement_control_witness(gspace, orbital, x, delta, eps_grid)) {
          found.push_back(witness_text(x, "delta", delta, "eps", *e));
        } else {
          missing.push_back("x=" + s(x) + " delta=" + format_real(delta));
        }
      }
    }
    report.add(existence_check("orbital.displacement-control", std::move(found), std::move(missing)));
  }

  // Chart inequalities, each chart against its own anchor.
  {
    std::vector<std::string> monotone, group_bound, translate;
    double r_monotone = 0.0, r_group = 0.0, r_translate = 0.0;
    for (std::size_t alpha = 0; alpha < orbital.charts.size(); ++alpha) {
      const Chart& chart = orbital.charts[alpha];
      const Point x = chart.center;
      const DistanceTable& dx = chart.table;
      for (Point y : chart.slice.members()) {
        for (Element g1 = 0; g1 < order; ++g1) {
          auto g1x = gspace.act(g1, x);
          auto g1y = gspace.act(g1, y);
          for (Element g2 = 0; g2 < order; ++g2) {
            auto g2x = gspace.act(g2, x);
            auto g2y = gspace.act(g2, y);
            if (!g1y || !g2y) continue;
            const double mid = dx(*g1y, *g2y);
            if (g1x && g2x) {
              const double excess = dx(*g1x, *g2x) - mid;
              if (!(excess <= tolerance)) {
                monotone.push_back("chart " + s(alpha) + " y=" + s(y) + " g=(" + s(g1) + "," + s(g2) + ")");
              } else {
                r_monotone = std::max(r_monotone, std::max(0.0, excess));
              }
            }
            const double excess = mid - dG(g1, g2);
            if (!(excess <= tolerance)) {
              group_bound.push_back("chart " + s(alpha) + " y=" + s(y) + " g=(" + s(g1) + "," + s(g2) + ")");
            } else {
              r_group = std::max(r_group, std::max(0.0, excess));
            }
          }
        }
        // y' = g0 y lies in g0 S_x.
        for (Element g0 = 0; g0 < order; ++g0) {
          auto translated = gspace.act(g0, y);
          if (!translated) continue;
          for (Element g = 0; g < order; ++g) {
            auto moved = gspace.act(g, *translated);
            if (!moved) continue;
            const double excess = dx(*translated, *moved) - dG(g0, group.mul(g, g0));
            if (!(excess <= tolerance)) {
              translate.push_back("chart " + s(alpha) + " y=" + s(*translated) + " g0=" + s(g0) + " g=" + s(g));
            } else {
              r_translate = std::max(r_translate, std::max(0.0, excess));
            }
          }
        }
      }
    }
    report.add_exhaustive("orbital.chart-monotone", std::move(monotone), r_monotone);
    report.add_exhaustive("orbital.chart-group-bound", std::move(group_bound), r_group);
    report.add_exhaustive("orbital.translate-bound", std::move(translate), r_translate);
  }

  return report;
}

}  // namespace equimetric

#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace equimetric::testkit {

FiniteGroup dihedral_group(std::size_t m) {
  Permutation r(m), r_inv(m), s(m);
  for (Point i = 0; i < m; ++i) {
    r[i] = (i + 1) % m;
    r_inv[i] = (i + m - 1) % m;
    s[i] = (m - i) % m;
  }
  std::vector<Permutation> gens{r, r_inv, s};
  return permutation_group(gens, nullptr);
}

std::vector<std::vector<Point>> coset_action(const FiniteGroup& group, const Subgroup& h) {
  const std::size_t order = group.order();
  std::vector<long> coset_of(order, -1);
  std::vector<Element> reps;
  for (Element g = 0; g < order; ++g) {
    if (coset_of[g] >= 0) continue;
    for (Element k : h) coset_of[group.mul(g, k)] = static_cast<long>(reps.size());
    reps.push_back(g);
  }
  std::vector<std::vector<Point>> act(order, std::vector<Point>(reps.size()));
  for (Element g = 0; g < order; ++g) {
    for (std::size_t c = 0; c < reps.size(); ++c) act[g][c] = static_cast<Point>(coset_of[group.mul(g, reps[c])]);
  }
  return act;
}

Scenario random_gspace(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coin(0, 1);
  FiniteGroup group = [&] {
    if (coin(rng)) return cyclic_group(std::uniform_int_distribution<std::size_t>(1, 8)(rng));
    return dihedral_group(std::uniform_int_distribution<std::size_t>(3, 4)(rng));
  }();
  const std::vector<Subgroup> subgroups = group.all_subgroups();

  // Disjoint union of coset spaces.
  std::vector<std::vector<Point>> act(group.order());
  std::size_t n = 0;
  std::uniform_int_distribution<std::size_t> pick_sub(0, subgroups.size() - 1);
  const std::size_t pieces = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
  for (std::size_t piece = 0; piece < pieces; ++piece) {
    const Subgroup& h = subgroups[pick_sub(rng)];
    const std::size_t size = group.order() / h.size();
    if (n + size > 16) continue;
    const auto part = coset_action(group, h);
    for (Element g = 0; g < group.order(); ++g) {
      for (Point c : part[g]) act[g].push_back(c + n);
    }
    n += size;
  }
  while (n < 2) {  // pad with fixed points
    for (Element g = 0; g < group.order(); ++g) act[g].push_back(n);
    ++n;
  }

  // Orbit-closed random edges with orbit-constant weights, until connected.
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  std::vector<std::size_t> comp(n);
  std::iota(comp.begin(), comp.end(), 0);
  std::function<std::size_t(std::size_t)> find = [&](std::size_t x) { return comp[x] == x ? x : comp[x] = find(comp[x]); };
  std::size_t components = n;
  std::uniform_int_distribution<Point> pick_point(0, n - 1);
  std::uniform_real_distribution<double> pick_weight(1.0, 2.0);
  std::size_t extra = std::uniform_int_distribution<std::size_t>(0, 2)(rng);
  std::size_t attempts = 0;
  while (components > 1 || (extra > 0 && ++attempts < 200)) {
    const Point a = pick_point(rng), b = pick_point(rng);
    if (a == b || w[a][b] > 0.0) continue;
    const bool joins = find(a) != find(b);
    if (!joins) {
      if (components > 1) continue;
      --extra;
    }
    const double weight = std::round(pick_weight(rng) * 8.0) / 8.0;  // dyadic: sums stay exact
    for (Element g = 0; g < group.order(); ++g) {
      const Point ga = act[g][a], gb = act[g][b];
      w[ga][gb] = w[gb][ga] = weight;
      const std::size_t ra = find(ga), rb = find(gb);
      if (ra != rb) {
        comp[ra] = rb;
        --components;
      }
    }
  }

  DistanceTable metric(n, std::numeric_limits<double>::infinity());
  std::vector<Edge> edges;
  for (Point a = 0; a < n; ++a) {
    metric(a, a) = 0.0;
    for (Point b = 0; b < n; ++b) {
      if (w[a][b] > 0.0) {
        metric(a, b) = w[a][b];
        if (a < b) edges.emplace_back(a, b);
      }
    }
  }
  for (Point k = 0; k < n; ++k) {
    for (Point a = 0; a < n; ++a) {
      for (Point b = 0; b < n; ++b) metric(a, b) = std::min(metric(a, b), metric(a, k) + metric(k, b));
    }
  }
  std::vector<PartialMap> maps;
  for (const auto& perm : act) maps.emplace_back(std::vector<std::optional<Point>>(perm.begin(), perm.end()));
  return {"random", bind_action(SampledSpace(std::move(metric), edges), std::move(group), std::move(maps)),
          std::nullopt, ""};
}

Scenario relabel(const Scenario& scenario, const std::vector<Point>& perm) {
  const SampledGSpace& g = scenario.gspace;
  const std::size_t n = g.n_points();
  DistanceTable metric(n);
  for (Point a = 0; a < n; ++a) {
    for (Point b = 0; b < n; ++b) metric(perm[a], perm[b]) = g.space().distance(a, b);
  }
  std::vector<Edge> edges;
  for (const auto& [a, b] : g.space().edges()) edges.emplace_back(perm[a], perm[b]);
  std::vector<PartialMap> maps;
  for (Element e = 0; e < g.group().order(); ++e) {
    std::vector<std::optional<Point>> images(n);
    for (Point a = 0; a < n; ++a) {
      if (auto img = g.act(e, a)) images[perm[a]] = perm[*img];
    }
    maps.emplace_back(std::move(images));
  }
  FiniteGroup group = build_group(g.group().table(), g.group().generators());
  return {scenario.name, bind_action(SampledSpace(std::move(metric), edges), std::move(group), std::move(maps)),
          std::nullopt, ""};
}

double brute_force_chain(std::size_t n, const std::vector<std::vector<double>>& weight, Point a, Point b) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<char> on_path(n, 0);
  std::function<void(Point, double)> walk = [&](Point p, double cost) {
    if (cost >= best) return;
    if (p == b) {
      best = cost;
      return;
    }
    on_path[p] = 1;
    for (Point q = 0; q < n; ++q) {
      if (!on_path[q] && std::isfinite(weight[p][q])) walk(q, cost + weight[p][q]);
    }
    on_path[p] = 0;
  };
  walk(a, 0.0);
  return best;
}

}  // namespace equimetric::testkit

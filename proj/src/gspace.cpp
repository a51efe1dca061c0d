#include "equimetric/gspace.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "equimetric/error.hpp"

namespace equimetric {

namespace {

std::string pt(Point x) { return std::to_string(x); }

}  // namespace

std::optional<std::string> metric_violation(const DistanceTable& table, double tolerance) {
  const std::size_t n = table.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (table(i, i) != 0.0) return "d(" + pt(i) + "," + pt(i) + ") != 0";
    for (std::size_t j = 0; j < n; ++j) {
      const double v = table(i, j);
      if (std::isnan(v) || v < 0.0) return "d(" + pt(i) + "," + pt(j) + ") is negative or NaN";
      if (i != j && !(v > 0.0)) return "d(" + pt(i) + "," + pt(j) + ") = 0 for distinct points";
      if (std::abs(v - table(j, i)) > tolerance && !(std::isinf(v) && std::isinf(table(j, i)))) {
        return "d(" + pt(i) + "," + pt(j) + ") != d(" + pt(j) + "," + pt(i) + ")";
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        if (table(i, k) > table(i, j) + table(j, k) + tolerance) {
          return "triangle inequality fails for (" + pt(i) + "," + pt(j) + "," + pt(k) + ")";
        }
      }
    }
  }
  return std::nullopt;
}

SampledSpace::SampledSpace(DistanceTable base_metric, const std::vector<Edge>& edges)
    : metric_(std::move(base_metric)) {
  const std::size_t n = metric_.size();
  if (n == 0) throw Error(ErrorKind::NotAMetric, "space has no points");
  if (auto v = metric_violation(metric_, 1e-9)) throw Error(ErrorKind::NotAMetric, *v);

  std::set<Edge> unique;
  for (auto [a, b] : edges) {
    if (a >= n || b >= n) throw Error(ErrorKind::BadAdjacency, "edge (" + pt(a) + "," + pt(b) + ") out of range");
    if (a == b) throw Error(ErrorKind::BadAdjacency, "self-loop at " + pt(a));
    unique.insert({std::min(a, b), std::max(a, b)});
  }
  edges_.assign(unique.begin(), unique.end());
  neighbors_.assign(n, {});
  for (auto [a, b] : edges_) {
    neighbors_[a].push_back(b);
    neighbors_[b].push_back(a);
  }
  for (auto& nb : neighbors_) std::sort(nb.begin(), nb.end());
}

bool SampledSpace::adjacent(Point a, Point b) const {
  const auto& nb = neighbors_[a];
  return std::binary_search(nb.begin(), nb.end(), b);
}

PartialMap::PartialMap(std::vector<std::optional<Point>> images) : images_(std::move(images)) {
  total_ = std::all_of(images_.begin(), images_.end(), [](const auto& v) { return v.has_value(); });
}

PartialMap PartialMap::identity(std::size_t n) {
  std::vector<std::optional<Point>> images(n);
  for (Point i = 0; i < n; ++i) images[i] = i;
  return PartialMap(std::move(images));
}

PointSet SampledGSpace::image(Element g, const PointSet& s) const {
  PointSet out(n_points());
  for (Point y : s.members()) {
    if (auto gy = act(g, y)) out.insert(*gy);
  }
  return out;
}

SampledGSpace bind_action(SampledSpace space, FiniteGroup group, std::vector<PartialMap> act) {
  const std::size_t n = space.n_points();
  const std::size_t order = group.order();
  if (act.size() != order) {
    throw Error(ErrorKind::InvalidParams,
                "expected " + std::to_string(order) + " action maps, got " + std::to_string(act.size()));
  }
  for (Element g = 0; g < order; ++g) {
    if (act[g].domain_size() != n) {
      throw Error(ErrorKind::InvalidParams, "action map of element " + std::to_string(g) + " has wrong size");
    }
    std::vector<char> hit(n, 0);
    for (Point x = 0; x < n; ++x) {
      if (auto y = act[g](x)) {
        if (*y >= n) throw Error(ErrorKind::IndexOutOfRange, "g=" + std::to_string(g) + " maps " + pt(x) + " out of range");
        if (hit[*y]) throw Error(ErrorKind::NotInjective, "g=" + std::to_string(g) + " is not injective at image " + pt(*y));
        hit[*y] = 1;
      }
    }
  }

  const PartialMap& id = act[group.identity()];
  for (Point x = 0; x < n; ++x) {
    if (id(x) != std::optional<Point>(x)) {
      throw Error(ErrorKind::IdentityNotIdentity, "identity element moves or drops point " + pt(x));
    }
  }

  for (Element g = 0; g < order; ++g) {
    for (Element h = 0; h < order; ++h) {
      const PartialMap& gh = act[group.mul(g, h)];
      for (Point x = 0; x < n; ++x) {
        const auto hx = act[h](x);
        if (!hx) continue;
        const auto g_hx = act[g](*hx);
        const auto ghx = gh(x);
        if (g_hx && ghx && *g_hx != *ghx) {
          throw Error(ErrorKind::NotHomomorphism, "g=" + std::to_string(g) + " h=" + std::to_string(h) + " x=" + pt(x));
        }
      }
    }
  }

  for (Element g = 0; g < order; ++g) {
    for (auto [a, b] : space.edges()) {
      const auto ga = act[g](a);
      const auto gb = act[g](b);
      if (ga && gb && !space.adjacent(*ga, *gb)) {
        throw Error(ErrorKind::NotGraphAutomorphism,
                    "g=" + std::to_string(g) + " maps edge (" + pt(a) + "," + pt(b) + ") to non-edge (" + pt(*ga) +
                        "," + pt(*gb) + ")");
      }
    }
    if (act[g].is_total()) {
      // A total injective map sending edges to edges is an automorphism of a
      // finite graph only if it also reflects adjacency.
      for (Point a = 0; a < n; ++a) {
        for (Point b = a + 1; b < n; ++b) {
          if (!space.adjacent(a, b) && space.adjacent(*act[g](a), *act[g](b))) {
            throw Error(ErrorKind::NotGraphAutomorphism,
                        "g=" + std::to_string(g) + " maps non-edge (" + pt(a) + "," + pt(b) + ") to an edge");
          }
        }
      }
    }
  }

  SampledGSpace gs(std::move(space), std::move(group));
  gs.act_ = std::move(act);
  gs.stabilizers_.resize(n);
  for (Element g = 0; g < order; ++g) {
    if (gs.act_[g].is_total()) {
      gs.total_elements_.push_back(g);
    } else {
      gs.all_total_ = false;
    }
  }
  for (Point x = 0; x < n; ++x) {
    for (Element g = 0; g < order; ++g) {
      if (gs.act_[g](x) == std::optional<Point>(x)) gs.stabilizers_[x].push_back(g);
    }
    if (!gs.group_.is_subgroup(gs.stabilizers_[x])) {
      throw Error(ErrorKind::StabilizerNotSubgroup, "stabilizer of point " + pt(x) + " is not closed");
    }
  }
  return gs;
}

}  // namespace equimetric

#include "equimetric/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <functional>
#include <queue>
#include <thread>

namespace equimetric {

std::size_t PointSet::size() const {
  std::size_t count = 0;
  for (auto w : words_) count += static_cast<std::size_t>(std::popcount(w));
  return count;
}

bool PointSet::empty() const {
  return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
}

bool PointSet::intersects(const PointSet& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & other.words_[i]) return true;
  }
  return false;
}

bool PointSet::is_subset_of(const PointSet& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & ~other.words_[i]) return false;
  }
  return true;
}

PointSet PointSet::intersection(const PointSet& other) const {
  PointSet out = *this;
  for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] &= other.words_[i];
  return out;
}

PointSet PointSet::union_with(const PointSet& other) const {
  PointSet out = *this;
  for (std::size_t i = 0; i < words_.size(); ++i) out.words_[i] |= other.words_[i];
  return out;
}

std::vector<Point> PointSet::members() const {
  std::vector<Point> out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    auto w = words_[i];
    while (w) {
      out.push_back(i * 64 + static_cast<std::size_t>(std::countr_zero(w)));
      w &= w - 1;
    }
  }
  return out;
}

std::vector<long> induced_components(const std::vector<std::vector<Point>>& neighbors, const PointSet& subset) {
  std::vector<long> label(neighbors.size(), -1);
  long next = 0;
  std::deque<Point> queue;
  for (Point root : subset.members()) {
    if (label[root] >= 0) continue;
    label[root] = next;
    queue.push_back(root);
    while (!queue.empty()) {
      const Point u = queue.front();
      queue.pop_front();
      for (Point v : neighbors[u]) {
        if (subset.contains(v) && label[v] < 0) {
          label[v] = next;
          queue.push_back(v);
        }
      }
    }
    ++next;
  }
  return label;
}

PointSet component_of(const std::vector<std::vector<Point>>& neighbors, const PointSet& subset, Point seed) {
  PointSet out(neighbors.size());
  if (!subset.contains(seed)) return out;
  out.insert(seed);
  std::deque<Point> queue{seed};
  while (!queue.empty()) {
    const Point u = queue.front();
    queue.pop_front();
    for (Point v : neighbors[u]) {
      if (subset.contains(v) && !out.contains(v)) {
        out.insert(v);
        queue.push_back(v);
      }
    }
  }
  return out;
}

std::vector<PointSet> components(const std::vector<std::vector<Point>>& neighbors, const PointSet& subset) {
  const auto label = induced_components(neighbors, subset);
  std::vector<PointSet> out;
  for (Point p : subset.members()) {
    const auto l = static_cast<std::size_t>(label[p]);
    if (l >= out.size()) out.resize(l + 1, PointSet(neighbors.size()));
    out[l].insert(p);
  }
  return out;
}

namespace {

std::vector<double> dijkstra(const WeightedGraph& graph, Point source) {
  std::vector<double> dist(graph.size(), kInfinity);
  using Item = std::pair<double, Point>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.push({0.0, source});
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (const auto& arc : graph[u]) {
      const double nd = d + arc.weight;
      if (nd < dist[arc.to]) {
        dist[arc.to] = nd;
        heap.push({nd, arc.to});
      }
    }
  }
  return dist;
}

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  threads = std::max(1U, threads);
  if (threads == 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> workers;
  for (unsigned t = 0; t < threads; ++t) {
    workers.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += threads) fn(i);
    });
  }
}

}  // namespace

ShortestPaths all_pairs_shortest_paths(const WeightedGraph& graph, unsigned threads, double tie_tolerance) {
  const std::size_t n = graph.size();
  std::vector<std::vector<double>> raw(n);
  parallel_for(n, threads, [&](std::size_t s) { raw[s] = dijkstra(graph, s); });

  ShortestPaths out;
  out.dist = DistanceTable(n, kInfinity);
  out.paths.assign(n, std::vector<std::vector<Point>>(n));

  parallel_for(n, threads, [&](std::size_t s) {
    out.dist(s, s) = 0.0;
    out.paths[s][s] = {s};
    std::vector<char> visited(n, 0);
    for (Point t = s + 1; t < n; ++t) {
      if (!std::isfinite(raw[s][t])) continue;
      std::fill(visited.begin(), visited.end(), 0);
      std::vector<Point> path{s};
      visited[s] = 1;
      double total = 0.0;
      Point cur = s;
      while (cur != t) {
        const WeightedArc* chosen = nullptr;
        const WeightedArc* fallback = nullptr;
        double best = kInfinity;
        for (const auto& arc : graph[cur]) {
          if (visited[arc.to] || !std::isfinite(raw[arc.to][t])) continue;
          const double through = arc.weight + raw[arc.to][t];
          if (through <= raw[cur][t] + tie_tolerance) {
            chosen = &arc;
            break;
          }
          if (through < best) {
            best = through;
            fallback = &arc;
          }
        }
        if (!chosen) chosen = fallback;
        total += chosen->weight;
        cur = chosen->to;
        visited[cur] = 1;
        path.push_back(cur);
      }
      out.paths[s][t] = std::move(path);
      out.dist(s, t) = total;
    }
  });
  for (Point s = 0; s < n; ++s) {
    for (Point t = s + 1; t < n; ++t) out.dist(t, s) = out.dist(s, t);
  }
  return out;
}

}  // namespace equimetric

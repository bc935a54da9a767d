#pragma once

#include <algorithm>
#include <limits>
#include <queue>
#include <vector>

#include "anneal/grid.hpp"

namespace anneal {

struct BarrierResult {
  double bottleneck_value = 0.0;  // min over paths of max node energy
  double energy = 0.0;            // bottleneck - U(x) - U(y)
  std::vector<std::size_t> witness_path;
};

namespace detail {

// Best-first growth of the reachable set in increasing energy-threshold
// order (minimum bottleneck path tree from src). Ties broken by node index.
inline void bottleneck_tree(const GridGraph& g, std::size_t src,
                            std::vector<double>& dist,
                            std::vector<std::size_t>& parent,
                            std::size_t stop_node = static_cast<std::size_t>(-1)) {
  const std::size_t n = g.size();
  const double inf = std::numeric_limits<double>::infinity();
  dist.assign(n, inf);
  parent.assign(n, static_cast<std::size_t>(-1));
  std::vector<char> settled(n, 0);
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap;
  dist[src] = g.energy[src];
  heap.emplace(dist[src], src);
  while (!heap.empty()) {
    const auto [thr, u] = heap.top();
    heap.pop();
    if (settled[u]) continue;
    settled[u] = 1;
    if (u == stop_node) return;
    g.for_each_neighbor(u, [&](std::size_t v) {
      if (settled[v]) return;
      const double cand = std::max(thr, g.energy[v]);
      if (cand < dist[v] || (cand == dist[v] && u < parent[v])) {
        dist[v] = cand;
        parent[v] = u;
        heap.emplace(cand, v);
      }
    });
  }
}

}  // namespace detail

// Exact minimax over grid paths between two nodes, including both endpoint
// energies in the max.
inline BarrierResult bottleneck_energy(const GridGraph& g, std::size_t x_node,
                                       std::size_t y_node) {
  if (x_node >= g.size() || y_node >= g.size())
    throw DomainError("bottleneck_energy: node out of range");
  std::vector<double> dist;
  std::vector<std::size_t> parent;
  detail::bottleneck_tree(g, x_node, dist, parent, y_node);
  BarrierResult out;
  out.bottleneck_value = dist[y_node];
  out.energy = dist[y_node] - (g.energy[x_node] + g.energy[y_node]);
  for (std::size_t v = y_node; v != static_cast<std::size_t>(-1); v = parent[v]) {
    out.witness_path.push_back(v);
    if (v == x_node) break;
  }
  std::reverse(out.witness_path.begin(), out.witness_path.end());
  return out;
}

// Nodes whose energy is <= all neighbors'. Equal-energy plateaus are grouped
// into connected components represented by their smallest node index.
inline std::vector<std::size_t> find_local_minima(const GridGraph& g) {
  const std::size_t n = g.size();
  std::vector<char> candidate(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    bool ok = true;
    g.for_each_neighbor(v, [&](std::size_t u) {
      if (g.energy[u] < g.energy[v]) ok = false;
    });
    candidate[v] = ok ? 1 : 0;
  }
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> reps;
  std::vector<std::size_t> stack;
  for (std::size_t v = 0; v < n; ++v) {
    if (!candidate[v] || seen[v]) continue;
    // Flood the equal-energy candidate component containing v.
    std::size_t rep = v;
    stack.assign(1, v);
    seen[v] = 1;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      rep = std::min(rep, u);
      g.for_each_neighbor(u, [&](std::size_t w) {
        if (!seen[w] && candidate[w] && g.energy[w] == g.energy[u]) {
          seen[w] = 1;
          stack.push_back(w);
        }
      });
    }
    reps.push_back(rep);
  }
  std::sort(reps.begin(), reps.end());
  return reps;
}

struct CstarReport {
  double cstar = 0.0;
  std::size_t global_min_node = 0;
  struct PerMinimum {
    std::size_t node;
    double energy;
    double barrier;
  };
  std::vector<PerMinimum> per_minimum;
  Box box;
  int resolution = 0;
  Connectivity connectivity = Connectivity::von_neumann;
};

// max over local minima x of E(x, y*) with y* the grid global minimum.
inline CstarReport estimate_cstar(const GridGraph& g) {
  CstarReport rep;
  rep.box = g.box;
  rep.resolution = g.resolution;
  rep.connectivity = g.connectivity;
  std::size_t global_min = 0;
  for (std::size_t v = 1; v < g.size(); ++v) {
    if (g.energy[v] < g.energy[global_min]) global_min = v;
  }
  rep.global_min_node = global_min;
  std::vector<double> dist;
  std::vector<std::size_t> parent;
  detail::bottleneck_tree(g, global_min, dist, parent);
  const std::vector<std::size_t> minima = find_local_minima(g);
  double cstar = 0.0;
  for (std::size_t m : minima) {
    const double barrier = dist[m] - (g.energy[m] + g.energy[global_min]);
    rep.per_minimum.push_back({m, g.energy[m], barrier});
    cstar = std::max(cstar, barrier);
  }
  if (minima.size() <= 1) cstar = 0.0;
  rep.cstar = cstar;
  return rep;
}

}  // namespace anneal

#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "anneal/errors.hpp"
#include "anneal/potential.hpp"

namespace anneal {

struct Box {
  std::vector<double> lo, hi;

  int dim() const { return static_cast<int>(lo.size()); }

  void validate() const {
    if (lo.empty() || lo.size() != hi.size())
      throw ConfigError("box: lo/hi dimension mismatch");
    for (std::size_t i = 0; i < lo.size(); ++i) {
      if (!(std::isfinite(lo[i]) && std::isfinite(hi[i]) && lo[i] < hi[i]))
        throw ConfigError("box: degenerate or non-finite extent");
    }
  }
};

enum class Connectivity { von_neumann, moore };

// Uniform lattice over a box with node energies. Node indexing is row-major
// over the multi-index; all tie-breaking downstream is by node index, so
// results are deterministic.
class GridGraph {
 public:
  static constexpr std::size_t kNodeBudget = 10'000'000;

  Box box;
  int resolution = 0;
  Connectivity connectivity = Connectivity::von_neumann;
  std::vector<double> energy;

  int dim() const { return box.dim(); }
  std::size_t size() const { return energy.size(); }

  static GridGraph from_energies(Box box, int resolution, Connectivity conn,
                                 std::vector<double> energies) {
    box.validate();
    if (resolution < 3) throw ConfigError("grid: resolution must be >= 3");
    const std::size_t n = checked_node_count(box.dim(), resolution);
    if (energies.size() != n)
      throw ConfigError("grid: energy table size mismatch");
    for (double e : energies) {
      if (!std::isfinite(e) || e < 0.0)
        throw NumericError("grid: node energy must be finite and >= 0");
    }
    GridGraph g;
    g.box = std::move(box);
    g.resolution = resolution;
    g.connectivity = conn;
    g.energy = std::move(energies);
    return g;
  }

  std::vector<double> coords(std::size_t node) const {
    const int d = dim();
    std::vector<double> x(d);
    std::size_t rest = node;
    for (int axis = d - 1; axis >= 0; --axis) {
      const std::size_t idx = rest % resolution;
      rest /= resolution;
      x[axis] = box.lo[axis] + (box.hi[axis] - box.lo[axis]) * idx / (resolution - 1);
    }
    return x;
  }

  std::size_t nearest_node(std::span<const double> x) const {
    const int d = dim();
    if (static_cast<int>(x.size()) != d)
      throw DomainError("grid: point dimension mismatch");
    std::size_t node = 0;
    for (int axis = 0; axis < d; ++axis) {
      const double t = (x[axis] - box.lo[axis]) / (box.hi[axis] - box.lo[axis]);
      long idx = std::lround(t * (resolution - 1));
      idx = std::max(0L, std::min<long>(resolution - 1, idx));
      node = node * resolution + static_cast<std::size_t>(idx);
    }
    return node;
  }

  // Calls fn(neighbor) for each lattice neighbor of `node`.
  template <typename F>
  void for_each_neighbor(std::size_t node, F&& fn) const {
    const int d = dim();
    std::vector<int> mi(d);
    std::size_t rest = node;
    for (int axis = d - 1; axis >= 0; --axis) {
      mi[axis] = static_cast<int>(rest % resolution);
      rest /= resolution;
    }
    if (connectivity == Connectivity::von_neumann) {
      for (int axis = 0; axis < d; ++axis) {
        for (int step : {-1, +1}) {
          const int v = mi[axis] + step;
          if (v < 0 || v >= resolution) continue;
          const long delta = stride(axis) * step;
          fn(static_cast<std::size_t>(static_cast<long>(node) + delta));
        }
      }
    } else {
      std::vector<int> offset(d, -1);
      while (true) {
        bool zero = true, inside = true;
        long delta = 0;
        for (int axis = 0; axis < d; ++axis) {
          if (offset[axis] != 0) zero = false;
          const int v = mi[axis] + offset[axis];
          if (v < 0 || v >= resolution) { inside = false; break; }
          delta += stride(axis) * offset[axis];
        }
        if (!zero && inside)
          fn(static_cast<std::size_t>(static_cast<long>(node) + delta));
        int axis = d - 1;
        while (axis >= 0 && offset[axis] == 1) offset[axis--] = -1;
        if (axis < 0) break;
        ++offset[axis];
      }
    }
  }

 private:
  long stride(int axis) const {
    long s = 1;
    for (int a = dim() - 1; a > axis; --a) s *= resolution;
    return s;
  }

  static std::size_t checked_node_count(int d, int resolution) {
    std::size_t n = 1;
    for (int i = 0; i < d; ++i) {
      n *= static_cast<std::size_t>(resolution);
      if (n > kNodeBudget)
        throw BudgetError("grid: resolution^dim exceeds the node budget");
    }
    return n;
  }
};

inline GridGraph discretize(const Potential& p, Box box, int resolution,
                            Connectivity conn = Connectivity::von_neumann) {
  box.validate();
  if (box.dim() != p.dim)
    throw ConfigError("discretize: box dimension must match potential");
  if (resolution < 3) throw ConfigError("discretize: resolution must be >= 3");
  GridGraph probe;
  probe.box = box;
  probe.resolution = resolution;
  std::size_t n = 1;
  for (int i = 0; i < box.dim(); ++i) {
    n *= static_cast<std::size_t>(resolution);
    if (n > GridGraph::kNodeBudget)
      throw BudgetError("discretize: resolution^dim exceeds the node budget");
  }
  std::vector<double> energies(n);
  probe.energy.assign(n, 0.0);  // for coords()
  for (std::size_t node = 0; node < n; ++node) {
    const std::vector<double> x = probe.coords(node);
    energies[node] = p.evaluate(x);
  }
  return GridGraph::from_energies(std::move(box), resolution, conn,
                                  std::move(energies));
}

// 1-d grid over the radial profile h on [0, r_max]; exact for radial
// potentials since U depends on x only through |x|.
inline GridGraph discretize_radial_profile(const Potential& p, double r_max,
                                           int resolution) {
  if (!p.radial())
    throw ConfigError("discretize_radial_profile: potential is not radial");
  if (!(r_max > 0.0)) throw ConfigError("discretize_radial_profile: r_max <= 0");
  if (resolution < 3) throw ConfigError("discretize_radial_profile: resolution < 3");
  if (static_cast<std::size_t>(resolution) > GridGraph::kNodeBudget)
    throw BudgetError("discretize_radial_profile: node budget exceeded");
  std::vector<double> energies(resolution);
  for (int k = 0; k < resolution; ++k) {
    const double r = r_max * k / (resolution - 1);
    energies[k] = p.profile->value(r);
    if (!std::isfinite(energies[k]) || energies[k] < 0.0)
      throw NumericError("discretize_radial_profile: bad profile value", {r});
  }
  Box box;
  box.lo = {0.0};
  box.hi = {r_max};
  return GridGraph::from_energies(std::move(box), resolution,
                                  Connectivity::von_neumann,
                                  std::move(energies));
}

}  // namespace anneal

#pragma once

#include <cstddef>
#include <vector>

#include "qgraph/metric_graph.hpp"

namespace qgraph {

/// Function on the network sampled on a uniform grid x_i = i / (grid - 1)
/// of every edge. Column j holds edge j.
struct EdgeState {
  Matrix values;  // grid x m

  EdgeState() = default;
  EdgeState(std::size_t grid, std::size_t edges) : values(Matrix::Zero(static_cast<Eigen::Index>(grid), static_cast<Eigen::Index>(edges))) {}

  std::size_t grid() const noexcept { return static_cast<std::size_t>(values.rows()); }
  std::size_t edge_count() const noexcept { return static_cast<std::size_t>(values.cols()); }
  double x(std::size_t i) const { return static_cast<double>(i) / static_cast<double>(grid() - 1); }
};

struct Snapshot {
  double t = 0.0;
  EdgeState u;
};

using Series = std::vector<Snapshot>;

/// Samples `f(edge, x)` on a grid.
template <class F>
EdgeState sample(const MetricGraph& g, std::size_t grid, F&& f) {
  EdgeState s(grid, g.edge_count());
  for (std::size_t j = 0; j < g.edge_count(); ++j) {
    for (std::size_t i = 0; i < grid; ++i) {
      s.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = f(j, s.x(i));
    }
  }
  return s;
}

/// Piecewise-linear interpolation of `s` onto a grid of a different size.
EdgeState resample(const EdgeState& s, std::size_t grid);

/// Composite Simpson weights on [0,1] for an odd number of points.
Vector simpson_weights(std::size_t grid);

/// Weighted integral sum_j mu_j int_0^1 u_j dx (Simpson).
double mass(const MetricGraph& g, const EdgeState& u);
/// X_2 inner product and norm (Simpson).
double inner_product(const MetricGraph& g, const EdgeState& u, const EdgeState& v);
double norm2(const MetricGraph& g, const EdgeState& u);
/// (sum_j mu_j int |u_j|^p)^(1/p) for finite p (Simpson).
double norm_p(const MetricGraph& g, const EdgeState& u, double p);
/// Grid maximum of |u|; a lower bound of the true sup norm.
double norm_inf(const EdgeState& u);
double grid_min(const EdgeState& u);

}  // namespace qgraph

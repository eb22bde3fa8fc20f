#include "qgraph/edge_state.hpp"

#include <cmath>
#include <stdexcept>

namespace qgraph {

EdgeState resample(const EdgeState& s, std::size_t grid) {
  if (grid < 2 || s.grid() < 2) throw std::invalid_argument("resample needs at least 2 grid points");
  EdgeState out(grid, s.edge_count());
  const double last = static_cast<double>(s.grid() - 1);
  for (std::size_t i = 0; i < grid; ++i) {
    const double pos = out.x(i) * last;
    const auto k = std::min(static_cast<Eigen::Index>(pos), static_cast<Eigen::Index>(s.grid() - 2));
    const double w = pos - static_cast<double>(k);
    out.values.row(static_cast<Eigen::Index>(i)) = (1.0 - w) * s.values.row(k) + w * s.values.row(k + 1);
  }
  return out;
}

Vector simpson_weights(std::size_t grid) {
  if (grid < 3 || grid % 2 == 0) throw std::invalid_argument("Simpson rule needs an odd grid of at least 3 points");
  const auto n = static_cast<Eigen::Index>(grid);
  const double h = 1.0 / static_cast<double>(grid - 1);
  Vector w(n);
  for (Eigen::Index i = 0; i < n; ++i) w[i] = (i % 2 == 1) ? 4.0 : 2.0;
  w[0] = w[n - 1] = 1.0;
  return w * (h / 3.0);
}

double mass(const MetricGraph& g, const EdgeState& u) {
  const Vector w = simpson_weights(u.grid());
  double total = 0.0;
  for (std::size_t j = 0; j < g.edge_count(); ++j) {
    total += g.edge(j).mu * w.dot(u.values.col(static_cast<Eigen::Index>(j)));
  }
  return total;
}

double inner_product(const MetricGraph& g, const EdgeState& u, const EdgeState& v) {
  const Vector w = simpson_weights(u.grid());
  double total = 0.0;
  for (std::size_t j = 0; j < g.edge_count(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    total += g.edge(j).mu * w.dot(u.values.col(jj).cwiseProduct(v.values.col(jj)));
  }
  return total;
}

double norm2(const MetricGraph& g, const EdgeState& u) { return std::sqrt(std::max(0.0, inner_product(g, u, u))); }

double norm_p(const MetricGraph& g, const EdgeState& u, double p) {
  const Vector w = simpson_weights(u.grid());
  double total = 0.0;
  for (std::size_t j = 0; j < g.edge_count(); ++j) {
    const Vector col = u.values.col(static_cast<Eigen::Index>(j)).cwiseAbs().array().pow(p);
    total += g.edge(j).mu * w.dot(col);
  }
  return std::pow(total, 1.0 / p);
}

double norm_inf(const EdgeState& u) { return u.values.cwiseAbs().maxCoeff(); }

double grid_min(const EdgeState& u) { return u.values.minCoeff(); }

}  // namespace qgraph

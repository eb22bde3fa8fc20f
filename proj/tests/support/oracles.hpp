#pragma once

// Reference computations used only by tests. Each one is written from the
// definition, without calling the library routine it checks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qgraph/enumerate.hpp"
#include "qgraph/metric_graph.hpp"

namespace qgraph::testing {

inline constexpr double kPi = std::numbers::pi;

/// Connected check on the subgraph keeping edges where keep[j] is true.
inline bool connected_without(const MetricGraph& g, const std::vector<bool>& keep) {
  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> label(n);
  for (std::size_t i = 0; i < n; ++i) label[i] = i;
  // naive union by relabelling
  for (std::size_t j = 0; j < g.edge_count(); ++j) {
    if (!keep[j]) continue;
    const std::size_t a = label[g.edge(j).tail], b = label[g.edge(j).head];
    if (a == b) continue;
    for (auto& l : label) {
      if (l == b) l = a;
    }
  }
  return std::all_of(label.begin(), label.end(), [&](std::size_t l) { return l == label[0]; });
}

/// Smallest number of edges whose removal disconnects g, by trying every
/// subset in order of size.
inline int brute_force_edge_connectivity(const MetricGraph& g) {
  const std::size_t m = g.edge_count();
  for (std::size_t k = 1; k <= m; ++k) {
    std::vector<bool> pick(m, false);
    std::fill(pick.end() - static_cast<long>(k), pick.end(), true);
    do {
      std::vector<bool> keep(m);
      for (std::size_t j = 0; j < m; ++j) keep[j] = !pick[j];
      if (!connected_without(g, keep)) return static_cast<int>(k);
    } while (std::next_permutation(pick.begin(), pick.end()));
  }
  return static_cast<int>(m);
}

/// Diameter by Floyd-Warshall.
inline int floyd_diameter(const MetricGraph& g) {
  const std::size_t n = g.vertex_count();
  const int inf = std::numeric_limits<int>::max() / 4;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : g.edges()) d[e.tail][e.head] = d[e.head][e.tail] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  int best = 0;
  for (const auto& row : d)
    for (int v : row) best = std::max(best, v);
  return best;
}

/// Rank by Gaussian elimination with partial pivoting.
inline int row_reduction_rank(Eigen::MatrixXd a, double tol = 1e-10) {
  int rank = 0;
  const auto rows = a.rows(), cols = a.cols();
  for (Eigen::Index c = 0; c < cols && rank < rows; ++c) {
    Eigen::Index piv = rank;
    for (Eigen::Index r = rank; r < rows; ++r) {
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    }
    if (std::abs(a(piv, c)) < tol) continue;
    a.row(piv).swap(a.row(rank));
    for (Eigen::Index r = rank + 1; r < rows; ++r) a.row(r) -= a(r, c) / a(rank, c) * a.row(rank);
    ++rank;
  }
  return rank;
}

/// Odd cycle test via traces of odd powers of the adjacency matrix.
inline bool bipartite_by_traces(const MetricGraph& g) {
  const Eigen::MatrixXd a = adjacency(g);
  Eigen::MatrixXd p = a;
  for (std::size_t k = 1; k <= g.vertex_count(); k += 2) {
    if (std::abs(p.trace()) > 0.5) return false;
    p = p * a * a;
  }
  return true;
}

/// Entry (i,k) of the generalized adjacency matrix from its definition.
inline double direct_generalized_adjacency(const MetricGraph& g, double lambda, std::size_t i, std::size_t k) {
  double s = 0.0;
  for (const auto& e : g.edges()) {
    if ((e.tail == i && e.head == k) || (e.tail == k && e.head == i)) {
      s += e.mu * std::sqrt(e.c) / std::sin(std::sqrt(lambda / e.c));
    }
  }
  return s;
}

inline double direct_generalized_degree(const MetricGraph& g, double lambda, std::size_t i) {
  double s = 0.0;
  for (const auto& e : g.edges()) {
    if (e.tail == i || e.head == i) {
      const double t = std::sqrt(lambda / e.c);
      s += e.mu * std::sqrt(e.c) * std::cos(t) / std::sin(t);
    }
  }
  return s;
}

/// Laplace eigenvalues of a circle of length L up to lambda_max, repeated by
/// multiplicity: 0 once, then (2 pi k / L)^2 twice.
inline std::vector<double> circle_spectrum(double length, double lambda_max) {
  std::vector<double> out{0.0};
  for (int k = 1;; ++k) {
    const double v = std::pow(2.0 * kPi * k / length, 2);
    if (v > lambda_max) break;
    out.push_back(v);
    out.push_back(v);
  }
  return out;
}

/// Trapezoid-rule X_2 inner product of two pointwise functions.
template <class F, class G>
double trapezoid_inner(const MetricGraph& g, F&& f, G&& h, int points = 20001) {
  double total = 0.0;
  for (std::size_t j = 0; j < g.edge_count(); ++j) {
    double s = 0.0;
    for (int i = 0; i < points; ++i) {
      const double x = static_cast<double>(i) / (points - 1);
      const double w = (i == 0 || i == points - 1) ? 0.5 : 1.0;
      s += w * f(j, x) * h(j, x);
    }
    total += g.edge(j).mu * s / (points - 1);
  }
  return total;
}

/// Random valid graph: an enumerated shape with random orientation, c and mu.
inline MetricGraph random_weighted_graph(std::mt19937_64& rng, std::size_t max_n = 6) {
  std::uniform_int_distribution<std::size_t> pick_n(3, max_n);
  const std::size_t n = pick_n(rng);
  std::vector<MetricGraph> shapes;
  for_each_graph(n, {}, [&](const MetricGraph& g) { shapes.push_back(g); });
  std::uniform_int_distribution<std::size_t> pick(0, shapes.size() - 1);
  const MetricGraph& base = shapes[pick(rng)];
  std::uniform_real_distribution<double> cdist(0.25, 4.0), mdist(0.5, 3.0);
  std::bernoulli_distribution flip(0.5);
  RawGraph raw = base.to_raw();
  for (auto& e : raw.edges) {
    e.c = cdist(rng);
    e.mu = mdist(rng);
    if (flip(rng)) std::swap(e.from, e.to);
  }
  return validate(raw);
}

}  // namespace qgraph::testing

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "qgraph/metric_graph.hpp"

namespace qgraph {

/// Graph on vertices "v1".."vn" with edges e1..em oriented as listed. Empty
/// spans for c / mu mean all ones. Throws like validate().
MetricGraph graph_from_edges(std::size_t n,
                             std::span<const std::pair<std::size_t, std::size_t>> edges,
                             std::span<const double> c = {}, std::span<const double> mu = {});

/// Cycle C_n with edges v_k -> v_{k+1} (and v_n -> v_1).
MetricGraph cycle_graph(std::size_t n, double c = 1.0, double mu = 1.0);
/// Complete graph K_n with edges v_i -> v_k for i < k, listed lexicographically.
MetricGraph complete_graph(std::size_t n, double c = 1.0, double mu = 1.0);

struct EnumerationOptions {
  std::size_t min_degree = 2;
  /// Visit one representative per isomorphism class instead of every
  /// labelled graph.
  bool up_to_isomorphism = true;
};

/// Calls `visit` for each connected simple graph on exactly n vertices
/// (n <= 8) satisfying the options. Unit coefficients. Returns the count.
std::size_t for_each_graph(std::size_t n, const EnumerationOptions& options,
                           const std::function<void(const MetricGraph&)>& visit);

}  // namespace qgraph

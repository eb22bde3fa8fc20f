#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qgraph {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Unvalidated graph description as read from a graph file.
struct RawEdge {
  std::string id;
  std::string from;
  std::string to;
  double c = 1.0;
  double mu = 1.0;
};

struct RawGraph {
  std::vector<std::string> vertices;
  std::vector<RawEdge> edges;
};

/// Edge e_j parameterized on [0,1] with e_j(0) = tail and e_j(1) = head.
struct Edge {
  std::string id;
  std::size_t tail = 0;
  std::size_t head = 0;
  double c = 1.0;   // diffusivity / squared propagation speed
  double mu = 1.0;  // Kirchhoff weight
};

/// Finite, connected, simple network with every vertex of degree >= 2 and
/// strictly positive constant edge coefficients. Instances can only be
/// obtained through validate(), so every MetricGraph satisfies these
/// invariants. Immutable after construction.
class MetricGraph {
 public:
  std::size_t vertex_count() const noexcept { return vertex_ids_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  const std::vector<std::string>& vertex_ids() const noexcept { return vertex_ids_; }
  std::span<const Edge> edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t j) const { return edges_.at(j); }

  /// Indices of the edges having an endpoint at vertex i.
  std::span<const std::size_t> incident_edges(std::size_t i) const { return incident_.at(i); }
  std::size_t degree(std::size_t i) const { return incident_.at(i).size(); }
  std::vector<std::size_t> degrees() const;

  /// All c_j == 1.
  bool unit_speed() const noexcept;
  /// All mu_j equal.
  bool uniform_node_weight() const noexcept;
  /// Common vertex degree, if the graph is regular.
  std::optional<std::size_t> regular_degree() const noexcept;
  double total_node_weight() const noexcept;

  /// Copy with edge j reversed (tail and head swapped).
  MetricGraph with_flipped_edge(std::size_t j) const;
  RawGraph to_raw() const;

 private:
  friend MetricGraph validate(const RawGraph& raw);
  MetricGraph() = default;

  std::vector<std::string> vertex_ids_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> incident_;
};

/// Validates a raw description and normalizes ids to dense indices (input
/// order is preserved). Throws qgraph::Error with one of Disconnected,
/// LoopEdge, ParallelEdge, DegreeBelowTwo, NonpositiveWeight, UnknownVertex
/// or DuplicateId; the message names the offending element.
MetricGraph validate(const RawGraph& raw);

/// The five n x m incidence matrices. phi_plus marks tails, phi_minus heads;
/// the weighted variants carry mu_j * c_j in place of the ones.
struct IncidenceSet {
  Matrix phi_plus;
  Matrix phi_minus;
  Matrix phi;
  Matrix phi_w_plus;
  Matrix phi_w_minus;
};

IncidenceSet incidence(const MetricGraph& g);

/// Standard 0-1 adjacency matrix.
Matrix adjacency(const MetricGraph& g);
Matrix degree_matrix(const MetricGraph& g);
/// Combinatorial Laplacian D - A.
Matrix laplacian(const MetricGraph& g);
/// Random-walk transition matrix D^{-1} A. Row stochastic, not symmetric
/// unless the graph is regular.
Matrix transition_matrix(const MetricGraph& g);

/// Eigenvalues of the Laplacian, ascending.
Vector laplacian_spectrum(const MetricGraph& g);
/// Eigenvalues of the transition matrix, ascending. Computed from the
/// symmetric similar matrix D^{-1/2} A D^{-1/2}.
Vector transition_spectrum(const MetricGraph& g);

struct Bipartition {
  std::vector<std::size_t> first;
  std::vector<std::size_t> second;
};

/// Two-colouring of the vertices, or nullopt if the graph has an odd cycle.
/// Vertex 0 is always in `first`.
std::optional<Bipartition> bipartition(const MetricGraph& g);

/// Minimum number of edges whose removal disconnects the graph, via unit
/// capacity max-flow from vertex 0 to every other vertex.
int edge_connectivity(const MetricGraph& g);

/// Largest shortest-path distance, counted in edges.
int diameter(const MetricGraph& g);

struct GraphParams {
  std::vector<std::size_t> degree;
  std::optional<std::size_t> gamma;
  std::optional<Bipartition> bipartition;
  int eta = 0;
  int diam = 0;
  Vector nu;  // Laplacian eigenvalues, ascending

  double nu2() const { return nu.size() > 1 ? nu[1] : 0.0; }
};

GraphParams graph_params(const MetricGraph& g);

}  // namespace qgraph

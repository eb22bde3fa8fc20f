#include "qgraph/metric_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <unordered_map>
#include <utility>

#include "qgraph/error.hpp"

namespace qgraph {

std::vector<std::size_t> MetricGraph::degrees() const {
  std::vector<std::size_t> out(vertex_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = incident_[i].size();
  return out;
}

bool MetricGraph::unit_speed() const noexcept {
  return std::all_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.c == 1.0; });
}

bool MetricGraph::uniform_node_weight() const noexcept {
  return std::all_of(edges_.begin(), edges_.end(),
                     [&](const Edge& e) { return e.mu == edges_.front().mu; });
}

std::optional<std::size_t> MetricGraph::regular_degree() const noexcept {
  const std::size_t d0 = incident_.front().size();
  for (const auto& inc : incident_) {
    if (inc.size() != d0) return std::nullopt;
  }
  return d0;
}

double MetricGraph::total_node_weight() const noexcept {
  double total = 0.0;
  for (const auto& e : edges_) total += e.mu;
  return total;
}

MetricGraph MetricGraph::with_flipped_edge(std::size_t j) const {
  MetricGraph out = *this;
  std::swap(out.edges_.at(j).tail, out.edges_.at(j).head);
  return out;
}

RawGraph MetricGraph::to_raw() const {
  RawGraph raw;
  raw.vertices = vertex_ids_;
  for (const auto& e : edges_) {
    raw.edges.push_back({e.id, vertex_ids_[e.tail], vertex_ids_[e.head], e.c, e.mu});
  }
  return raw;
}

namespace {

bool connected(std::size_t n, const std::vector<std::vector<std::size_t>>& nbrs) {
  std::vector<bool> seen(n, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    for (std::size_t w : nbrs[v]) {
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        stack.push_back(w);
      }
    }
  }
  return count == n;
}

std::vector<std::vector<std::size_t>> neighbours(const MetricGraph& g) {
  std::vector<std::vector<std::size_t>> nbrs(g.vertex_count());
  for (const auto& e : g.edges()) {
    nbrs[e.tail].push_back(e.head);
    nbrs[e.head].push_back(e.tail);
  }
  return nbrs;
}

}  // namespace

MetricGraph validate(const RawGraph& raw) {
  MetricGraph g;
  std::unordered_map<std::string, std::size_t> index;
  for (const auto& id : raw.vertices) {
    if (!index.emplace(id, index.size()).second) {
      throw Error(ErrorCode::DuplicateId, "vertex '" + id + "' listed twice");
    }
  }
  if (raw.vertices.empty()) {
    throw Error(ErrorCode::Disconnected, "graph has no vertices");
  }
  g.vertex_ids_ = raw.vertices;

  std::set<std::string> edge_ids;
  std::set<std::pair<std::size_t, std::size_t>> endpoints;
  for (const auto& re : raw.edges) {
    if (!edge_ids.insert(re.id).second) {
      throw Error(ErrorCode::DuplicateId, "edge '" + re.id + "' listed twice");
    }
    const auto tail = index.find(re.from);
    const auto head = index.find(re.to);
    if (tail == index.end() || head == index.end()) {
      const std::string& missing = tail == index.end() ? re.from : re.to;
      throw Error(ErrorCode::UnknownVertex,
                  "edge '" + re.id + "' references unknown vertex '" + missing + "'");
    }
    if (!(re.c > 0.0) || !(re.mu > 0.0) || !std::isfinite(re.c) || !std::isfinite(re.mu)) {
      throw Error(ErrorCode::NonpositiveWeight,
                  "edge '" + re.id + "' needs finite c > 0 and mu > 0");
    }
    if (tail->second == head->second) {
      throw Error(ErrorCode::LoopEdge, "edge '" + re.id + "' is a loop at '" + re.from + "'");
    }
    const auto key = std::minmax(tail->second, head->second);
    if (!endpoints.insert(key).second) {
      throw Error(ErrorCode::ParallelEdge, "edge '" + re.id + "' duplicates an edge between '" +
                                               re.from + "' and '" + re.to + "'");
    }
    g.edges_.push_back({re.id, tail->second, head->second, re.c, re.mu});
  }

  const std::size_t n = g.vertex_ids_.size();
  g.incident_.assign(n, {});
  for (std::size_t j = 0; j < g.edges_.size(); ++j) {
    g.incident_[g.edges_[j].tail].push_back(j);
    g.incident_[g.edges_[j].head].push_back(j);
  }
  if (!connected(n, neighbours(g))) {
    throw Error(ErrorCode::Disconnected, "graph is not connected");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (g.incident_[i].size() < 2) {
      throw Error(ErrorCode::DegreeBelowTwo, "vertex '" + g.vertex_ids_[i] + "' has degree " +
                                                 std::to_string(g.incident_[i].size()));
    }
  }
  return g;
}

IncidenceSet incidence(const MetricGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  const auto m = static_cast<Eigen::Index>(g.edge_count());
  IncidenceSet s;
  s.phi_plus = Matrix::Zero(n, m);
  s.phi_minus = Matrix::Zero(n, m);
  s.phi_w_plus = Matrix::Zero(n, m);
  s.phi_w_minus = Matrix::Zero(n, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    const Edge& e = g.edge(static_cast<std::size_t>(j));
    const auto t = static_cast<Eigen::Index>(e.tail);
    const auto h = static_cast<Eigen::Index>(e.head);
    s.phi_plus(t, j) = 1.0;
    s.phi_minus(h, j) = 1.0;
    s.phi_w_plus(t, j) = e.mu * e.c;
    s.phi_w_minus(h, j) = e.mu * e.c;
  }
  s.phi = s.phi_plus - s.phi_minus;
  return s;
}

Matrix adjacency(const MetricGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  Matrix a = Matrix::Zero(n, n);
  for (const auto& e : g.edges()) {
    a(static_cast<Eigen::Index>(e.tail), static_cast<Eigen::Index>(e.head)) = 1.0;
    a(static_cast<Eigen::Index>(e.head), static_cast<Eigen::Index>(e.tail)) = 1.0;
  }
  return a;
}

Matrix degree_matrix(const MetricGraph& g) {
  Vector d(static_cast<Eigen::Index>(g.vertex_count()));
  for (std::size_t i = 0; i < g.vertex_count(); ++i) {
    d[static_cast<Eigen::Index>(i)] = static_cast<double>(g.degree(i));
  }
  return d.asDiagonal();
}

Matrix laplacian(const MetricGraph& g) { return degree_matrix(g) - adjacency(g); }

Matrix transition_matrix(const MetricGraph& g) {
  return degree_matrix(g).diagonal().cwiseInverse().asDiagonal() * adjacency(g);
}

Vector laplacian_spectrum(const MetricGraph& g) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(laplacian(g), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Vector transition_spectrum(const MetricGraph& g) {
  const Vector inv_sqrt = degree_matrix(g).diagonal().cwiseSqrt().cwiseInverse();
  const Matrix s = inv_sqrt.asDiagonal() * adjacency(g) * inv_sqrt.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Matrix> es(s, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

std::optional<Bipartition> bipartition(const MetricGraph& g) {
  const auto nbrs = neighbours(g);
  std::vector<int> colour(g.vertex_count(), -1);
  std::queue<std::size_t> q;
  colour[0] = 0;
  q.push(0);
  while (!q.empty()) {
    const std::size_t v = q.front();
    q.pop();
    for (std::size_t w : nbrs[v]) {
      if (colour[w] < 0) {
        colour[w] = 1 - colour[v];
        q.push(w);
      } else if (colour[w] == colour[v]) {
        return std::nullopt;
      }
    }
  }
  Bipartition b;
  for (std::size_t i = 0; i < colour.size(); ++i) {
    (colour[i] == 0 ? b.first : b.second).push_back(i);
  }
  return b;
}

namespace {

// Edmonds-Karp on the symmetric unit-capacity network of g.
int max_flow(const MetricGraph& g, std::size_t source, std::size_t sink) {
  const std::size_t n = g.vertex_count();
  std::vector<std::vector<int>> cap(n, std::vector<int>(n, 0));
  for (const auto& e : g.edges()) {
    cap[e.tail][e.head] += 1;
    cap[e.head][e.tail] += 1;
  }
  int flow = 0;
  for (;;) {
    std::vector<std::size_t> parent(n, n);
    parent[source] = source;
    std::queue<std::size_t> q;
    q.push(source);
    while (!q.empty() && parent[sink] == n) {
      const std::size_t v = q.front();
      q.pop();
      for (std::size_t w = 0; w < n; ++w) {
        if (parent[w] == n && cap[v][w] > 0) {
          parent[w] = v;
          q.push(w);
        }
      }
    }
    if (parent[sink] == n) return flow;
    for (std::size_t v = sink; v != source; v = parent[v]) {
      cap[parent[v]][v] -= 1;
      cap[v][parent[v]] += 1;
    }
    ++flow;
  }
}

}  // namespace

int edge_connectivity(const MetricGraph& g) {
  int best = std::numeric_limits<int>::max();
  for (std::size_t t = 1; t < g.vertex_count(); ++t) best = std::min(best, max_flow(g, 0, t));
  return best;
}

int diameter(const MetricGraph& g) {
  const auto nbrs = neighbours(g);
  const std::size_t n = g.vertex_count();
  int diam = 0;
  for (std::size_t s = 0; s < n; ++s) {
    std::vector<int> dist(n, -1);
    std::queue<std::size_t> q;
    dist[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const std::size_t v = q.front();
      q.pop();
      for (std::size_t w : nbrs[v]) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          diam = std::max(diam, dist[w]);
          q.push(w);
        }
      }
    }
  }
  return diam;
}

GraphParams graph_params(const MetricGraph& g) {
  GraphParams p;
  p.degree = g.degrees();
  p.gamma = g.regular_degree();
  p.bipartition = bipartition(g);
  p.eta = edge_connectivity(g);
  p.diam = diameter(g);
  p.nu = laplacian_spectrum(g);
  return p;
}

}  // namespace qgraph

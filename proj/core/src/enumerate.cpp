#include "qgraph/enumerate.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace qgraph {

MetricGraph graph_from_edges(std::size_t n,
                             std::span<const std::pair<std::size_t, std::size_t>> edges,
                             std::span<const double> c, std::span<const double> mu) {
  RawGraph raw;
  for (std::size_t i = 0; i < n; ++i) raw.vertices.push_back("v" + std::to_string(i + 1));
  for (std::size_t j = 0; j < edges.size(); ++j) {
    RawEdge e;
    e.id = "e" + std::to_string(j + 1);
    e.from = raw.vertices.at(edges[j].first);
    e.to = raw.vertices.at(edges[j].second);
    e.c = c.empty() ? 1.0 : c[j];
    e.mu = mu.empty() ? 1.0 : mu[j];
    raw.edges.push_back(std::move(e));
  }
  return validate(raw);
}

MetricGraph cycle_graph(std::size_t n, double c, double mu) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t k = 0; k < n; ++k) edges.emplace_back(k, (k + 1) % n);
  const std::vector<double> cs(n, c), mus(n, mu);
  return graph_from_edges(n, edges, cs, mus);
}

MetricGraph complete_graph(std::size_t n, double c, double mu) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) edges.emplace_back(i, k);
  }
  const std::vector<double> cs(edges.size(), c), mus(edges.size(), mu);
  return graph_from_edges(n, edges, cs, mus);
}

namespace {

using Mask = std::uint32_t;

struct PairTable {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::vector<int>> index;  // index[i][k] -> bit position
  std::vector<Mask> vertex_bits;        // bits of pairs touching vertex i
};

PairTable make_table(std::size_t n) {
  PairTable t;
  t.index.assign(n, std::vector<int>(n, -1));
  t.vertex_bits.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      const int b = static_cast<int>(t.pairs.size());
      t.index[i][k] = t.index[k][i] = b;
      t.vertex_bits[i] |= Mask{1} << b;
      t.vertex_bits[k] |= Mask{1} << b;
      t.pairs.emplace_back(i, k);
    }
  }
  return t;
}

bool mask_connected(Mask mask, const PairTable& t, std::size_t n) {
  std::uint32_t seen = 1, frontier = 1;
  while (frontier) {
    std::uint32_t next = 0;
    for (std::size_t v = 0; v < n; ++v) {
      if (!(frontier >> v & 1u)) continue;
      for (std::size_t w = 0; w < n; ++w) {
        if (w != v && (mask >> t.index[v][w] & 1u) && !(seen >> w & 1u)) next |= 1u << w;
      }
    }
    seen |= next;
    frontier = next;
  }
  return seen == (1u << n) - 1;
}

Mask relabel(Mask mask, const PairTable& t, const std::vector<std::size_t>& perm) {
  Mask out = 0;
  for (std::size_t b = 0; b < t.pairs.size(); ++b) {
    if (mask >> b & 1u) {
      out |= Mask{1} << t.index[perm[t.pairs[b].first]][perm[t.pairs[b].second]];
    }
  }
  return out;
}

// Smallest relabelling over permutations that only shuffle vertices inside
// blocks of equal degree. The vertex order is already degree-sorted, so
// this is a complete invariant on that set of labelled graphs.
Mask canonical(Mask mask, const PairTable& t, const std::vector<int>& deg) {
  const std::size_t n = deg.size();
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  for (std::size_t s = 0; s < n;) {
    std::size_t e = s;
    while (e < n && deg[e] == deg[s]) ++e;
    blocks.emplace_back(s, e);
    s = e;
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Mask best = mask;
  // odometer over per-block permutations
  for (;;) {
    best = std::min(best, relabel(mask, t, perm));
    std::size_t b = 0;
    for (; b < blocks.size(); ++b) {
      auto first = perm.begin() + static_cast<std::ptrdiff_t>(blocks[b].first);
      auto last = perm.begin() + static_cast<std::ptrdiff_t>(blocks[b].second);
      if (std::next_permutation(first, last)) break;
    }
    if (b == blocks.size()) return best;
  }
}

}  // namespace

std::size_t for_each_graph(std::size_t n, const EnumerationOptions& options,
                           const std::function<void(const MetricGraph&)>& visit) {
  if (n < 3 || n > 8) throw std::invalid_argument("for_each_graph supports 3 <= n <= 8");
  const PairTable t = make_table(n);
  const std::size_t pair_count = t.pairs.size();
  std::unordered_set<Mask> seen;
  std::size_t count = 0;
  std::vector<int> deg(n);
  const std::uint64_t limit = std::uint64_t{1} << pair_count;
  for (std::uint64_t m = 0; m < limit; ++m) {
    const auto mask = static_cast<Mask>(m);
    bool ok = true;
    for (std::size_t v = 0; v < n && ok; ++v) {
      deg[v] = std::popcount(mask & t.vertex_bits[v]);
      if (static_cast<std::size_t>(deg[v]) < options.min_degree) ok = false;
      if (options.up_to_isomorphism && v > 0 && deg[v] < deg[v - 1]) ok = false;
    }
    if (!ok || !mask_connected(mask, t, n)) continue;
    if (options.up_to_isomorphism && !seen.insert(canonical(mask, t, deg)).second) continue;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t b = 0; b < pair_count; ++b) {
      if (mask >> b & 1u) edges.push_back(t.pairs[b]);
    }
    visit(graph_from_edges(n, edges));
    ++count;
  }
  return count;
}

}  // namespace qgraph

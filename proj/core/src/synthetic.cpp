#include "dosgk/synthetic.hpp"

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "dosgk/error.hpp"

namespace dosgk::synthetic {

using EdgeSet = std::set<std::pair<Index, Index>>;

namespace {

void add_edge(EdgeSet& edges, Index u, Index v) {
  if (u != v) edges.emplace(std::min(u, v), std::max(u, v));
}

CsrGraph build(Index n, const EdgeSet& edges) {
  return CsrGraph::from_undirected_edges(n, std::vector<std::pair<Index, Index>>(edges.begin(), edges.end()));
}

}  // namespace

CsrGraph erdos_renyi(Index n, double p, std::mt19937_64& rng) {
  if (n < 0 || p < 0.0 || p > 1.0) throw Error(ErrorCode::InvalidConfig, "erdos_renyi: need n >= 0, p in [0,1]");
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  EdgeSet edges;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (unit(rng) < p) add_edge(edges, i, j);
    }
  }
  return build(n, edges);
}

CsrGraph preferential_attachment(Index n, Index m, std::mt19937_64& rng) {
  if (m < 1 || n < m + 1) throw Error(ErrorCode::InvalidConfig, "preferential_attachment: need m >= 1, n > m");
  std::vector<std::pair<Index, Index>> edges;
  edges.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(m));
  // Each node appears once per incident edge, so uniform picks are degree-biased.
  std::vector<Index> endpoints;
  endpoints.reserve(2 * static_cast<std::size_t>(n) * static_cast<std::size_t>(m));
  for (Index i = 0; i <= m; ++i) {
    for (Index j = i + 1; j <= m; ++j) {
      edges.emplace_back(i, j);
      endpoints.push_back(i);
      endpoints.push_back(j);
    }
  }
  std::vector<Index> targets;
  for (Index v = m + 1; v < n; ++v) {
    targets.clear();
    std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
    while (static_cast<Index>(targets.size()) < m) {
      const Index t = endpoints[pick(rng)];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (Index t : targets) {
      edges.emplace_back(t, v);
      endpoints.push_back(t);
      endpoints.push_back(v);
    }
  }
  return CsrGraph::from_undirected_edges(n, edges);
}

CsrGraph circulant(Index n, Index half_degree) {
  if (half_degree < 1 || n <= 2 * half_degree) {
    throw Error(ErrorCode::InvalidConfig, "circulant: need half_degree >= 1 and n > 2 half_degree");
  }
  std::vector<std::pair<Index, Index>> edges;
  edges.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(half_degree));
  for (Index i = 0; i < n; ++i) {
    for (Index k = 1; k <= half_degree; ++k) edges.emplace_back(i, (i + k) % n);
  }
  return CsrGraph::from_undirected_edges(n, edges);
}

CsrGraph random_regular(Index n, Index degree, std::mt19937_64& rng) {
  if (degree < 1 || n <= degree) throw Error(ErrorCode::InvalidConfig, "random_regular: need 1 <= degree < n");
  std::vector<Index> stubs;
  stubs.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(degree));
  for (Index i = 0; i < n; ++i) stubs.insert(stubs.end(), static_cast<std::size_t>(degree), i);
  std::shuffle(stubs.begin(), stubs.end(), rng);
  EdgeSet edges;
  for (std::size_t k = 0; k + 1 < stubs.size(); k += 2) {
    if (stubs[k] != stubs[k + 1]) add_edge(edges, stubs[k], stubs[k + 1]);
  }
  return build(n, edges);
}

CsrGraph with_twins(Index core_nodes, double p, Index false_twins, Index true_twins,
                    std::mt19937_64& rng) {
  if (core_nodes < 2 || false_twins < 0 || true_twins < 0) {
    throw Error(ErrorCode::InvalidConfig, "with_twins: need core_nodes >= 2 and non-negative twin counts");
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  EdgeSet edges;
  // Path backbone keeps the core connected.
  for (Index i = 0; i + 1 < core_nodes; ++i) add_edge(edges, i, i + 1);
  for (Index i = 0; i < core_nodes; ++i) {
    for (Index j = i + 2; j < core_nodes; ++j) {
      if (unit(rng) < p) add_edge(edges, i, j);
    }
  }
  Index n = core_nodes;
  std::uniform_int_distribution<Index> pick(0, core_nodes - 1);
  const auto neighbours = [&](Index v) {
    std::vector<Index> out;
    for (const auto& [a, b] : edges) {
      if (a == v) out.push_back(b);
      if (b == v) out.push_back(a);
    }
    return out;
  };
  // A later twin can rewire earlier pairs; the last false twin always survives.
  for (Index t = 0; t < true_twins; ++t) {
    const Index src = pick(rng);
    const Index twin = n++;
    for (Index u : neighbours(src)) add_edge(edges, twin, u);
    add_edge(edges, twin, src);
  }
  for (Index t = 0; t < false_twins; ++t) {
    const Index src = pick(rng);
    const Index twin = n++;
    for (Index u : neighbours(src)) add_edge(edges, twin, u);
  }
  return build(n, edges);
}

}  // namespace dosgk::synthetic
